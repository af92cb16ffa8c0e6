/**
 * @file dilog.hpp
 * @brief Principal-branch dilogarithm, Bloch–Wigner function, and the potential
 *        V(z) = -Li2(z) + Li2(1/z) whose critical point drives the growth of ⟨4_1⟩_N.
 */

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "kashaev/errors.hpp"
#include "kashaev/qkernel.hpp"

namespace kashaev {

namespace detail {

inline constexpr int kBernoulliTerms = 48;

// c[n] = B_n / (n+1)!, from x/(e^x - 1) = Σ B_n x^n / n!.
inline const std::array<double, kBernoulliTerms>& dilog_series_coefficients() {
  static const std::array<double, kBernoulliTerms> coeffs = [] {
    std::array<double, kBernoulliTerms> beta{};  // B_n / n!
    std::array<double, kBernoulliTerms + 2> inv_fact{};
    inv_fact[0] = 1.0;
    for (int j = 1; j < kBernoulliTerms + 2; ++j) inv_fact[j] = inv_fact[j - 1] / j;
    beta[0] = 1.0;
    for (int m = 1; m < kBernoulliTerms; ++m) {
      double acc = 0.0;
      for (int k = 0; k < m; ++k) acc += beta[k] * inv_fact[m + 1 - k];
      beta[m] = -acc;
    }
    std::array<double, kBernoulliTerms> c{};
    for (int n = 0; n < kBernoulliTerms; ++n) c[n] = beta[n] / (n + 1);
    return c;
  }();
  return coeffs;
}

// Valid for |z| <= 1, Re z <= 1/2, where |log(1-z)| stays well inside 2π.
inline cplx dilog_series(cplx z) {
  const cplx u = -std::log(1.0 - z);
  const auto& c = dilog_series_coefficients();
  cplx power = u;
  cplx sum = 0.0;
  for (int n = 0; n < kBernoulliTerms; ++n) {
    // Odd Bernoulli numbers past B_1 vanish.
    if (n <= 1 || n % 2 == 0) {
      const cplx term = c[n] * power;
      sum += term;
      if (n > 2 && std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    power *= u;
  }
  return sum;
}

}  // namespace detail

/// True on the open cut (1, ∞) of the principal branch.
inline bool on_dilog_cut(cplx z) { return z.imag() == 0.0 && z.real() > 1.0; }

/**
 * Principal-branch Li2(z) = -∫_0^z log(1-u)/u du. On the open cut (1, ∞) the
 * limit from below is returned; check on_dilog_cut() to detect that case.
 */
inline cplx dilog(cplx z) {
  constexpr double pi = std::numbers::pi;
  constexpr double zeta2 = pi * pi / 6.0;
  if (z == 0.0) return 0.0;
  if (z == 1.0) return zeta2;
  if (on_dilog_cut(z)) {
    const double x = z.real();
    const double lx = std::log(x);
    return cplx(2.0 * zeta2 - 0.5 * lx * lx, -pi * lx) - dilog(cplx(1.0 / x, 0.0));
  }
  if (std::norm(z) > 1.0) {
    const cplx l = std::log(-z);
    return -zeta2 - 0.5 * l * l - dilog(1.0 / z);
  }
  if (z.real() > 0.5) {
    return zeta2 - std::log(z) * std::log(1.0 - z) - detail::dilog_series(1.0 - z);
  }
  return detail::dilog_series(z);
}

/// D(z) = Im Li2(z) + arg(1-z) log|z|; volume of the ideal tetrahedron of shape z.
inline double bloch_wigner(cplx z) {
  if (z == 0.0 || z == 1.0) {
    throw DomainError("bloch_wigner: undefined at z = 0 and z = 1");
  }
  if (z.imag() == 0.0) return 0.0;
  return dilog(z).imag() + std::arg(1.0 - z) * std::log(std::abs(z));
}

inline void require_regular_point(cplx z, const char* who) {
  if (z == 0.0 || z == 1.0) {
    throw DomainError(std::string(who) + ": singular at z = 0 and z = 1");
  }
}

inline cplx potential(cplx z) {
  require_regular_point(z, "potential");
  return -dilog(z) + dilog(1.0 / z);
}

inline cplx potential_derivative(cplx z) {
  require_regular_point(z, "potential_derivative");
  return (std::log(1.0 - z) + std::log(1.0 - 1.0 / z)) / z;
}

inline cplx potential_second_derivative(cplx z) {
  require_regular_point(z, "potential_second_derivative");
  const cplx f = std::log(1.0 - z) + std::log(1.0 - 1.0 / z);
  return -1.0 / (z * (1.0 - z)) + 1.0 / (z * z * (z - 1.0)) - f / (z * z);
}

/// Roots of z^2 - z + 1 = 0: (1 + i√3)/2 and (1 - i√3)/2.
inline std::array<cplx, 2> saddle_roots() {
  const double h = std::sqrt(3.0) / 2.0;
  return {cplx(0.5, h), cplx(0.5, -h)};
}

inline cplx saddle_polynomial(cplx z) { return z * z - z + 1.0; }

struct SaddleOptions {
  double tol = 1e-14;
  int max_iterations = 60;
};

struct SaddleResult {
  cplx root;
  int iterations = 0;
  double residual = 0.0;      // |z^2 - z + 1| at the root
  std::vector<double> trace;  // |dV/dz| per iterate
};

/// Newton's method on dV/dz.
inline SaddleResult saddle_solve(cplx initial, const SaddleOptions& opt = {}) {
  SaddleResult out;
  cplx z = initial;
  for (int it = 0; it <= opt.max_iterations; ++it) {
    const cplx g = potential_derivative(z);
    out.trace.push_back(std::abs(g));
    if (!std::isfinite(out.trace.back())) break;
    if (out.trace.back() < opt.tol) {
      out.root = z;
      out.iterations = it;
      out.residual = std::abs(saddle_polynomial(z));
      return out;
    }
    if (it == opt.max_iterations) break;
    z -= g / potential_second_derivative(z);
    if (z == 0.0 || z == 1.0) break;
  }
  throw ConvergenceError("saddle_solve: no convergence from initial point", out.trace);
}

/// Growth rate Re(V(z)/(2πi)) of a saddle candidate.
inline double growth_rate(cplx z) {
  return (potential(z) / cplx(0.0, 2.0 * std::numbers::pi)).real();
}

/// The saddle root maximizing Re(V/(2πi)).
inline cplx growth_root() {
  const auto roots = saddle_roots();
  return growth_rate(roots[0]) >= growth_rate(roots[1]) ? roots[0] : roots[1];
}

}  // namespace kashaev
