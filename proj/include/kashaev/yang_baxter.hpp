/**
 * @file yang_baxter.hpp
 * @brief Kashaev's R-matrix, the μ matrix, and dense checks of the enhanced
 *        Yang–Baxter identities.
 *
 * Index convention: R^{k n}_{l m} with k top-left, n top-right, l bottom-left,
 * m bottom-right of a crossing whose strands both run downward. Used as an
 * operator it maps the top pair (k, n) to the bottom pair (l, m).
 *
 * For μ^k_l the superscript k is the label on the right leg of an extremum and
 * the subscript l the label on the left leg.
 */

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <string>

#include "kashaev/errors.hpp"
#include "kashaev/qkernel.hpp"

namespace kashaev {

enum class Sign : int { positive = 1, negative = -1 };

inline cplx r_entry(const QContext& ctx, int k, int n, int l, int m, Sign sign) {
  if (!ctx.crossing_support(k, l, m, n)) return 0.0;
  const std::int64_t K = k, Nn = n, L = l, M = m;
  const double scale = ctx.N();
  if (sign == Sign::positive) {
    const cplx denom = ctx.pochhammer(PochBase::q, ctx.residue(M - L - 1)) *
                       ctx.pochhammer(PochBase::q_inverse, ctx.residue(Nn - M)) *
                       ctx.pochhammer(PochBase::q, ctx.residue(K - Nn)) *
                       ctx.pochhammer(PochBase::q_inverse, ctx.residue(L - K));
    return scale * ctx.q_pow(1 - (L - Nn + 1) * (M - K)) / denom;
  }
  const cplx denom = ctx.pochhammer(PochBase::q_inverse, ctx.residue(M - L - 1)) *
                     ctx.pochhammer(PochBase::q, ctx.residue(Nn - M)) *
                     ctx.pochhammer(PochBase::q_inverse, ctx.residue(K - Nn)) *
                     ctx.pochhammer(PochBase::q, ctx.residue(L - K));
  return scale * ctx.q_pow(-1 + (M - K - 1) * (L - Nn)) / denom;
}

/// μ^k_l = -q^{1/2} at l = [k+1]; (μ^{-1})^k_l = -q^{-1/2} at k = [l+1].
inline cplx mu_entry(const QContext& ctx, int k, int l, Sign sign) {
  if (sign == Sign::positive) {
    return l == ctx.residue(k + 1) ? -ctx.q_half() : cplx(0.0);
  }
  return k == ctx.residue(l + 1) ? -std::conj(ctx.q_half()) : cplx(0.0);
}

/// Dense N^2 x N^2 operator, row (l, m), column (k, n).
inline Eigen::MatrixXcd r_matrix(const QContext& ctx, Sign sign) {
  const int n = ctx.N();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n * n, n * n);
  for (int k = 0; k < n; ++k)
    for (int nn = 0; nn < n; ++nn)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) out(l * n + m, k * n + nn) = r_entry(ctx, k, nn, l, m, sign);
  return out;
}

inline Eigen::MatrixXcd mu_matrix(const QContext& ctx, Sign sign) {
  const int n = ctx.N();
  Eigen::MatrixXcd out(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) out(k, l) = mu_entry(ctx, k, l, sign);
  return out;
}

struct YbeReport {
  int N = 0;
  double braid = 0.0;           // (R⊗1)(1⊗R)(R⊗1) - (1⊗R)(R⊗1)(1⊗R)
  double mu_commutation = 0.0;  // (μ⊗μ)R - R(μ⊗μ)
  double trace_positive = 0.0;  // right closure of R against -q^{1/2} δ
  double trace_negative = 0.0;  // right closure of R^{-1} against (-q^{1/2})^{-1} δ

  double max_residual() const {
    return std::max({braid, mu_commutation, trace_positive, trace_negative});
  }
};

inline constexpr int kDefaultDenseYbeBound = 8;

namespace detail {

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Σ_{a,b} R^{k b}_{l a} μ^b_a: the strand leaving bottom-right returns to the
// top-right through an LR minimum (μ) and an RL maximum (identity).
inline double partial_trace_residual(const QContext& ctx, Sign sign) {
  const int n = ctx.N();
  const cplx expected = sign == Sign::positive ? -ctx.q_half() : 1.0 / (-ctx.q_half());
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      cplx sum = 0.0;
      for (int b = 0; b < n; ++b) {
        const int a = ctx.residue(b + 1);  // μ^b_a ≠ 0 only here
        sum += r_entry(ctx, k, b, l, a, sign) * mu_entry(ctx, b, a, Sign::positive);
      }
      const cplx target = (k == l) ? expected : cplx(0.0);
      worst = std::max(worst, std::abs(sum - target));
    }
  }
  return worst;
}

}  // namespace detail

/// Max absolute deviations of the three enhanced Yang–Baxter identities.
/// The braid check is O(N^9) dense work, hence the bound.
inline YbeReport check_ybe(const QContext& ctx, int max_n = kDefaultDenseYbeBound) {
  const int n = ctx.N();
  if (n > max_n) {
    throw BudgetExceeded("check_ybe: dense check limited to N <= " + std::to_string(max_n) +
                         ", got N = " + std::to_string(n));
  }
  const Eigen::MatrixXcd r = r_matrix(ctx, Sign::positive);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd r1 = detail::kron(r, id);
  const Eigen::MatrixXcd r2 = detail::kron(id, r);

  YbeReport rep;
  rep.N = n;
  rep.braid = ((r1 * r2 * r1) - (r2 * r1 * r2)).cwiseAbs().maxCoeff();

  const Eigen::MatrixXcd mu = mu_matrix(ctx, Sign::positive);
  const Eigen::MatrixXcd mm = detail::kron(mu, mu);
  rep.mu_commutation = ((mm * r) - (r * mm)).cwiseAbs().maxCoeff();

  rep.trace_positive = detail::partial_trace_residual(ctx, Sign::positive);
  rep.trace_negative = detail::partial_trace_residual(ctx, Sign::negative);
  return rep;
}

}  // namespace kashaev
