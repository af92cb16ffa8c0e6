/**
 * @file qkernel.hpp
 * @brief Root-of-unity arithmetic at q = exp(2πi/N).
 *
 * Residues, cyclic intervals, the θ symbol, q-Pochhammer tables, and the two
 * summation identities used to collapse the figure-eight state sum.
 *
 * Half-integer powers of q are always taken through q^{1/2} = exp(πi/N), i.e.
 * q^{e/2} is evaluated as q_half_pow(e) with integer e.
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace kashaev {

using cplx = std::complex<double>;

enum class PochBase { q, q_inverse };

class QContext {
 public:
  explicit QContext(int n) : n_(n) {
    if (n < 2) {
      throw std::invalid_argument("QContext: N must be >= 2, got " + std::to_string(n));
    }
    // Unit-circle tables from the reduced angle; q^{-j} is the exact conjugate.
    powers_.resize(n_);
    for (int j = 0; j < n_; ++j) {
      const double angle = 2.0 * std::numbers::pi * j / n_;
      powers_[j] = cplx(std::cos(angle), std::sin(angle));
    }
    half_powers_.resize(2 * n_);
    for (int j = 0; j < 2 * n_; ++j) {
      const double angle = std::numbers::pi * j / n_;
      half_powers_[j] = cplx(std::cos(angle), std::sin(angle));
    }
    poch_q_.resize(n_ + 1);
    poch_qinv_.resize(n_ + 1);
    poch_q_[0] = 1.0;
    poch_qinv_[0] = 1.0;
    for (int k = 1; k <= n_; ++k) {
      const cplx qk = powers_[k % n_];
      poch_q_[k] = poch_q_[k - 1] * (1.0 - qk);
      poch_qinv_[k] = poch_qinv_[k - 1] * (1.0 - std::conj(qk));
    }
    // 1 - q^N vanishes identically; the product above leaves rounding noise.
    poch_q_[n_] = 0.0;
    poch_qinv_[n_] = 0.0;
  }

  int N() const { return n_; }
  cplx q() const { return powers_[1 % n_]; }
  cplx q_half() const { return half_powers_[1]; }

  /// x mod N in {0, ..., N-1}; negative x allowed.
  int residue(std::int64_t x) const {
    const std::int64_t r = x % n_;
    return static_cast<int>(r < 0 ? r + n_ : r);
  }

  cplx q_pow(std::int64_t e) const { return powers_[residue(e)]; }

  /// q^{e/2} = exp(πi e / N).
  cplx q_half_pow(std::int64_t e) const {
    std::int64_t r = e % (2 * static_cast<std::int64_t>(n_));
    if (r < 0) r += 2 * n_;
    return half_powers_[static_cast<std::size_t>(r)];
  }

  /// a ∈ [b, c]: q^b, q^a, q^c counterclockwise, coincidences allowed.
  bool in_cyclic_interval(std::int64_t a, std::int64_t b, std::int64_t c) const {
    return residue(a - b) + residue(c - a) == residue(c - b);
  }

  /**
   * θ(k n / l m) by the four-case characterization
   *   k<=l<m<=n,  n<=k<=l<m,  m<=n<=k<=l (m<l),  l<m<=n<=k.
   * Arguments must already be residues.
   */
  int theta(int k, int l, int m, int n) const {
    const bool hit = (k <= l && l < m && m <= n) || (n <= k && k <= l && l < m) ||
                     (m <= n && n <= k && k <= l && m < l) || (l < m && m <= n && n <= k);
    return hit ? 1 : 0;
  }

  /// Support of the R-matrix: θ extended by the all-equal labeling, which is
  /// exactly the set where the four crossing angles sum to N-1.
  bool crossing_support(int k, int l, int m, int n) const {
    return theta(k, l, m, n) == 1 || (k == l && l == m && m == n);
  }

  cplx pochhammer(PochBase base, int n) const {
    if (n < 0 || n > n_) {
      throw std::out_of_range("pochhammer: index " + std::to_string(n) + " outside [0, " +
                              std::to_string(n_) + "]");
    }
    return base == PochBase::q ? poch_q_[n] : poch_qinv_[n];
  }

  /// (q)_n with n >= N read as 0 (the product contains 1 - q^N).
  cplx poch_q_or_zero(std::int64_t n) const {
    return n > n_ ? cplx(0.0) : pochhammer(PochBase::q, static_cast<int>(n));
  }

  const std::vector<cplx>& poch_q_table() const { return poch_q_; }
  const std::vector<cplx>& poch_qinv_table() const { return poch_qinv_; }

 private:
  int n_;
  std::vector<cplx> powers_;
  std::vector<cplx> half_powers_;
  std::vector<cplx> poch_q_;
  std::vector<cplx> poch_qinv_;
};

/// Direct summation side of the reduction lemma, over k ∈ [l, m].
inline cplx reduction_lemma_lhs(const QContext& ctx, int l, int m) {
  const int n = ctx.N();
  cplx total = 0.0;
  for (int k = 0; k < n; ++k) {
    if (!ctx.in_cyclic_interval(k, l, m)) continue;
    const cplx numer = ctx.q_pow(-static_cast<std::int64_t>(m - l + 1) * k);
    const cplx denom = ctx.pochhammer(PochBase::q, ctx.residue(m - k)) *
                       ctx.pochhammer(PochBase::q_inverse, ctx.residue(k - l));
    total += numer / denom;
  }
  return total;
}

/// Closed form (-1)^{[m-l]} q^{([m-l]+1)([m-l]-2m)/2}.
inline cplx reduction_lemma_rhs(const QContext& ctx, int l, int m) {
  const std::int64_t d = ctx.residue(m - l);
  const double sign = (d % 2 == 0) ? 1.0 : -1.0;
  return sign * ctx.q_half_pow((d + 1) * (d - 2 * static_cast<std::int64_t>(m)));
}

/**
 * |lhs - rhs| of the shifted q-binomial summation identity
 *
 *   Σ_{i=0}^{N-1-α} q^{(β-α)i/2} / ((q)_i (q^{-1})_{N-1-α-i})
 *     = (-1)^{N-1-α} q^{-N(N-1)/2 - β(α+1)/2} / N · (q)_α (q)_{N-1-α+h} / (q)_h,
 *
 * with h = [(α-β)/2]. Requires α ≡ β (mod 2) so that h is an integer.
 */
inline double shifted_sum_identity_check(const QContext& ctx, int alpha, std::int64_t beta) {
  const int n = ctx.N();
  if (alpha < 0 || alpha > n - 1) {
    throw std::out_of_range("shifted_sum_identity_check: alpha outside [0, N-1]");
  }
  const std::int64_t diff = alpha - beta;
  if (diff % 2 != 0) {
    throw std::invalid_argument("shifted_sum_identity_check: alpha - beta must be even");
  }
  cplx lhs = 0.0;
  for (int i = 0; i <= n - 1 - alpha; ++i) {
    lhs += ctx.q_half_pow((beta - alpha) * i) /
           (ctx.pochhammer(PochBase::q, i) *
            ctx.pochhammer(PochBase::q_inverse, n - 1 - alpha - i));
  }
  const int h = ctx.residue(diff / 2);
  const double sign = ((n - 1 - alpha) % 2 == 0) ? 1.0 : -1.0;
  const std::int64_t big_n = n;
  const cplx rhs = sign * ctx.q_half_pow(-big_n * (big_n - 1) - beta * (alpha + 1)) /
                   static_cast<double>(n) * ctx.pochhammer(PochBase::q, alpha) *
                   ctx.poch_q_or_zero(static_cast<std::int64_t>(n) - 1 - alpha + h) /
                   ctx.pochhammer(PochBase::q, h);
  return std::abs(lhs - rhs);
}

}  // namespace kashaev
