/**
 * @file asymptotics.hpp
 * @brief Closed forms of ⟨4_1⟩_N and ⟨3_1⟩_N, growth sequences, and the fit
 *        log|⟨K⟩_N| ≈ a N + b log N + c that estimates the volume as 2π a.
 */

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kashaev/dilog.hpp"
#include "kashaev/errors.hpp"
#include "kashaev/qkernel.hpp"

namespace kashaev {

/// Σ_{j=0}^{N-1} (q)_j (q^{-1})_j. Overflows double near N = 2200; see kashaev_41_log_modulus.
inline cplx kashaev_41(int n) {
  const QContext ctx(n);
  cplx sum = 0.0;
  for (int j = 0; j < n; ++j) {
    sum += ctx.pochhammer(PochBase::q, j) * ctx.pochhammer(PochBase::q_inverse, j);
  }
  return sum;
}

/// log Σ_j |(q)_j|^2, accumulated in log space so that no term overflows.
inline double kashaev_41_log_modulus(int n) {
  if (n < 2) throw std::invalid_argument("kashaev_41_log_modulus: N must be >= 2");
  std::vector<double> logs(n);
  double acc = 0.0;
  logs[0] = 0.0;
  for (int j = 1; j < n; ++j) {
    // |1 - q^j| = 2 sin(πj/N)
    acc += 2.0 * std::log(2.0 * std::sin(std::numbers::pi * j / n));
    logs[j] = acc;
  }
  const double top = *std::max_element(logs.begin(), logs.end());
  double s = 0.0;
  for (double l : logs) s += std::exp(l - top);
  return top + std::log(s);
}

/// Σ_{j=0}^{N-1} (q)_j, the trefoil's reduction; agrees with the state sum up to a power of q.
inline cplx kashaev_31(int n) {
  const QContext ctx(n);
  cplx sum = 0.0;
  for (int j = 0; j < n; ++j) sum += ctx.pochhammer(PochBase::q, j);
  return sum;
}

inline double kashaev_31_log_modulus(int n) { return std::log(std::abs(kashaev_31(n))); }

/// 2π log(modulus) / N.
inline double volume_point(int n, double modulus) {
  if (n < 1) throw std::invalid_argument("volume_point: N must be positive");
  if (!(modulus > 0.0)) throw DomainError("volume_point: modulus must be positive");
  return 2.0 * std::numbers::pi * std::log(modulus) / n;
}

inline double volume_point_from_log(int n, double log_modulus) {
  if (n < 1) throw std::invalid_argument("volume_point: N must be positive");
  return 2.0 * std::numbers::pi * log_modulus / n;
}

struct GrowthSample {
  int N;
  double log_modulus;
};

struct GrowthFit {
  double vol_estimate = 0.0;  // 2π a
  double slope = 0.0;         // a
  double log_exponent = 0.0;  // b (0 when the log term is dropped)
  double constant = 0.0;      // c
  double residual_norm = 0.0;
  int n_min = 0;
  int n_max = 0;
  int samples = 0;
  bool with_log_term = true;
};

inline constexpr int kMinFitSamples = 10;

/// Least squares on log|⟨K⟩_N| ≈ a N + b log N + c (or a N + c).
inline GrowthFit fit_growth(std::vector<GrowthSample> samples, bool with_log_term = true) {
  if (static_cast<int>(samples.size()) < kMinFitSamples) {
    throw std::invalid_argument("fit_growth: need at least " + std::to_string(kMinFitSamples) +
                                " samples, got " + std::to_string(samples.size()));
  }
  // Sorting makes the fit independent of input order.
  std::sort(samples.begin(), samples.end(),
            [](const GrowthSample& a, const GrowthSample& b) { return a.N < b.N; });
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].N == samples[i - 1].N) {
      throw std::invalid_argument("fit_growth: duplicate N = " + std::to_string(samples[i].N));
    }
  }
  for (const GrowthSample& s : samples) {
    if (s.N < 1 || !std::isfinite(s.log_modulus)) {
      throw std::invalid_argument("fit_growth: samples need N >= 1 and finite log modulus");
    }
  }

  const Eigen::Index rows = static_cast<Eigen::Index>(samples.size());
  const Eigen::Index cols = with_log_term ? 3 : 2;
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double n = samples[i].N;
    a(i, 0) = n;
    if (with_log_term) a(i, 1) = std::log(n);
    a(i, cols - 1) = 1.0;
    y(i) = samples[i].log_modulus;
  }
  // Column scaling keeps the QR rank decision meaningful.
  const Eigen::VectorXd scale = a.colwise().norm().transpose();
  const Eigen::MatrixXd as = a * scale.cwiseInverse().asDiagonal();
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(as);
  if (qr.rank() < cols) {
    throw DomainError("fit_growth: design matrix is rank deficient");
  }
  const Eigen::VectorXd coef = qr.solve(y).cwiseQuotient(scale);

  GrowthFit fit;
  fit.slope = coef(0);
  fit.log_exponent = with_log_term ? coef(1) : 0.0;
  fit.constant = coef(cols - 1);
  fit.vol_estimate = 2.0 * std::numbers::pi * fit.slope;
  fit.residual_norm = (a * coef - y).norm();
  fit.n_min = samples.front().N;
  fit.n_max = samples.back().N;
  fit.samples = static_cast<int>(rows);
  fit.with_log_term = with_log_term;
  return fit;
}

inline std::vector<GrowthSample> figure_eight_samples(int n_min, int n_max, int step) {
  if (n_min < 2 || n_max < n_min || step < 1) {
    throw std::invalid_argument("figure_eight_samples: need 2 <= n_min <= n_max and step >= 1");
  }
  std::vector<GrowthSample> out;
  for (int n = n_min; n <= n_max; n += step) out.push_back({n, kashaev_41_log_modulus(n)});
  return out;
}

/// 2π Re(V(z0)/(2πi)) at the growth saddle of the figure-eight potential.
inline double saddle_volume_prediction() {
  return 2.0 * std::numbers::pi * growth_rate(growth_root());
}

struct ConjectureReport {
  GrowthFit fit;
  double geometric_vol = 0.0;
  double gap = 0.0;
  std::optional<double> saddle_prediction;
  bool hyperbolic = true;
  std::string note;
};

/// Geometric volume 0 marks a non-hyperbolic knot, where the conjecture says nothing.
inline ConjectureReport conjecture_report(const GrowthFit& fit, double geometric_vol,
                                          std::optional<double> saddle_prediction = std::nullopt) {
  if (!std::isfinite(fit.vol_estimate) || !std::isfinite(geometric_vol)) {
    throw std::invalid_argument("conjecture_report: inputs must be finite");
  }
  ConjectureReport rep;
  rep.fit = fit;
  rep.geometric_vol = geometric_vol;
  rep.gap = std::abs(fit.vol_estimate - geometric_vol);
  rep.saddle_prediction = saddle_prediction;
  rep.hyperbolic = geometric_vol > 0.0;
  rep.note = rep.hyperbolic ? "hyperbolic" : "non-hyperbolic, conjecture not applicable";
  return rep;
}

}  // namespace kashaev
