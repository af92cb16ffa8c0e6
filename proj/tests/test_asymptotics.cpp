#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "kashaev/asymptotics.hpp"
#include "kashaev/gluing.hpp"

using kashaev::cplx;
using kashaev::GrowthSample;

namespace {

constexpr double kVol41 = 2.029883212819307;
constexpr double kPi = std::numbers::pi;

// Σ_j |(q)_j|^2 by direct products.
double direct_41(int n) {
  double total = 0.0, p = 1.0;
  for (int j = 0; j < n; ++j) {
    total += p;
    const double s = 2.0 * std::sin(kPi * (j + 1) / n);
    p *= s * s;
  }
  return total;
}

std::vector<GrowthSample> synthetic(double a, double b, double c, int n_min, int n_max, int step) {
  std::vector<GrowthSample> out;
  for (int n = n_min; n <= n_max; n += step) out.push_back({n, a * n + b * std::log(n) + c});
  return out;
}

}  // namespace

TEST(ClosedForm, FigureEightSpotValues) {
  EXPECT_NEAR(kashaev::kashaev_41(2).real(), 5.0, 1e-12);
  EXPECT_NEAR(kashaev::kashaev_41(3).real(), 13.0, 1e-12);
  EXPECT_NEAR(kashaev::kashaev_41(4).real(), 27.0, 1e-12);
}

TEST(ClosedForm, FigureEightIsRealAndPositive) {
  for (int n : {2, 7, 50, 333, 1000, 2000}) {
    const cplx v = kashaev::kashaev_41(n);
    EXPECT_GT(v.real(), 0.0);
    EXPECT_LT(std::abs(v.imag()), 1e-9 * v.real()) << n;
  }
}

TEST(ClosedForm, LogModulusMatchesDirectEvaluation) {
  for (int n = 2; n <= 300; n += 7) {
    EXPECT_NEAR(kashaev::kashaev_41_log_modulus(n), std::log(direct_41(n)), 1e-10) << n;
    EXPECT_NEAR(kashaev::kashaev_41_log_modulus(n), std::log(std::abs(kashaev::kashaev_41(n))), 1e-9);
  }
  // Stays finite where the plain sum would overflow.
  EXPECT_TRUE(std::isfinite(kashaev::kashaev_41_log_modulus(5000)));
}

TEST(FitGrowth, RecoversSyntheticCoefficients) {
  const auto fit = kashaev::fit_growth(synthetic(0.3230659, 1.5, -0.7, 100, 1000, 20));
  EXPECT_NEAR(fit.slope, 0.3230659, 1e-12);
  EXPECT_NEAR(fit.log_exponent, 1.5, 1e-9);
  EXPECT_NEAR(fit.constant, -0.7, 1e-8);
  EXPECT_LT(fit.residual_norm, 1e-9);
  EXPECT_EQ(fit.n_min, 100);
  EXPECT_EQ(fit.n_max, 1000);
}

TEST(FitGrowth, FigureEightNearGeometricVolume) {
  const auto samples = kashaev::figure_eight_samples(100, 1000, 20);
  const auto fit = kashaev::fit_growth(samples);
  EXPECT_LT(std::abs(fit.vol_estimate - kVol41), 5e-3);
  const auto plain = kashaev::fit_growth(samples, false);
  EXPECT_GT(plain.residual_norm, fit.residual_norm);
  EXPECT_EQ(plain.log_exponent, 0.0);
}

TEST(FitGrowth, IndependentOfSampleOrder) {
  auto samples = kashaev::figure_eight_samples(100, 600, 25);
  const auto a = kashaev::fit_growth(samples);
  std::mt19937 rng(2);
  std::shuffle(samples.begin(), samples.end(), rng);
  const auto b = kashaev::fit_growth(samples);
  EXPECT_EQ(a.slope, b.slope);
  EXPECT_EQ(a.log_exponent, b.log_exponent);
}

TEST(FitGrowth, RejectsBadInput) {
  EXPECT_THROW(kashaev::fit_growth(synthetic(0.3, 1.0, 0.0, 10, 18, 1)), std::invalid_argument);
  auto dup = synthetic(0.3, 1.0, 0.0, 10, 30, 1);
  dup.push_back(dup.front());
  EXPECT_THROW(kashaev::fit_growth(dup), std::invalid_argument);
  auto nan = synthetic(0.3, 1.0, 0.0, 10, 30, 1);
  nan[3].log_modulus = std::nan("");
  EXPECT_THROW(kashaev::fit_growth(nan), std::invalid_argument);
}

TEST(VolumePoint, Values) {
  EXPECT_NEAR(kashaev::volume_point(10, std::exp(1.0)), 2.0 * kPi / 10.0, 1e-15);
  EXPECT_EQ(kashaev::volume_point(5, 1.0), 0.0);
  EXPECT_THROW(kashaev::volume_point(5, 0.0), kashaev::DomainError);
  EXPECT_THROW(kashaev::volume_point(5, -1.0), kashaev::DomainError);
  EXPECT_THROW(kashaev::volume_point(0, 2.0), std::invalid_argument);
}

TEST(VolumePoint, FigureEightDecreasesTowardVolume) {
  double prev = 1e9;
  for (int n : {100, 200, 400, 800, 1600, 3200}) {
    const double v = kashaev::volume_point_from_log(n, kashaev::kashaev_41_log_modulus(n));
    EXPECT_LT(v, prev) << n;
    EXPECT_GT(v, kVol41) << n;
    prev = v;
  }
}

TEST(Trefoil, GrowthIsSubexponential) {
  const double v = kashaev::volume_point_from_log(200, kashaev::kashaev_31_log_modulus(200));
  EXPECT_LT(std::abs(v), 0.5);
}

TEST(Conjecture, ReportMarksNonHyperbolic) {
  const auto fit = kashaev::fit_growth(kashaev::figure_eight_samples(100, 1000, 20));
  const auto rep = kashaev::conjecture_report(fit, kVol41, kashaev::saddle_volume_prediction());
  EXPECT_TRUE(rep.hyperbolic);
  EXPECT_LT(rep.gap, 5e-3);
  ASSERT_TRUE(rep.saddle_prediction.has_value());
  EXPECT_NEAR(*rep.saddle_prediction, kVol41, 1e-9);
  const auto flat = kashaev::conjecture_report(fit, 0.0);
  EXPECT_FALSE(flat.hyperbolic);
  EXPECT_THROW(kashaev::conjecture_report(fit, std::nan("")), std::invalid_argument);
}
