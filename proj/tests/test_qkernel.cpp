#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "kashaev/qkernel.hpp"

using kashaev::cplx;
using kashaev::PochBase;
using kashaev::QContext;

namespace {

// Direct product, no tables.
cplx direct_poch(int n, int len, int sign) {
  cplx p = 1.0;
  for (int k = 1; k <= len; ++k) p *= 1.0 - std::polar(1.0, sign * 2.0 * std::numbers::pi * k / n);
  return p;
}

// Circle definition: l != m and walking counterclockwise from k one meets
// l, m, n in that order within a single turn.
int theta_by_circle(int n, int k, int l, int m, int nn) {
  if (l == m) return 0;
  auto r = [n](int x) { return ((x % n) + n) % n; };
  return r(l - k) + r(m - l) + r(nn - m) + r(k - nn) == n ? 1 : 0;
}

}  // namespace

TEST(QContext, RejectsSmallN) {
  EXPECT_THROW(QContext(1), std::invalid_argument);
  EXPECT_THROW(QContext(0), std::invalid_argument);
}

TEST(QContext, HalfRootSquaresToQ) {
  for (int n = 2; n <= 60; ++n) {
    const QContext ctx(n);
    EXPECT_LT(std::abs(ctx.q_half() * ctx.q_half() - ctx.q()), 1e-14) << n;
    EXPECT_LT(std::abs(ctx.q() - std::polar(1.0, 2.0 * std::numbers::pi / n)), 1e-15);
  }
}

TEST(QContext, Residue) {
  const QContext ctx(5);
  EXPECT_EQ(ctx.residue(-1), 4);
  EXPECT_EQ(ctx.residue(0), 0);
  EXPECT_EQ(ctx.residue(5 + 3), 3);
  EXPECT_EQ(ctx.residue(-12), 3);
}

TEST(QContext, CyclicIntervalExamples) {
  const QContext ctx(5);
  EXPECT_TRUE(ctx.in_cyclic_interval(2, 0, 3));
  EXPECT_FALSE(ctx.in_cyclic_interval(4, 0, 3));
  for (int b = 0; b < 5; ++b)
    for (int c = 0; c < 5; ++c) EXPECT_TRUE(ctx.in_cyclic_interval(b, b, c));
}

TEST(QContext, CyclicIntervalMatchesCounterclockwiseWalk) {
  for (int n = 2; n <= 12; ++n) {
    const QContext ctx(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          // Walk from b counterclockwise until c; a is inside iff visited.
          bool seen = false;
          for (int x = b;; x = (x + 1) % n) {
            if (x == a) seen = true;
            if (x == c) break;
          }
          EXPECT_EQ(ctx.in_cyclic_interval(a, b, c), seen) << n << " " << a << b << c;
        }
  }
}

TEST(Theta, Examples) {
  const QContext c2(2);
  EXPECT_EQ(c2.theta(0, 0, 1, 1), 1);
  const QContext c4(4);
  EXPECT_EQ(c4.theta(3, 0, 1, 2), 1);
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      for (int n = 0; n < 4; ++n) EXPECT_EQ(c4.theta(k, l, l, n), 0);
}

TEST(Theta, FourCaseFormMatchesCircleDefinition) {
  for (int n = 2; n <= 7; ++n) {
    const QContext ctx(n);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m)
          for (int nn = 0; nn < n; ++nn)
            ASSERT_EQ(ctx.theta(k, l, m, nn), theta_by_circle(n, k, l, m, nn))
                << "N=" << n << " " << k << l << m << nn;
  }
}

TEST(Theta, CrossingSupportIsAngleSumCondition) {
  for (int n = 2; n <= 7; ++n) {
    const QContext ctx(n);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m)
          for (int nn = 0; nn < n; ++nn) {
            const int sum = ctx.residue(nn - m) + ctx.residue(k - nn) + ctx.residue(l - k) +
                            ctx.residue(m - l - 1);
            ASSERT_EQ(ctx.crossing_support(k, l, m, nn), sum == n - 1);
          }
  }
}

TEST(Pochhammer, TableEndpointsAndRecurrence) {
  for (int n = 2; n <= 40; ++n) {
    const QContext ctx(n);
    EXPECT_EQ(ctx.pochhammer(PochBase::q, 0), cplx(1.0));
    EXPECT_EQ(ctx.pochhammer(PochBase::q, n), cplx(0.0));
    for (int k = 1; k < n; ++k) {
      const cplx expected = ctx.pochhammer(PochBase::q, k - 1) * (1.0 - ctx.q_pow(k));
      EXPECT_LT(std::abs(ctx.pochhammer(PochBase::q, k) - expected), 1e-12 * std::abs(expected));
      EXPECT_LT(std::abs(ctx.pochhammer(PochBase::q, k) - direct_poch(n, k, 1)),
                1e-11 * std::abs(expected));
    }
  }
}

TEST(Pochhammer, Examples) {
  const QContext c4(4);
  EXPECT_LT(std::abs(c4.pochhammer(PochBase::q, 1) - cplx(1.0, -1.0)), 1e-15);
  for (int n = 2; n <= 20; ++n) {
    const QContext ctx(n);
    const cplx v = ctx.pochhammer(PochBase::q, n - 1) * ctx.pochhammer(PochBase::q_inverse, 0);
    EXPECT_LT(std::abs(v - cplx(n)), 1e-10 * n);
  }
  EXPECT_THROW(c4.pochhammer(PochBase::q, 5), std::out_of_range);
  EXPECT_THROW(c4.pochhammer(PochBase::q, -1), std::out_of_range);
}

TEST(Pochhammer, InverseBaseIsConjugate) {
  for (int n = 2; n <= 50; ++n) {
    const QContext ctx(n);
    for (int k = 0; k <= n; ++k) {
      EXPECT_LE(std::abs(ctx.pochhammer(PochBase::q_inverse, k) -
                         std::conj(ctx.pochhammer(PochBase::q, k))),
                1e-14);
    }
  }
}

TEST(Pochhammer, ComplementaryProductIsN) {
  for (int n = 2; n <= 50; ++n) {
    const QContext ctx(n);
    for (int k = 0; k <= n - 1; ++k) {
      const cplx v = ctx.pochhammer(PochBase::q, k) * ctx.pochhammer(PochBase::q_inverse, n - 1 - k);
      EXPECT_LT(std::abs(v.real() - n), 1e-10 * n) << n << " " << k;
      EXPECT_LT(std::abs(v.imag()), 1e-10 * n) << n << " " << k;
    }
  }
}

TEST(ReductionLemma, SingleTermCase) {
  const QContext ctx(7);
  for (int l = 0; l < 7; ++l) {
    EXPECT_LT(std::abs(kashaev::reduction_lemma_lhs(ctx, l, l) - ctx.q_pow(-l)), 1e-13);
    EXPECT_LT(std::abs(kashaev::reduction_lemma_rhs(ctx, l, l) - ctx.q_pow(-l)), 1e-13);
  }
}

TEST(ReductionLemma, ThreeZeroOneByHand) {
  // k ∈ {0, 1}: q^0/((q)_1 (q^-1)_0) + q^-2/((q)_0 (q^-1)_1); rhs -q^{(2)(-1)/2} = -q^-1.
  const double t = 2.0 * std::numbers::pi / 3.0;
  const cplx q = std::polar(1.0, t);
  const cplx lhs = 1.0 / (1.0 - q) + std::pow(q, -2) / (1.0 - 1.0 / q);
  const cplx rhs = -1.0 / q;
  const QContext ctx(3);
  EXPECT_LT(std::abs(kashaev::reduction_lemma_lhs(ctx, 0, 1) - lhs), 1e-13);
  EXPECT_LT(std::abs(kashaev::reduction_lemma_rhs(ctx, 0, 1) - rhs), 1e-13);
}

TEST(ReductionLemma, ExhaustiveUpToTwelve) {
  for (int n = 2; n <= 12; ++n) {
    const QContext ctx(n);
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m) {
        EXPECT_LT(std::abs(kashaev::reduction_lemma_lhs(ctx, l, m) - kashaev::reduction_lemma_rhs(ctx, l, m)),
                  1e-9)
            << n << " " << l << " " << m;
      }
  }
}

TEST(ReductionLemma, RandomPairsAtFive) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> pick(0, 4);
  const QContext ctx(5);
  for (int t = 0; t < 50; ++t) {
    const int l = pick(rng), m = pick(rng);
    EXPECT_LT(std::abs(kashaev::reduction_lemma_lhs(ctx, l, m) - kashaev::reduction_lemma_rhs(ctx, l, m)),
              1e-10);
  }
}

TEST(ShiftedSumIdentity, Examples) {
  const QContext c4(4);
  EXPECT_LT(kashaev::shifted_sum_identity_check(c4, 1, 1), 1e-10);
  for (int n = 2; n <= 12; ++n) {
    EXPECT_LT(kashaev::shifted_sum_identity_check(QContext(n), n - 1, n - 1), 1e-10);
  }
}

TEST(ShiftedSumIdentity, SpecializationMatchesDisplayedForm) {
  // β = -α gives (-1)^{N-1-α} q^{-N(N-1)/2 + α(α+1)/2}.
  for (int n = 2; n <= 12; ++n) {
    const QContext ctx(n);
    for (int alpha = 0; alpha < n; ++alpha) {
      EXPECT_LT(kashaev::shifted_sum_identity_check(ctx, alpha, -alpha), 1e-9) << n << " " << alpha;
      cplx lhs = 0.0;
      for (int i = 0; i <= n - 1 - alpha; ++i) {
        lhs += ctx.q_pow(-static_cast<std::int64_t>(alpha) * i) /
               (ctx.pochhammer(PochBase::q, i) * ctx.pochhammer(PochBase::q_inverse, n - 1 - alpha - i));
      }
      const double sign = (n - 1 - alpha) % 2 == 0 ? 1.0 : -1.0;
      const cplx displayed =
          sign * ctx.q_half_pow(-static_cast<std::int64_t>(n) * (n - 1) + alpha * (alpha + 1));
      EXPECT_LT(std::abs(lhs - displayed), 1e-9) << n << " " << alpha;
    }
  }
}

TEST(ShiftedSumIdentity, AllEvenDifferences) {
  for (int n = 2; n <= 12; ++n) {
    const QContext ctx(n);
    for (int alpha = 0; alpha < n; ++alpha)
      for (int beta = alpha - 2 * n; beta <= alpha + 2 * n; beta += 2)
        EXPECT_LT(kashaev::shifted_sum_identity_check(ctx, alpha, beta), 1e-9) << n << " " << alpha << " " << beta;
  }
}

TEST(ShiftedSumIdentity, RejectsBadArguments) {
  const QContext ctx(5);
  EXPECT_THROW(kashaev::shifted_sum_identity_check(ctx, 1, 2), std::invalid_argument);
  EXPECT_THROW(kashaev::shifted_sum_identity_check(ctx, 5, 5), std::out_of_range);
}
