#include <gtest/gtest.h>

#include "support.hpp"

using namespace caustics;
using namespace testing_support;
using numerics::kPi;

TEST(FourierProfile, EvaluateExamples) {
  const auto n = cos5_minus_cos7();
  EXPECT_NEAR(evaluate(n, 0.0), 0.0, 1e-15);
  EXPECT_NEAR(evaluate(n, kPi), 0.0, 1e-14);
  EXPECT_NEAR(evaluate(FourierProfile::cosine(1), kPi / 3), 0.5, 1e-15);
}

TEST(FourierProfile, CanonicalExponentialForm) {
  const auto n = cos5_minus_cos7();
  EXPECT_EQ(n.coeff(5), FourierProfile::Coeff(0.5, 0.0));
  EXPECT_EQ(n.coeff(-7), FourierProfile::Coeff(-0.5, 0.0));
  const std::vector<TrigTerm> t{{3, 0.4, 0.6}};
  const auto s = FourierProfile::from_trig(t);
  EXPECT_EQ(s.coeff(3), FourierProfile::Coeff(0.2, -0.3));
  EXPECT_EQ(s.coeff(-3), FourierProfile::Coeff(0.2, 0.3));
}

TEST(FourierProfile, RealnessViolationRejected) {
  FourierProfile::CoeffMap c{{2, {1.0, 0.0}}, {-2, {0.5, 0.0}}};
  EXPECT_THROW(FourierProfile::from_exponential(c), ValidationError);
  FourierProfile::CoeffMap d{{2, {1.0, 0.5}}, {-2, {1.0, -0.5}}};
  EXPECT_THROW(FourierProfile::from_exponential(d, true), ValidationError);
  EXPECT_NO_THROW(FourierProfile::from_exponential(d, false));
}

TEST(FourierProfile, CutoffBelowSupportRejected) {
  FourierProfile::CoeffMap c{{4, {1.0, 0.0}}, {-4, {1.0, 0.0}}};
  EXPECT_THROW(FourierProfile::from_exponential(c, true, 3), ValidationError);
  EXPECT_EQ(FourierProfile::from_exponential(c, true, 9).cutoff(), 9);
}

TEST(FourierProfile, DerivativeExamples) {
  const auto d = derivative(FourierProfile::cosine(1), 1);
  EXPECT_NEAR(std::abs(d.coeff(1) - FourierProfile::Coeff(0.0, 0.5)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(d.coeff(-1) - FourierProfile::Coeff(0.0, -0.5)), 0.0, 1e-15);
  EXPECT_NEAR(evaluate(d, 0.7), -std::sin(0.7), 1e-14);
  EXPECT_NEAR(evaluate(derivative(FourierProfile::cosine(5), 1), kPi / 10), -5.0, 1e-13);
}

TEST(FourierProfile, DerivativeComposes) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto n = random_profile(rng, 9, 1.0);
    const auto a = derivative(derivative(n, 1), 1);
    const auto b = derivative(n, 2);
    for (const auto& [k, c] : b.coeffs()) EXPECT_NEAR(std::abs(a.coeff(k) - c), 0.0, 1e-13);
  }
}

TEST(FourierProfile, QAverageExamples) {
  EXPECT_TRUE(q_average(cos5_minus_cos7(), 2).is_zero());
  const auto c6 = FourierProfile::cosine(6);
  EXPECT_EQ(q_average(c6, 3).coeffs(), c6.coeffs());
  const auto n = cosines({{1, 1.0}, {4, 1.0}});
  const auto avg = q_average(n, 2);
  EXPECT_EQ(avg.coeffs(), FourierProfile::cosine(4).coeffs());
}

TEST(FourierProfile, QAverageMatchesShiftAverage) {
  std::mt19937_64 rng(11);
  for (int q = 2; q <= 6; ++q) {
    const auto n = random_profile(rng, 14, 1.0);
    const auto avg = q_average(n, q);
    for (int j = 0; j < 256; ++j) {
      const double t = grid_theta(j, 256);
      double shift = 0.0;
      for (int i = 0; i < q; ++i) shift += evaluate(n, t + 2.0 * kPi * i / q);
      EXPECT_NEAR(evaluate(avg, t), shift / q, 1e-12);
    }
  }
}

TEST(FourierProfile, DerivativeCommutesWithAverage) {
  std::mt19937_64 rng(12);
  const auto n = random_profile(rng, 12, 1.0);
  for (int q = 2; q <= 4; ++q) {
    const auto a = derivative(q_average(n, q), 1);
    const auto b = q_average(derivative(n, 1), q);
    ASSERT_EQ(a.coeffs().size(), b.coeffs().size());
    for (const auto& [k, c] : a.coeffs()) EXPECT_EQ(c, b.coeff(k));
  }
}

TEST(FourierProfile, ConstraintExamples) {
  const auto r = check_constraints(cos5_minus_cos7());
  EXPECT_TRUE(r.flux_ok);
  EXPECT_TRUE(r.rigid_ok);
  EXPECT_FALSE(r.rescale_ok);
  EXPECT_NEAR(r.sup_norm, 1.93372276214047, 1e-10);

  EXPECT_FALSE(check_constraints(FourierProfile::cosine(1)).rigid_ok);

  const auto z = check_constraints(FourierProfile{});
  EXPECT_TRUE(z.flux_ok);
  EXPECT_TRUE(z.rigid_ok);
  EXPECT_FALSE(z.rescale_ok);
  EXPECT_EQ(z.sup_norm, 0.0);
}

TEST(FourierProfile, SupNormalizedHasUnitNorm) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 5; ++i) {
    const auto n = sup_normalized(random_t23(rng, 25));
    EXPECT_NEAR(sup_norm(n).value, 1.0, 1e-10);
  }
  EXPECT_THROW(sup_normalized(FourierProfile{}), DomainError);
}

TEST(FourierProfile, TqMembership) {
  EXPECT_TRUE(tq_member(cos5_minus_cos7(), 2));
  EXPECT_TRUE(tq_member(cos5_minus_cos7(), 3));
  EXPECT_FALSE(tq_member(FourierProfile::cosine(6), 3));
  EXPECT_TRUE(tq_member(FourierProfile::cosine(4), 3));
}

TEST(FourierProfile, TqIntersectionMatchesSieve) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = random_profile(rng, 13, 1.0);
    // Knock out a random subset of harmonics so membership varies.
    FourierProfile::CoeffMap c;
    std::bernoulli_distribution keep(0.3);
    for (const auto& [k, v] : n.coeffs()) {
      if (k > 0 && ((k % 2 && k % 3) || keep(rng))) {
        c[k] = v;
        c[-k] = std::conj(v);
      }
    }
    const auto p = FourierProfile::from_exponential(c);
    const auto sieve = z23_sieve(13);
    bool all_in = true;
    for (const auto& [k, v] : p.coeffs()) {
      all_in = all_in && std::find(sieve.begin(), sieve.end(), k) != sieve.end();
    }
    EXPECT_EQ(tq_member(p, 2) && tq_member(p, 3), all_in);
  }
}

TEST(FourierProfile, SlowestDecayExponential) {
  FourierProfile::CoeffMap c;
  for (int k = 1; k <= 8; ++k) c[k] = c[-k] = std::exp(-double(k));
  const auto est = slowest_decay(FourierProfile::from_exponential(c, true, {}, true));
  ASSERT_EQ(est.indices.size(), 8u);
  for (int i = 0; i < 8; ++i) {
    EXPECT_EQ(est.indices[i], i + 1);
    EXPECT_NEAR(est.w[i], i + 1.0, 1e-12);
  }
  EXPECT_EQ(decay_condition(est).verdict, DecayVerdict::kFails);
}

TEST(FourierProfile, SlowestDecayTieGoesToLargerIndex) {
  const auto est = slowest_decay(cos5_minus_cos7());
  ASSERT_EQ(est.indices.size(), 1u);
  EXPECT_EQ(est.indices[0], 7);
  EXPECT_DOUBLE_EQ(est.magnitudes[0], 0.5);
  EXPECT_EQ(decay_condition(est).verdict, DecayVerdict::kPolynomial);
  EXPECT_TRUE(decay_condition(est).heuristic);

  const auto one = slowest_decay(FourierProfile::cosine(1));
  EXPECT_EQ(one.indices, std::vector<int>{1});
  EXPECT_DOUBLE_EQ(one.magnitudes[0], 0.5);
}

TEST(FourierProfile, SlowestDecayMagnitudesNonIncreasing) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto est = slowest_decay(random_profile(rng, 20, 1.0));
    for (std::size_t i = 1; i < est.indices.size(); ++i) {
      EXPECT_GT(est.indices[i], est.indices[i - 1]);
      EXPECT_LE(est.magnitudes[i], est.magnitudes[i - 1]);
    }
  }
}

TEST(FourierProfile, SuperExponentialSynthetic) {
  // exp(-k 2^k) underflows beyond k = 6.
  FourierProfile::CoeffMap c;
  for (int k = 1; k <= 6; ++k) c[k] = c[-k] = std::exp(-k * std::ldexp(1.0, k));
  const auto est = slowest_decay(FourierProfile::from_exponential(c, true, {}, true));
  EXPECT_EQ(decay_condition(est).verdict, DecayVerdict::kSuperExponential);
}

TEST(FourierProfile, SlowestDecayZeroThrows) {
  EXPECT_THROW(slowest_decay(FourierProfile{}), DomainError);
}

TEST(FourierProfile, AnalyticBoundHoldsExactly) {
  const double C = 0.7, rho = 0.4;
  FourierProfile::CoeffMap c;
  for (int k = -20; k <= 20; ++k) c[k] = C * std::exp(-std::abs(k) * rho);
  const auto p = FourierProfile::from_exponential(c, true);
  for (const auto& [k, v] : p.coeffs()) EXPECT_LE(std::abs(v), C * std::exp(-std::abs(k) * rho));
}

TEST(FourierProfile, TrigSeriesMatchesEvaluate) {
  std::mt19937_64 rng(2);
  const auto n = random_profile(rng, 15, 1.0);
  const TrigSeries f(n);
  const auto d1 = derivative(n, 1), d2 = derivative(n, 2);
  for (int j = 0; j < 64; ++j) {
    const double t = grid_theta(j, 64);
    const auto jet = f.jet(t);
    EXPECT_NEAR(jet.f, evaluate(n, t), 1e-13);
    EXPECT_NEAR(jet.df, evaluate(d1, t), 1e-12);
    EXPECT_NEAR(jet.d2f, evaluate(d2, t), 1e-11);
  }
}
