#include <gtest/gtest.h>

#include "support.hpp"

using namespace caustics;
using namespace testing_support;
using numerics::kPi;
using numerics::kTwoPi;

namespace {
const FourierProfile kZero;
DeformedBoundary circle() { return DeformedBoundary(kZero, 0.0); }

double wrap_diff(double a, double b, double period) {
  double d = std::fmod(a - b, period);
  if (d > period / 2) d -= period;
  if (d < -period / 2) d += period;
  return d;
}
}  // namespace

TEST(BilliardDynamics, GeneratingFunctionExamples) {
  const auto c = circle();
  EXPECT_NEAR(generating_h(c, 0.0, kPi), -2.0, 1e-15);
  EXPECT_NEAR(generating_h(c, 0.0, 2 * kPi / 3), -std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(generating_h(c, 0.0, kPi / 2), -std::sqrt(2.0), 1e-15);
  EXPECT_THROW(generating_h(c, 1.0, 1.0 + kTwoPi), GeometryError);
}

TEST(BilliardDynamics, GeneratingFunctionPeriodic) {
  const DeformedBoundary b(cos5_minus_cos7(), 0.01);
  for (double t : {0.1, 1.0, 2.5}) {
    EXPECT_NEAR(generating_h(b, t + kTwoPi, t + 2.0 + kTwoPi), generating_h(b, t, t + 2.0), 1e-14);
  }
}

TEST(BilliardDynamics, CircleStepExamples) {
  const auto c = circle();
  auto r = billiard_step(c, {0.0, kPi / 3});
  EXPECT_NEAR(r.s, 2 * kPi / 3, 1e-10);
  EXPECT_NEAR(r.v, kPi / 3, 1e-10);
  r = billiard_step(c, {1.0, kPi / 2});
  EXPECT_NEAR(r.s, 1.0 + kPi, 1e-10);
  EXPECT_NEAR(r.v, kPi / 2, 1e-10);
}

TEST(BilliardDynamics, CircleClosedFormRandom) {
  const auto c = circle();
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> us(0.0, kTwoPi), uv(0.01, kPi - 0.01);
  for (int i = 0; i < 100; ++i) {
    const PhasePoint p{us(rng), uv(rng)};
    const auto r = billiard_step(c, p);
    EXPECT_NEAR(wrap_diff(r.s, p.s + 2 * p.v, kTwoPi), 0.0, 1e-10);
    EXPECT_NEAR(r.v, p.v, 1e-10);
  }
}

TEST(BilliardDynamics, Reversibility) {
  const DeformedBoundary b(cosines({{3, 0.5}, {5, -0.2}}), 0.03);
  const double total = b.total_length();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> us(0.0, total), uv(0.2, kPi - 0.2);
  for (int i = 0; i < 20; ++i) {
    const PhasePoint p{us(rng), uv(rng)};
    const auto f = billiard_step(b, p);
    const auto back = billiard_step(b, {f.s, kPi - f.v});
    EXPECT_NEAR(wrap_diff(back.s, p.s, total), 0.0, 1e-9);
    EXPECT_NEAR(kPi - back.v, p.v, 1e-9);
  }
}

TEST(BilliardDynamics, GeneratingFunctionIdentities) {
  const DeformedBoundary b(cos5_minus_cos7(), 0.005);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> us(0.0, b.total_length()), uv(0.3, kPi - 0.3);
  for (int i = 0; i < 20; ++i) {
    const PhasePoint p{us(rng), uv(rng)};
    const auto r = billiard_step(b, p);
    const double t0 = b.theta_from_arc(p.s);
    double t1 = b.theta_from_arc(r.s);
    while (t1 <= t0) t1 += kTwoPi;
    EXPECT_NEAR(h_partial_s1(b, t0, t1), std::cos(p.v), 1e-8);
    EXPECT_NEAR(h_partial_s2(b, t0, t1), -std::cos(r.v), 1e-8);
  }
}

TEST(BilliardDynamics, Twist) {
  const DeformedBoundary b(cosines({{2, 0.4}, {7, 0.1}}), 0.02);
  const double total = b.total_length();
  for (double s : {0.0, 1.5, 4.0}) {
    double prev = 0.0;
    for (int j = 1; j < 60; ++j) {
      const double v = kPi * j / 60;
      double ds = std::fmod(billiard_step(b, {s, v}).s - s + total, total);
      EXPECT_GT(ds, prev);
      prev = ds;
    }
  }
}

TEST(BilliardDynamics, GrazingContinuity) {
  const DeformedBoundary b(cos5_minus_cos7(), 0.01);
  const auto r = billiard_step(b, {1.0, 1e-4});
  EXPECT_LT(std::abs(wrap_diff(r.s, 1.0, b.total_length())), 1e-3);
}

TEST(BilliardDynamics, StepPreconditions) {
  EXPECT_THROW(billiard_step(circle(), {0.0, 0.0}), DomainError);
  EXPECT_THROW(billiard_step(circle(), {0.0, kPi}), DomainError);
  const DeformedBoundary bad(FourierProfile::cosine(7), 0.5);
  EXPECT_THROW(billiard_step(bad, {0.0, 1.0}), GeometryError);
}

TEST(BilliardDynamics, ElResidualExamples) {
  const auto c = circle();
  const OrbitConfiguration tri{{0.0, 2 * kPi / 3, 4 * kPi / 3, kTwoPi}, 3, 1};
  for (double r : el_residual(c, tri)) EXPECT_LE(std::abs(r), 1e-9);
  const OrbitConfiguration sq{{0.0, kPi / 2, kPi, 3 * kPi / 2, kTwoPi}, 4, 1};
  for (double r : el_residual(c, sq)) EXPECT_LE(std::abs(r), 1e-9);
  const OrbitConfiguration bent{{0.0, 2 * kPi / 3 + 0.1, 4 * kPi / 3, kTwoPi}, 3, 1};
  double worst = 0.0;
  for (double r : el_residual(c, bent)) worst = std::max(worst, std::abs(r));
  EXPECT_GT(worst, 1e-3);
}

TEST(BilliardDynamics, ConfigurationValidation) {
  EXPECT_THROW((OrbitConfiguration{{0.0, 1.0, 2.0}, 3, 1}).validate(), ValidationError);
  EXPECT_THROW((OrbitConfiguration{{0.0, 3.0, 1.0, kTwoPi}, 3, 1}).validate(), ValidationError);
  EXPECT_THROW((OrbitConfiguration{{0.0, 1.0, 5.0}, 2, 1}).validate(), ValidationError);
}
