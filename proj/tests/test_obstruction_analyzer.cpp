#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace caustics;
using namespace testing_support;

namespace {
const double kSqrt3 = std::sqrt(3.0);
using Pairs = std::vector<std::pair<int, int>>;

Pairs sorted(Pairs p) {
  std::sort(p.begin(), p.end());
  return p;
}
}  // namespace

TEST(Sieve, SmallExamples) {
  EXPECT_EQ(z23_sieve(10), (std::vector<int>{-7, -5, -1, 1, 5, 7}));
  EXPECT_EQ(z23_sieve(13), (std::vector<int>{-13, -11, -7, -5, -1, 1, 5, 7, 11, 13}));
}

TEST(Sieve, SixLPlusMinusOneTo1000) {
  const auto s = z23_sieve(1000);
  std::set<int> forms;
  for (int l = -200; l <= 200; ++l) {
    for (int k : {6 * l - 1, 6 * l + 1}) {
      if (std::abs(k) <= 1000) forms.insert(k);
    }
  }
  EXPECT_EQ(s, std::vector<int>(forms.begin(), forms.end()));
}

TEST(Generation, Examples) {
  EXPECT_EQ(generation(13, 2), 0);
  EXPECT_EQ(generation(1, 2), 2);
  EXPECT_EQ(generation(11, 2), 1);
  EXPECT_THROW(generation(6, 2), DomainError);
}

TEST(Pyramid, Examples) {
  EXPECT_EQ(sorted(pyramid_set(13, 1).pairs), sorted({{7, -1}, {5, 1}, {11, -5}, {13, -7}}));
  EXPECT_EQ(pyramid_set(13, 4).pairs, (Pairs{{13, 11}}));
  EXPECT_EQ(sorted(pyramid_set(13, 0).pairs),
            sorted({{1, -1}, {5, -5}, {7, -7}, {11, -11}, {13, -13}}));
  EXPECT_THROW(pyramid_set(13, 5), DomainError);
  EXPECT_THROW(pyramid_set(12, 1), DomainError);
}

TEST(Pyramid, Cardinality) {
  for (int L : {13, 25, 49}) {
    const int P = pyramid_height(L);
    for (int K = -2 * P; K <= 2 * P; ++K) {
      const auto s = pyramid_set(L, K);
      EXPECT_EQ(static_cast<int>(s.pairs.size()), 1 + 2 * P - std::abs(K));
      EXPECT_EQ(s.pairs.size(), pyramid_set(L, -K).pairs.size());
    }
  }
}

TEST(Pyramid, LowerFormCardinality) {
  // L = 6P - 1 has one pair fewer than the 6P + 1 formula.
  for (int L : {11, 23, 47}) {
    const int P = pyramid_height(L);
    for (int K = -2 * P; K <= 2 * P; ++K) {
      EXPECT_EQ(static_cast<int>(pyramid_set(L, K).pairs.size()), 2 * P - std::abs(K));
    }
  }
}

TEST(Pyramid, CoupleProjections) {
  for (int L = 5; L <= 49; ++L) {
    if (!in_z23(L)) continue;
    const int P = pyramid_height(L);
    // For L = 6P - 1 the top level N(2P) is empty, so the projection
    // statement only covers K < 2P there.
    const int top = L % 6 == 1 ? 2 * P : 2 * P - 1;
    for (int K = 2; K <= top; ++K) EXPECT_TRUE(couple_projection_holds(L, K)) << L << " " << K;
  }
  EXPECT_FALSE(couple_projection_holds(11, 4));
}

TEST(Pyramid, GenerationIdentities) {
  // The derived identities hold everywhere. The printed ones are off by one
  // for l > 0 and by 2P - 2K for l < 0, so they only hold when l < 0, K = P.
  int printed_ok = 0, total = 0;
  for (int L : {13, 25, 37, 49}) {
    const int P = pyramid_height(L);
    for (int K = 1; K <= 2 * P; ++K) {
      for (const auto& g : generation_identities(pyramid_set(L, K))) {
        EXPECT_TRUE(g.derived_holds) << "L=" << L << " K=" << K << " (" << g.k << "," << g.l << ")";
        EXPECT_EQ(g.printed_holds, g.l < 0 && K == P);
        printed_ok += g.printed_holds;
        ++total;
      }
    }
  }
  EXPECT_GT(total, 0);
  EXPECT_LT(printed_ok, total);
}

TEST(Projection, Examples) {
  for (const auto& n : {cos5_minus_cos7(), FourierProfile::cosine(1), cosines({{5, 1.0}, {11, 1.0}})}) {
    const auto r = projection_check(n, n.max_index());
    EXPECT_LE(r.spade, 1e-10);
    EXPECT_LE(r.club, 1e-10);
    EXPECT_LE(r.heart, 1e-10);
    EXPECT_TRUE(r.hold);
  }
  EXPECT_THROW(projection_check(FourierProfile::cosine(6), 6), PreconditionError);
}

TEST(Projection, RandomProfiles) {
  std::mt19937_64 rng(123);
  for (int i = 0; i < 20; ++i) {
    const auto n = random_t23(rng, 37);
    EXPECT_TRUE(projection_check(n, n.max_index()).hold);
  }
}

TEST(Diamond, Examples) {
  const auto z = diamond_residuals(FourierProfile{}, 7);
  for (const auto& [l, e] : z.entries) EXPECT_EQ(e.residual, 0.0);

  const auto d = diamond_residuals(cos5_minus_cos7(), 7);
  const auto& e12 = d.entries.at(2);
  EXPECT_EQ(e12.harmonic, 12);
  EXPECT_NEAR(4 * e12.d2.real(), 140.0, 1e-11);
  EXPECT_NEAR(e12.d3.real(), 141 * kSqrt3 / 4, 1e-11);
  EXPECT_NEAR(e12.residual, std::abs(140.0 - 3 * kSqrt3 * 141 * kSqrt3 / 4), 1e-10);
  EXPECT_GT(e12.residual, 1.0);
  EXPECT_TRUE(d.entries.count(0));
  EXPECT_THROW(diamond_residuals(FourierProfile::sine(5), 5), PreconditionError);
}

TEST(DeltaChain, Examples) {
  const auto z = delta_chain(FourierProfile{}, 13);
  for (const auto& lv : z.levels) {
    EXPECT_EQ(lv.delta, 0.0);
    EXPECT_TRUE(lv.holds);
  }
  const auto c = delta_chain(cos5_minus_cos7(), 13);
  ASSERT_EQ(c.levels.size(), 4u);
  EXPECT_NEAR(c.levels[1].delta, std::abs(diamond_pair_weight(7, 5)) * 0.25, 1e-12);
  EXPECT_EQ(c.levels[1].argmax, std::make_pair(7, 5));
  EXPECT_TRUE(c.heuristic);
  EXPECT_TRUE(c.levels.back().base);
  for (const auto& lv : delta_chain(FourierProfile::cosine(7), 13).levels) EXPECT_EQ(lv.delta, 0.0);
}

TEST(Verdict, Examples) {
  const auto z = coexistence_verdict(FourierProfile{}, 7);
  EXPECT_EQ(z.verdict, Verdict::kInapplicable);

  const auto n = cos5_minus_cos7();
  const auto r = coexistence_verdict(n, 7);
  EXPECT_EQ(r.verdict, Verdict::kObstructed);
  EXPECT_EQ(r.worst_harmonic, 12);
  const double norm = 1.0 / 1.93372276214047;
  EXPECT_NEAR(r.normalization, norm, 1e-12);
  EXPECT_NEAR(std::abs(4 * r.diamond->entries.at(2).d2.real()), 140 * norm * norm, 1e-9);

  EXPECT_EQ(coexistence_verdict(FourierProfile::cosine(6), 6).verdict, Verdict::kInapplicable);
  EXPECT_EQ(coexistence_verdict(FourierProfile::sine(5), 5).verdict, Verdict::kInapplicable);
}

TEST(Verdict, TranslatedCircleNotObstructed) {
  // cos(theta) is a translation of the circle: only harmonic 0 is
  // unbalanced, and that balance is absorbed by the mean of m.
  const auto r = coexistence_verdict(FourierProfile::cosine(1), 1);
  EXPECT_EQ(r.verdict, Verdict::kConsistentAtCutoff);
  EXPECT_FALSE(r.constraints->rigid_ok);
  EXPECT_GT(r.diamond->entries.at(0).residual, 1e-6);
}

TEST(Verdict, CatalogAllObstructed) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 20; ++i) {
    const auto n = random_t23(rng, 31, 2);
    const auto r = coexistence_verdict(n, n.max_index());
    EXPECT_EQ(r.verdict, Verdict::kObstructed) << i;
    EXPECT_GT(r.max_diamond_residual, 1e-6);
  }
}

TEST(Verdict, ModularRemainderReported) {
  FourierProfile::CoeffMap c;
  for (int k = 1; k <= 25; ++k) {
    if (in_z23(k)) c[k] = c[-k] = std::exp(-double(k));
  }
  const auto n = FourierProfile::from_exponential(c, true, 25, true);
  VerdictOptions opt;
  opt.modular = slowest_decay(n);
  const auto r = coexistence_verdict(n, 25, opt);
  ASSERT_TRUE(r.remainder_bound.has_value());
  EXPECT_GT(*r.remainder_bound, 0.0);
}
