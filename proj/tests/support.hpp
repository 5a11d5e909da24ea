#pragma once

#include <cmath>
#include <initializer_list>
#include <random>
#include <utility>
#include <vector>

#include "caustics/caustics.hpp"

namespace testing_support {

using caustics::FourierProfile;
using caustics::TrigTerm;

inline FourierProfile cosines(std::initializer_list<std::pair<int, double>> terms) {
  std::vector<TrigTerm> t;
  for (auto [k, a] : terms) t.push_back({k, a, 0.0});
  return FourierProfile::from_trig(t, true);
}

inline FourierProfile cos5_minus_cos7() { return cosines({{5, 1.0}, {7, -1.0}}); }

// Random real profile on harmonics 1..kmax with amplitudes ~ amp / k^2.
inline FourierProfile random_profile(std::mt19937_64& rng, int kmax, double amp,
                                     bool even = false) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<TrigTerm> t;
  for (int k = 1; k <= kmax; ++k) {
    const double s = amp / (k * k);
    t.push_back({k, s * u(rng), even ? 0.0 : s * u(rng)});
  }
  return FourierProfile::from_trig(t, even);
}

// Random even profile supported on indices coprime to 6.
inline FourierProfile random_t23(std::mt19937_64& rng, int kmax, int min_terms = 2) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  std::bernoulli_distribution sign(0.5);
  std::vector<int> pool;
  for (int k = 1; k <= kmax; ++k) {
    if (k % 2 && k % 3) pool.push_back(k);
  }
  std::vector<TrigTerm> t;
  while (static_cast<int>(t.size()) < min_terms) {
    t.clear();
    for (int k : pool) {
      if (std::bernoulli_distribution(0.6)(rng)) {
        t.push_back({k, (sign(rng) ? 1.0 : -1.0) * u(rng), 0.0});
      }
    }
  }
  return FourierProfile::from_trig(t, true);
}

inline double grid_theta(int j, int n) { return caustics::numerics::kTwoPi * j / n; }

}  // namespace testing_support
