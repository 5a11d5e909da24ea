#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "caustics/error.hpp"
#include "caustics/fourier_profile.hpp"
#include "caustics/numerics.hpp"
#include "caustics/perturbation_engine.hpp"

namespace caustics {

inline std::vector<int> z23_sieve(int L) {
  if (L < 1) throw DomainError("z23_sieve: L must be >= 1");
  std::vector<int> sieve;
  for (int k = -L; k <= L; ++k) {
    if (in_z23(k)) sieve.push_back(k);
  }
  std::vector<int> forms;
  for (int l = -(L / 6) - 1; l <= L / 6 + 1; ++l) {
    for (int k : {6 * l - 1, 6 * l + 1}) {
      if (std::abs(k) <= L) forms.push_back(k);
    }
  }
  std::sort(forms.begin(), forms.end());
  forms.erase(std::unique(forms.begin(), forms.end()), forms.end());
  if (forms != sieve) throw ConsistencyError("z23_sieve: sieve and 6l+-1 forms differ");
  return sieve;
}

inline int generation(int k, int P) {
  if (!in_z23(k)) throw DomainError("generation: k must lie in Z_{2,3}");
  const int a = std::abs(k);
  const int ceil6 = (a + 5) / 6, floor6 = a / 6;
  return P + 1 - std::max(ceil6, floor6);
}

// Maximal P with L = 6P +- 1.
inline int pyramid_height(int L) {
  if (L < 1 || !in_z23(L)) throw DomainError("pyramid: L must be a positive element of Z_{2,3}");
  return (L + 1) / 6;
}

struct PyramidIndexSet {
  int L = 0;
  int P = 0;
  int K = 0;
  std::vector<std::pair<int, int>> pairs;
  int expected_cardinality = 0;
};

inline PyramidIndexSet pyramid_set(int L, int K) {
  PyramidIndexSet s;
  s.L = L;
  s.P = pyramid_height(L);
  s.K = K;
  if (std::abs(K) > 2 * s.P) throw DomainError("pyramid_set: |K| exceeds 2P");
  const auto z = z23_sieve(L);
  for (int k : z) {
    const int l = 6 * K - k;
    if (k > l && std::abs(l) <= L && in_z23(l)) s.pairs.emplace_back(k, l);
  }
  std::sort(s.pairs.begin(), s.pairs.end(), [](auto a, auto b) { return a.first < b.first; });
  // L = 6P + 1 gives 1 + 2P - |K|; the lower form L = 6P - 1 loses one pair.
  s.expected_cardinality = (L % 6 == 1 ? 1 : 0) + 2 * s.P - std::abs(K);
  if (static_cast<int>(s.pairs.size()) != s.expected_cardinality) {
    throw ConsistencyError("pyramid_set: cardinality " + std::to_string(s.pairs.size()) +
                           " differs from " + std::to_string(s.expected_cardinality));
  }
  return s;
}

struct GenerationCheck {
  int k = 0;
  int l = 0;
  int lhs = 0;
  int printed_rhs = 0;
  int derived_rhs = 0;
  bool printed_holds = false;
  bool derived_holds = false;
};

// Per-pair generation identities. "printed": G(k)+G(l) = 2P-K+2 for l > 0,
// G(k)-G(l) = K-2P for l < 0. "derived": 2P+1-K and -K respectively.
inline std::vector<GenerationCheck> generation_identities(const PyramidIndexSet& s) {
  std::vector<GenerationCheck> out;
  for (auto [k, l] : s.pairs) {
    if (k <= 0) continue;
    GenerationCheck g{k, l};
    if (l > 0) {
      g.lhs = generation(k, s.P) + generation(l, s.P);
      g.printed_rhs = 2 * s.P - s.K + 2;
      g.derived_rhs = 2 * s.P + 1 - s.K;
    } else {
      g.lhs = generation(k, s.P) - generation(l, s.P);
      g.printed_rhs = s.K - 2 * s.P;
      g.derived_rhs = -s.K;
    }
    g.printed_holds = g.lhs == g.printed_rhs;
    g.derived_holds = g.lhs == g.derived_rhs;
    out.push_back(g);
  }
  return out;
}

// Every first coordinate of N(K-1) appears among the coordinates of N(K).
inline bool couple_projection_holds(int L, int K) {
  if (K - 1 <= 0) return true;
  const auto lower = pyramid_set(L, K - 1), upper = pyramid_set(L, K);
  std::set<int> coords;
  for (auto [k, l] : upper.pairs) {
    coords.insert(k);
    coords.insert(l);
  }
  for (auto [k, l] : lower.pairs) {
    if (!coords.count(k)) return false;
  }
  return true;
}

struct ProjectionResiduals {
  double spade = 0.0;  // odd harmonics of D_2
  double club = 0.0;   // harmonics 1 mod 3 of D_3
  double heart = 0.0;  // harmonics 2 mod 3 of D_3
  bool hold = true;
};

inline void require_t23(const FourierProfile& n, const char* who) {
  if (!(tq_member(n, 2) && tq_member(n, 3))) {
    throw PreconditionError(std::string(who) + ": profile must lie in T_2 and T_3");
  }
}

inline ProjectionResiduals projection_from_series(const DqSeries& d2, const DqSeries& d3,
                                                  double tol) {
  ProjectionResiduals r;
  for (const auto& [h, c] : d2.coeffs) {
    if (h % 2 != 0) r.spade = std::max(r.spade, std::abs(c));
  }
  for (const auto& [h, c] : d3.coeffs) {
    const int res = ((h % 3) + 3) % 3;
    if (res == 1) r.club = std::max(r.club, std::abs(c));
    if (res == 2) r.heart = std::max(r.heart, std::abs(c));
  }
  r.hold = r.spade <= tol && r.club <= tol && r.heart <= tol;
  return r;
}

inline ProjectionResiduals projection_check(const FourierProfile& n, int cutoff,
                                            double tol = 1e-10) {
  require_t23(n, "projection_check");
  return projection_from_series(dq_fourier(n, 2, cutoff), dq_fourier(n, 3, cutoff), tol);
}

struct DiamondEntry {
  int harmonic = 0;
  cplx d2;
  cplx d3;
  double residual = 0.0;
};

struct DiamondResiduals {
  std::map<int, DiamondEntry> entries;  // keyed by l, harmonic 6l
  // Grid check of (3 sqrt3 / 4) D_2^(3) against D_3^(2); the constant gap is
  // reported separately because the mean is free.
  double averaged_form_residual = 0.0;
  double averaged_form_mean_gap = 0.0;
};

inline DiamondResiduals diamond_from_series(const DqSeries& d2, const DqSeries& d3,
                                            int cutoff) {
  const double r3 = std::sqrt(3.0);
  DiamondResiduals out;
  for (int l = -(2 * cutoff) / 6; l <= (2 * cutoff) / 6; ++l) {
    DiamondEntry e;
    e.harmonic = 6 * l;
    e.d2 = d2.coeff(6 * l);
    e.d3 = d3.coeff(6 * l);
    e.residual = std::abs(4.0 * e.d2 - 3.0 * r3 * e.d3);
    out.entries[l] = e;
  }
  out.averaged_form_mean_gap = std::abs(0.75 * r3 * d2.coeff(0) - d3.coeff(0));
  const int grid = std::max(64, 8 * cutoff);
  for (int j = 0; j < grid; ++j) {
    const double t = numerics::kTwoPi * j / grid;
    cplx a{}, b{};
    for (const auto& [h, c] : d2.coeffs) {
      if (h % 3 == 0 && h != 0) a += c * std::polar(1.0, h * t);
    }
    for (const auto& [h, c] : d3.coeffs) {
      if (h % 2 == 0 && h != 0) b += c * std::polar(1.0, h * t);
    }
    out.averaged_form_residual =
        std::max(out.averaged_form_residual, std::abs(0.75 * r3 * a.real() - b.real()));
  }
  return out;
}

inline DiamondResiduals diamond_residuals(const FourierProfile& n, int cutoff) {
  require_t23(n, "diamond_residuals");
  if (!n.has_even_symmetry()) throw PreconditionError("diamond_residuals: profile must be even");
  return diamond_from_series(dq_fourier(n, 2, cutoff), dq_fourier(n, 3, cutoff), cutoff);
}

struct DeltaLevel {
  int K = 0;
  double delta = 0.0;
  std::pair<int, int> argmax{0, 0};
  double bound = 0.0;      // L^3 sqrt(Delta_{K+1}); 0 at the base level
  bool base = false;
  bool holds = true;
};

struct DeltaChain {
  int L = 0;
  int P = 0;
  std::vector<DeltaLevel> levels;  // K = 1..2P
  bool heuristic = true;
};

inline DeltaChain delta_chain(const FourierProfile& n, int L) {
  for (const auto& [k, c] : n.coeffs()) {
    if (!in_z23(k)) throw PreconditionError("delta_chain: profile indices must lie in Z_{2,3}");
  }
  DeltaChain ch;
  ch.L = L;
  ch.P = pyramid_height(L);
  for (int K = 1; K <= 2 * ch.P; ++K) {
    DeltaLevel lv;
    lv.K = K;
    for (auto [k, l] : pyramid_set(L, K).pairs) {
      const double v = std::abs(diamond_pair_weight(k, l)) * std::abs(n.coeff(k) * n.coeff(l));
      if (v > lv.delta) {
        lv.delta = v;
        lv.argmax = {k, l};
      }
    }
    ch.levels.push_back(lv);
  }
  const double l3 = std::pow(static_cast<double>(L), 3);
  for (std::size_t i = 0; i < ch.levels.size(); ++i) {
    auto& lv = ch.levels[i];
    if (i + 1 == ch.levels.size()) {
      lv.base = true;
      continue;
    }
    lv.bound = l3 * std::sqrt(ch.levels[i + 1].delta);
    lv.holds = lv.delta <= lv.bound;
  }
  return ch;
}

enum class Verdict { kObstructed, kConsistentAtCutoff, kIndeterminate, kInapplicable };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kObstructed: return "obstructed";
    case Verdict::kConsistentAtCutoff: return "consistent-at-cutoff";
    case Verdict::kIndeterminate: return "indeterminate";
    case Verdict::kInapplicable: return "inapplicable";
  }
  return "unknown";
}

struct ClaimDiagnostics {
  std::vector<int> opposite_pairs;  // a > 0 with n_a n_{-a} != 0
  bool unique_opposite_pair = false;
  double rigid_sum = 0.0;           // |n_a + n_{-a}| for the unique pair
};

struct VerdictOptions {
  double tol = 1e-6;
  double noise = 1e-10;
  std::optional<ModularEstimate> modular;
};

struct ObstructionReport {
  int cutoff = 0;
  double tol = 0.0;
  double noise = 0.0;
  double normalization = 1.0;  // factor applied to reach sup-norm 1
  bool even = false;
  bool in_t2 = false;
  bool in_t3 = false;
  std::optional<ConstraintReport> constraints;
  std::optional<DqSeries> d2, d3;
  std::optional<ProjectionResiduals> projection;
  std::optional<DiamondResiduals> diamond;
  std::optional<DeltaChain> chain;
  std::optional<ClaimDiagnostics> claims;
  std::optional<double> remainder_bound;
  double max_diamond_residual = 0.0;  // over harmonics 6l, l != 0
  int worst_harmonic = 0;
  Verdict verdict = Verdict::kInapplicable;
  std::vector<std::string> notes;
};

inline ObstructionReport coexistence_verdict(const FourierProfile& input, int cutoff,
                                             const VerdictOptions& opt = {}) {
  ObstructionReport rep;
  rep.cutoff = cutoff;
  rep.tol = opt.tol;
  rep.noise = opt.noise;
  rep.even = input.has_even_symmetry();
  rep.in_t2 = tq_member(input, 2);
  rep.in_t3 = tq_member(input, 3);
  if (input.max_index() > cutoff) {
    rep.notes.push_back("profile index exceeds cutoff");
    return rep;
  }
  if (input.is_zero()) {
    rep.notes.push_back("trivial profile: rescale constraint cannot hold");
    return rep;
  }
  if (!rep.even) {
    rep.notes.push_back("profile is not even");
    return rep;
  }
  if (!rep.in_t2 || !rep.in_t3) {
    rep.notes.push_back(std::string("profile not in ") + (!rep.in_t2 ? "T_2" : "T_3") +
                        ": first-order term already obstructs");
    return rep;
  }

  const double sup = sup_norm(input).value;
  rep.normalization = 1.0 / sup;
  const auto n = input.scaled(rep.normalization);
  rep.constraints = check_constraints(n, 1e-10);
  if (!rep.constraints->rigid_ok) rep.notes.push_back("rigid constraint fails: n(0), n'(0) not zero");
  if (!rep.constraints->flux_ok) rep.notes.push_back("flux constraint fails");

  rep.d2 = dq_fourier(n, 2, cutoff);
  rep.d3 = dq_fourier(n, 3, cutoff);
  rep.projection = projection_from_series(*rep.d2, *rep.d3, opt.noise);
  rep.diamond = diamond_from_series(*rep.d2, *rep.d3, cutoff);
  int chain_l = cutoff;
  while (chain_l > 1 && !in_z23(chain_l)) --chain_l;
  if (chain_l >= 1) rep.chain = delta_chain(n, chain_l);

  ClaimDiagnostics cd;
  for (const auto& [k, c] : n.coeffs()) {
    if (k > 0 && std::abs(c * n.coeff(-k)) > opt.noise) cd.opposite_pairs.push_back(k);
  }
  cd.unique_opposite_pair = cd.opposite_pairs.size() == 1;
  if (cd.unique_opposite_pair) {
    const int a = cd.opposite_pairs.front();
    cd.rigid_sum = std::abs(n.coeff(a) + n.coeff(-a));
  }
  rep.claims = cd;

  if (opt.modular && !opt.modular->indices.empty()) {
    double w = opt.modular->w.front();
    for (std::size_t i = 0; i < opt.modular->indices.size(); ++i) {
      if (opt.modular->indices[i] <= cutoff) w = opt.modular->w[i];
    }
    rep.remainder_bound = std::exp(-w) * cutoff * cutoff;
  }

  if (!rep.projection->hold) {
    rep.notes.push_back("projection self-test failed");
    rep.verdict = Verdict::kInapplicable;
    return rep;
  }
  for (const auto& [l, e] : rep.diamond->entries) {
    if (l == 0) continue;
    if (e.residual > rep.max_diamond_residual) {
      rep.max_diamond_residual = e.residual;
      rep.worst_harmonic = e.harmonic;
    }
  }
  rep.notes.push_back("harmonic 0 reported but excluded: its balance is absorbed by the mean of m");
  if (rep.max_diamond_residual > opt.tol) {
    rep.verdict = Verdict::kObstructed;
  } else if (rep.max_diamond_residual > opt.noise) {
    rep.verdict = Verdict::kIndeterminate;
    rep.notes.push_back("diamond residual between noise floor and tolerance");
  } else {
    rep.verdict = Verdict::kConsistentAtCutoff;
    rep.notes.push_back("consistent at cutoff only; not a proof of coexistence");
  }
  return rep;
}

}  // namespace caustics
