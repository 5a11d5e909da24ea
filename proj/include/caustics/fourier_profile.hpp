#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "caustics/error.hpp"
#include "caustics/numerics.hpp"

namespace caustics {

struct TrigTerm {
  int k = 0;
  double cos = 0.0;
  double sin = 0.0;
};

/// Real 2pi-periodic function stored by its nonzero exponential Fourier
/// coefficients, with n_{-k} = conj(n_k).
class FourierProfile {
 public:
  using Coeff = std::complex<double>;
  using CoeffMap = std::map<int, Coeff>;

  static constexpr double kRealnessTol = 1e-12;

  FourierProfile() = default;

  static FourierProfile from_exponential(const CoeffMap& coeffs,
                                         bool even = false,
                                         std::optional<int> cutoff = {},
                                         bool truncated = false) {
    FourierProfile p;
    p.even_ = even;
    p.truncated_ = truncated;
    for (const auto& [k, c] : coeffs) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw ValidationError("non-finite coefficient at k=" + std::to_string(k));
      }
      if (c != Coeff{}) p.coeffs_[k] = c;
    }
    for (const auto& [k, c] : p.coeffs_) {
      const Coeff partner = p.coeff(-k);
      const double scale = std::max(1.0, std::abs(c));
      if (std::abs(partner - std::conj(c)) > kRealnessTol * scale) {
        throw ValidationError("realness violated: n_{-k} != conj(n_k) at k=" +
                              std::to_string(k));
      }
    }
    // Symmetrise exactly so evaluation stays real to rounding.
    CoeffMap sym;
    for (const auto& [k, c] : p.coeffs_) {
      if (k == 0) {
        sym[0] = Coeff(c.real(), 0.0);
      } else if (k > 0) {
        const Coeff avg = 0.5 * (c + std::conj(p.coeff(-k)));
        sym[k] = avg;
        sym[-k] = std::conj(avg);
      }
    }
    p.coeffs_ = std::move(sym);
    if (even) {
      for (const auto& [k, c] : p.coeffs_) {
        if (std::abs(c.imag()) > kRealnessTol * std::max(1.0, std::abs(c))) {
          throw ValidationError("profile flagged even has complex coefficient at k=" +
                                std::to_string(k));
        }
      }
    }
    p.cutoff_ = p.max_index();
    if (cutoff) {
      if (*cutoff < p.cutoff_) {
        throw ValidationError("cutoff " + std::to_string(*cutoff) +
                              " below largest stored index " +
                              std::to_string(p.cutoff_));
      }
      p.cutoff_ = *cutoff;
    }
    return p;
  }

  // n_{+-k} = (cos -+ i sin) / 2 for k >= 1; k = 0 contributes cos as n_0.
  static FourierProfile from_trig(std::span<const TrigTerm> terms,
                                  bool even = false,
                                  std::optional<int> cutoff = {},
                                  bool truncated = false) {
    CoeffMap c;
    for (const auto& t : terms) {
      if (t.k < 0) throw ValidationError("trig term with negative k");
      if (t.k == 0) {
        if (t.sin != 0.0) throw ValidationError("trig term k=0 with sine part");
        c[0] += t.cos;
        continue;
      }
      c[t.k] += Coeff(0.5 * t.cos, -0.5 * t.sin);
      c[-t.k] += Coeff(0.5 * t.cos, 0.5 * t.sin);
    }
    return from_exponential(c, even, cutoff, truncated);
  }

  static FourierProfile cosine(int k, double amplitude = 1.0) {
    const TrigTerm t{std::abs(k), amplitude, 0.0};
    return from_trig(std::span<const TrigTerm>(&t, 1), true);
  }

  static FourierProfile sine(int k, double amplitude = 1.0) {
    const TrigTerm t{std::abs(k), 0.0, k < 0 ? -amplitude : amplitude};
    return from_trig(std::span<const TrigTerm>(&t, 1), false);
  }

  const CoeffMap& coeffs() const { return coeffs_; }

  Coeff coeff(int k) const {
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? Coeff{} : it->second;
  }

  int cutoff() const { return cutoff_; }
  bool even() const { return even_; }
  bool truncated() const { return truncated_; }

  int max_index() const {
    int m = 0;
    for (const auto& [k, c] : coeffs_) m = std::max(m, std::abs(k));
    return m;
  }

  bool is_zero(double tol = 0.0) const {
    for (const auto& [k, c] : coeffs_) {
      if (std::abs(c) > tol) return false;
    }
    return true;
  }

  // True when every coefficient is real, i.e. n(-theta) = n(theta).
  bool has_even_symmetry(double tol = kRealnessTol) const {
    for (const auto& [k, c] : coeffs_) {
      if (std::abs(c.imag()) > tol * std::max(1.0, std::abs(c))) return false;
    }
    return true;
  }

  double l1_norm() const {
    double s = 0.0;
    for (const auto& [k, c] : coeffs_) s += std::abs(c);
    return s;
  }

  FourierProfile scaled(double factor) const {
    CoeffMap c;
    for (const auto& [k, v] : coeffs_) c[k] = factor * v;
    return from_exponential(c, even_, cutoff_, truncated_);
  }

  friend FourierProfile operator+(const FourierProfile& a,
                                  const FourierProfile& b) {
    CoeffMap c = a.coeffs_;
    for (const auto& [k, v] : b.coeffs_) c[k] += v;
    return from_exponential(c, a.even_ && b.even_,
                            std::max(a.cutoff_, b.cutoff_),
                            a.truncated_ || b.truncated_);
  }

  friend FourierProfile operator-(const FourierProfile& a,
                                  const FourierProfile& b) {
    return a + b.scaled(-1.0);
  }

  friend FourierProfile operator*(double f, const FourierProfile& p) {
    return p.scaled(f);
  }

 private:
  CoeffMap coeffs_;
  int cutoff_ = 0;
  bool even_ = false;
  bool truncated_ = false;
};

/// Real cosine/sine form of a profile for repeated evaluation with
/// derivatives.
class TrigSeries {
 public:
  struct Jet {
    double f = 0.0;
    double df = 0.0;
    double d2f = 0.0;
  };

  TrigSeries() = default;

  explicit TrigSeries(const FourierProfile& p) {
    a0_ = p.coeff(0).real();
    for (const auto& [k, c] : p.coeffs()) {
      if (k <= 0) continue;
      k_.push_back(k);
      a_.push_back(2.0 * c.real());
      b_.push_back(-2.0 * c.imag());
    }
  }

  double value(double theta) const {
    double f = a0_;
    for (std::size_t j = 0; j < k_.size(); ++j) {
      const double x = k_[j] * theta;
      f += a_[j] * std::cos(x) + b_[j] * std::sin(x);
    }
    return f;
  }

  Jet jet(double theta) const {
    Jet out{a0_, 0.0, 0.0};
    for (std::size_t j = 0; j < k_.size(); ++j) {
      const double k = k_[j];
      const double c = std::cos(k * theta), s = std::sin(k * theta);
      const double f = a_[j] * c + b_[j] * s;
      out.f += f;
      out.df += k * (b_[j] * c - a_[j] * s);
      out.d2f -= k * k * f;
    }
    return out;
  }

  int max_harmonic() const { return k_.empty() ? 0 : k_.back(); }

 private:
  double a0_ = 0.0;
  std::vector<int> k_;
  std::vector<double> a_, b_;
};

inline double evaluate(const FourierProfile& p, double theta) {
  std::complex<double> sum{};
  for (const auto& [k, c] : p.coeffs()) {
    sum += c * std::polar(1.0, k * theta);
  }
  const double bound = FourierProfile::kRealnessTol * std::max(1.0, p.l1_norm());
  if (std::abs(sum.imag()) >= bound) {
    throw ConsistencyError("evaluate: imaginary residue " +
                           std::to_string(sum.imag()) + " exceeds bound");
  }
  return sum.real();
}

// n_k -> (ik)^order n_k.
inline FourierProfile derivative(const FourierProfile& p, int order = 1) {
  if (order < 0) throw DomainError("derivative: negative order");
  static const std::complex<double> kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  FourierProfile::CoeffMap out;
  for (const auto& [k, c] : p.coeffs()) {
    if (order > 0 && k == 0) continue;
    out[k] = c * kIPow[order % 4] * std::pow(static_cast<double>(k), order);
  }
  const bool even = p.even() && order % 2 == 0;
  return FourierProfile::from_exponential(out, even, p.cutoff(), p.truncated());
}

// Keeps the harmonics divisible by q: the average of n over the q rotations
// by 2pi/q.
inline FourierProfile q_average(const FourierProfile& p, int q) {
  if (q < 1) throw DomainError("q_average: q must be positive");
  FourierProfile::CoeffMap out;
  for (const auto& [k, c] : p.coeffs()) {
    if (k % q == 0) out[k] = c;
  }
  return FourierProfile::from_exponential(out, p.even(), p.cutoff(),
                                          p.truncated());
}

inline bool tq_member(const FourierProfile& p, int q, double tol = 1e-12) {
  if (q < 1) throw DomainError("tq_member: q must be positive");
  for (const auto& [k, c] : p.coeffs()) {
    if (k % q == 0 && std::abs(c) > tol) return false;
  }
  return true;
}

struct SupNorm {
  double value = 0.0;
  double argmax = 0.0;
};

inline SupNorm sup_norm(const FourierProfile& p) {
  const TrigSeries f(p);
  const int n = std::max(4096, 16 * p.max_index());
  const double h = numerics::kTwoPi / n;
  std::vector<double> vals(n);
  for (int j = 0; j < n; ++j) vals[j] = std::abs(f.value(j * h));
  // Refine the three largest grid samples that are local maxima.
  std::vector<int> peaks;
  for (int j = 0; j < n; ++j) {
    const double prev = vals[(j + n - 1) % n], next = vals[(j + 1) % n];
    if (vals[j] >= prev && vals[j] >= next) peaks.push_back(j);
  }
  std::sort(peaks.begin(), peaks.end(),
            [&](int a, int b) { return vals[a] > vals[b]; });
  if (peaks.size() > 3) peaks.resize(3);
  SupNorm best;
  for (int j : peaks) {
    auto g = [&](double t) { return std::abs(f.value(t)); };
    const double t = numerics::golden_section_max(g, (j - 1) * h, (j + 1) * h, 1e-10);
    const double v = std::max(g(t), vals[j]);
    if (v > best.value) best = {v, v == vals[j] ? j * h : t};
  }
  return best;
}

inline FourierProfile sup_normalized(const FourierProfile& p) {
  const double s = sup_norm(p).value;
  if (s == 0.0) throw DomainError("sup_normalized: zero profile");
  return p.scaled(1.0 / s);
}

struct ConstraintReport {
  double tol = 0.0;
  double sup_norm = 0.0;
  bool rescale_ok = false;
  double value_at_zero = 0.0;
  double derivative_at_zero = 0.0;
  bool rigid_ok = false;
  double mean = 0.0;
  bool flux_ok = false;
};

inline ConstraintReport check_constraints(const FourierProfile& p,
                                          double tol = 1e-10) {
  ConstraintReport r;
  r.tol = tol;
  r.sup_norm = sup_norm(p).value;
  r.rescale_ok = std::abs(r.sup_norm - 1.0) <= tol;
  r.value_at_zero = evaluate(p, 0.0);
  r.derivative_at_zero = evaluate(derivative(p, 1), 0.0);
  r.rigid_ok = std::abs(r.value_at_zero) <= tol &&
               std::abs(r.derivative_at_zero) <= tol;
  r.mean = p.coeff(0).real();
  r.flux_ok = std::abs(p.coeff(0)) <= tol;
  return r;
}

/// Slowest-decay stream: k_1 maximises |n_k|, each next index maximises
/// |n_k| over |k| beyond the previous one. Ties go to the larger |k|.
struct ModularEstimate {
  std::vector<int> indices;
  std::vector<double> magnitudes;
  std::vector<double> w;            // -log|n_k|
  std::vector<double> ratio_2exp;   // w(k) / 2^k
  bool truncated = false;
};

inline ModularEstimate slowest_decay(const FourierProfile& p) {
  std::vector<std::pair<int, double>> mags;
  for (const auto& [k, c] : p.coeffs()) {
    if (k > 0 && std::abs(c) > 0.0) mags.emplace_back(k, std::abs(c));
  }
  if (mags.empty()) {
    throw DomainError("slowest_decay: profile has no nonzero harmonics");
  }
  ModularEstimate est;
  est.truncated = p.truncated();
  int floor_k = 0;
  for (;;) {
    int best_k = -1;
    double best = -1.0;
    for (const auto& [k, m] : mags) {
      if (k <= floor_k) continue;
      const double tie = 1e-12 * std::max(m, best);
      if (m > best + tie || (std::abs(m - best) <= tie && k > best_k)) {
        best = m;
        best_k = k;
      }
    }
    if (best_k < 0) break;
    est.indices.push_back(best_k);
    est.magnitudes.push_back(best);
    est.w.push_back(-std::log(best));
    est.ratio_2exp.push_back(-std::log(best) / std::ldexp(1.0, best_k));
    floor_k = best_k;
  }
  return est;
}

enum class DecayVerdict { kPolynomial, kSuperExponential, kFails };

inline std::string to_string(DecayVerdict v) {
  switch (v) {
    case DecayVerdict::kPolynomial: return "polynomial";
    case DecayVerdict::kSuperExponential: return "super-exponential";
    case DecayVerdict::kFails: return "fails";
  }
  return "unknown";
}

struct DecayAssessment {
  DecayVerdict verdict = DecayVerdict::kFails;
  bool heuristic = true;  // finite data cannot certify a limit
  double last_ratio = 0.0;
};

inline DecayAssessment decay_condition(const ModularEstimate& est,
                                       double threshold = 2.0) {
  DecayAssessment a;
  if (!est.ratio_2exp.empty()) a.last_ratio = est.ratio_2exp.back();
  if (!est.truncated) {
    a.verdict = DecayVerdict::kPolynomial;
    return a;
  }
  bool increasing = est.ratio_2exp.size() >= 2;
  for (std::size_t i = 1; i < est.ratio_2exp.size(); ++i) {
    if (!(est.ratio_2exp[i] > est.ratio_2exp[i - 1])) increasing = false;
  }
  a.verdict = increasing && a.last_ratio > threshold
                  ? DecayVerdict::kSuperExponential
                  : DecayVerdict::kFails;
  return a;
}

}  // namespace caustics
