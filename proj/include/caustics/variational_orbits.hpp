#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "caustics/billiard_dynamics.hpp"
#include "caustics/boundary_geometry.hpp"
#include "caustics/error.hpp"
#include "caustics/numerics.hpp"

namespace caustics {

struct ActionSample {
  double theta = 0.0;
  int q = 0;
  int p = 1;
  double value = 0.0;
  OrbitConfiguration config;
  double el_residual = 0.0;       // max over interior vertices
  double multistart_spread = 0.0; // max - min over converged starts
  int starts_converged = 0;
};

struct MaximizeOptions {
  int jittered_starts = 2;
  double jitter = 0.15;           // fraction of the mean gap
  std::uint64_t seed = 0;
  int max_sweeps = 200;
  double improvement_tol = 1e-12;
  double el_tol = 1e-9;
};

inline double perimeter(const DeformedBoundary& b, const OrbitConfiguration& c) {
  c.validate();
  double sum = 0.0;
  for (int i = 0; i < c.q; ++i) {
    sum += (b.point(c.angles[i + 1]) - b.point(c.angles[i])).norm();
  }
  return sum;
}

namespace detail {

struct ChordDerivs {
  double c = 0.0;
  double da = 0.0, db = 0.0;
  double daa = 0.0, dbb = 0.0, dab = 0.0;
};

// Chord |P(a) - P(b)| and its derivatives in the two polar angles.
inline ChordDerivs chord_derivs(const DeformedBoundary& bd, double a, double b) {
  const Vec2 pa = bd.point(a), pb = bd.point(b);
  const Vec2 va = bd.velocity(a), vb = bd.velocity(b);
  const Vec2 aa = bd.acceleration(a), ab = bd.acceleration(b);
  const Vec2 d = pa - pb;
  ChordDerivs out;
  out.c = d.norm();
  if (out.c < 1e-14) throw GeometryError("chord between coincident vertices");
  const double c = out.c, c3 = c * c * c;
  const double dva = d.dot(va), dvb = d.dot(vb);
  out.da = dva / c;
  out.db = -dvb / c;
  out.daa = (va.dot(va) + d.dot(aa)) / c - dva * dva / c3;
  out.dbb = (vb.dot(vb) - d.dot(ab)) / c - dvb * dvb / c3;
  out.dab = -va.dot(vb) / c + dva * dvb / c3;
  return out;
}

inline double config_perimeter(const DeformedBoundary& b,
                               const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    s += (b.point(x[i + 1]) - b.point(x[i])).norm();
  }
  return s;
}

inline bool ordered(const std::vector<double>& x) {
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (!(x[i + 1] > x[i])) return false;
  }
  return true;
}

struct AscentResult {
  std::vector<double> x;
  double value = 0.0;
  bool converged = false;
};

// Coordinate ascent with one Newton step per vertex, then a full
// tridiagonal Newton polish on the interior vertices.
inline AscentResult ascend(const DeformedBoundary& b, std::vector<double> x,
                           const MaximizeOptions& opt) {
  const int q = static_cast<int>(x.size()) - 1;
  double value = config_perimeter(b, x);
  AscentResult res;
  // A failed Newton polish falls back to further coordinate sweeps.
  for (int round = 0; round < 4 && !res.converged; ++round) {
    for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
      double max_step = 0.0;
      for (int i = 1; i < q; ++i) {
        const auto left = chord_derivs(b, x[i - 1], x[i]);
        const auto right = chord_derivs(b, x[i], x[i + 1]);
        const double g = left.db + right.da;
        const double h = left.dbb + right.daa;
        const double room = 0.45 * std::min(x[i] - x[i - 1], x[i + 1] - x[i]);
        double step = h < 0.0 ? -g / h : (g > 0.0 ? room : -room);
        step = std::clamp(step, -room, room);
        // Backtrack until the two adjacent chords do not get shorter.
        const double base = left.c + right.c;
        auto local = [&](double xi) {
          return (b.point(xi) - b.point(x[i - 1])).norm() + (b.point(x[i + 1]) - b.point(xi)).norm();
        };
        while (std::abs(step) > 1e-16 && local(x[i] + step) < base) step *= 0.5;
        x[i] += step;
        max_step = std::max(max_step, std::abs(step));
      }
      const double next = config_perimeter(b, x);
      const double gain = next - value;
      value = next;
      if (max_step < 1e-8 || std::abs(gain) <= opt.improvement_tol) break;
    }

    for (int it = 0; it < 40 && q > 1; ++it) {
      const int n = q - 1;
      std::vector<double> sub(n, 0.0), diag(n), sup(n, 0.0), rhs(n);
      for (int i = 1; i < q; ++i) {
        const auto left = chord_derivs(b, x[i - 1], x[i]);
        const auto right = chord_derivs(b, x[i], x[i + 1]);
        rhs[i - 1] = -(left.db + right.da);
        diag[i - 1] = left.dbb + right.daa;
        if (i + 1 < q) sup[i - 1] = right.dab;
        if (i > 1) sub[i - 1] = left.dab;
      }
      double gnorm = 0.0;
      for (double g : rhs) gnorm = std::max(gnorm, std::abs(g));
      if (gnorm <= 1e-14) { res.converged = true; break; }
      const auto step = numerics::solve_tridiagonal(sub, diag, sup, rhs);
      double t = 1.0;
      std::vector<double> trial = x;
      bool accepted = false;
      for (int ls = 0; ls < 30; ++ls, t *= 0.5) {
        for (int i = 1; i < q; ++i) trial[i] = x[i] + t * step[i - 1];
        if (!ordered(trial)) continue;
        const double v = config_perimeter(b, trial);
        if (v >= value - 1e-14 * std::max(1.0, value)) {
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      double smax = 0.0;
      for (double s : step) smax = std::max(smax, std::abs(t * s));
      x = trial;
      value = config_perimeter(b, x);
      if (smax < 1e-15) { res.converged = true; break; }
    }
    if (!res.converged && q > 1) {
      double gnorm = 0.0;
      for (int i = 1; i < q; ++i) {
        gnorm = std::max(gnorm, std::abs(chord_derivs(b, x[i - 1], x[i]).db +
                                         chord_derivs(b, x[i], x[i + 1]).da));
      }
      res.converged = gnorm <= 1e-11;
    }
  }
  if (q == 1) res.converged = true;
  res.x = std::move(x);
  res.value = value;
  return res;
}

inline std::uint64_t mix_seed(std::uint64_t seed, double theta, int q) {
  std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ULL;
  h ^= std::bit_cast<std::uint64_t>(theta) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= static_cast<std::uint64_t>(q) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace detail

// Maximal q-periodic perimeter with theta_0 pinned to theta.
inline ActionSample maximize_perimeter(const DeformedBoundary& b, int q,
                                       double theta, int p = 1,
                                       const MaximizeOptions& opt = {}) {
  if (q < 2) throw DomainError("maximize_perimeter: q must be >= 2");
  if (p < 1) throw DomainError("maximize_perimeter: p must be >= 1");
  if (!b.convexity_check().convex) {
    throw GeometryError("maximize_perimeter: boundary not strictly convex");
  }
  const double span = numerics::kTwoPi * p;
  const double gap = span / q;
  std::vector<double> base(q + 1);
  for (int i = 0; i <= q; ++i) base[i] = theta + gap * i;

  std::mt19937_64 rng(detail::mix_seed(opt.seed, theta, q));
  std::uniform_real_distribution<double> jitter(-opt.jitter, opt.jitter);

  ActionSample best;
  best.theta = theta;
  best.q = q;
  best.p = p;
  double lo = 0.0, hi = 0.0;
  int converged = 0;
  for (int start = 0; start <= opt.jittered_starts; ++start) {
    std::vector<double> x = base;
    if (start > 0) {
      for (int i = 1; i < q; ++i) x[i] += gap * jitter(rng);
    }
    auto res = detail::ascend(b, x, opt);
    if (!res.converged) continue;
    if (converged == 0 || res.value > best.value) {
      best.value = res.value;
      best.config = OrbitConfiguration{res.x, q, p};
    }
    lo = converged == 0 ? res.value : std::min(lo, res.value);
    hi = converged == 0 ? res.value : std::max(hi, res.value);
    ++converged;
  }
  if (converged == 0) {
    throw ConvergenceError("maximize_perimeter: no start converged");
  }
  best.starts_converged = converged;
  best.multistart_spread = hi - lo;
  const auto res = el_residual(b, best.config);
  double interior = 0.0;
  for (int i = 1; i < q; ++i) interior = std::max(interior, std::abs(res[i]));
  best.el_residual = interior;
  if (interior > opt.el_tol) {
    throw ConvergenceError("maximize_perimeter: interior EL residual " +
                           std::to_string(interior));
  }
  return best;
}

struct PqProfile {
  int q = 0;
  std::vector<ActionSample> samples;
  double min = 0.0;
  double max = 0.0;
  double spread = 0.0;
};

inline PqProfile pq_profile(const DeformedBoundary& b, int q, int grid_size,
                            const MaximizeOptions& opt = {}) {
  if (grid_size < 8) throw DomainError("pq_profile: grid must have >= 8 points");
  PqProfile prof;
  prof.q = q;
  prof.samples.resize(grid_size);
  numerics::parallel_for(grid_size, [&](std::size_t j) {
    const double theta = numerics::kTwoPi * static_cast<double>(j) / grid_size;
    prof.samples[j] = maximize_perimeter(b, q, theta, 1, opt);
  });
  prof.min = prof.max = prof.samples[0].value;
  for (const auto& s : prof.samples) {
    prof.min = std::min(prof.min, s.value);
    prof.max = std::max(prof.max, s.value);
  }
  prof.spread = prof.max - prof.min;
  return prof;
}

struct Rational {
  int num = 0;
  int den = 1;
};

inline Rational rotation_number(const OrbitConfiguration& c) {
  c.validate();
  if (c.p >= c.q) throw DomainError("rotation number must be below 1");
  const int g = std::gcd(c.p, c.q);
  return {c.p / g, c.q / g};
}

}  // namespace caustics
