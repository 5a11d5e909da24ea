#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "caustics/boundary_geometry.hpp"
#include "caustics/error.hpp"
#include "caustics/numerics.hpp"

namespace caustics {

/// Boundary point s (arc length) and angle v in (0, pi) between the
/// outgoing chord and the positive tangent.
struct PhasePoint {
  double s = 0.0;
  double v = 0.0;
};

/// Lifted polar angles theta_0 <= ... <= theta_q = theta_0 + 2 pi p.
struct OrbitConfiguration {
  std::vector<double> angles;
  int q = 0;
  int p = 1;

  void validate() const {
    if (q < 2) throw ValidationError("orbit configuration needs q >= 2");
    if (p < 1) throw ValidationError("orbit configuration needs p >= 1");
    if (static_cast<int>(angles.size()) != q + 1) {
      throw ValidationError("orbit configuration needs q+1 angles");
    }
    const double lift = angles[q] - angles[0] - numerics::kTwoPi * p;
    if (std::abs(lift) > 1e-9) {
      throw ValidationError("last angle must equal first + 2 pi p");
    }
    for (int i = 0; i + 1 < q; ++i) {
      const double gap = angles[i + 1] - angles[i];
      if (!(gap >= 0.0 && gap < numerics::kTwoPi)) {
        throw ValidationError("ordering rule violated at vertex " + std::to_string(i));
      }
    }
  }
};

inline double generating_h(const DeformedBoundary& b, double theta,
                           double theta_next) {
  const Vec2 d = b.point(theta) - b.point(theta_next);
  const double len = d.norm();
  if (len < 1e-14) throw GeometryError("generating_h: coincident points");
  return -len;
}

namespace detail {

inline constexpr double kHStep = 1e-6;

// Partials of h in the polar-angle arguments by central differences.
inline double h_d1(const DeformedBoundary& b, double a, double c) {
  return (generating_h(b, a + kHStep, c) - generating_h(b, a - kHStep, c)) /
         (2.0 * kHStep);
}

inline double h_d2(const DeformedBoundary& b, double a, double c) {
  return (generating_h(b, a, c + kHStep) - generating_h(b, a, c - kHStep)) /
         (2.0 * kHStep);
}

}  // namespace detail

// Partial derivatives of h with respect to arc length at each endpoint.
inline double h_partial_s1(const DeformedBoundary& b, double theta, double theta_next) {
  return detail::h_d1(b, theta, theta_next) / b.speed(theta);
}

inline double h_partial_s2(const DeformedBoundary& b, double theta, double theta_next) {
  return detail::h_d2(b, theta, theta_next) / b.speed(theta_next);
}

inline PhasePoint billiard_step(const DeformedBoundary& b, PhasePoint pt) {
  if (!b.convexity_check().convex) {
    throw GeometryError("billiard_step: boundary not strictly convex");
  }
  if (!(pt.v > 0.0 && pt.v < numerics::kPi)) {
    throw DomainError("billiard_step: v must lie in (0, pi)");
  }
  const double th0 = b.theta_from_arc(pt.s);
  const Vec2 p0 = b.point(th0);
  const Vec2 t0 = b.tangent_normal(th0).tangent;
  auto g = [&](double psi) {
    const Vec2 d = b.point(psi) - p0;
    return std::atan2(t0.cross(d), t0.dot(d)) - pt.v;
  };

  double delta = 1e-7;
  double lo = th0 + delta, hi = th0 + numerics::kTwoPi - delta;
  while ((g(lo) >= 0.0 || g(hi) <= 0.0) && delta > 1e-13) {
    delta *= 0.1;
    lo = th0 + delta;
    hi = th0 + numerics::kTwoPi - delta;
  }
  if (g(lo) >= 0.0 || g(hi) <= 0.0) {
    throw ConvergenceError("billiard_step: could not bracket the chord angle");
  }
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  double psi = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    const double h = 1e-7;
    const double f = g(psi);
    const double df = (g(psi + h) - g(psi - h)) / (2.0 * h);
    if (df <= 0.0) break;
    const double next = psi - f / df;
    if (!(next >= lo && next <= hi)) break;
    if (std::abs(next - psi) < 1e-15) { psi = next; break; }
    psi = next;
  }

  const Vec2 p1 = b.point(psi);
  Vec2 d = p1 - p0;
  d = d * (1.0 / d.norm());
  const Vec2 t1 = b.tangent_normal(psi).tangent;
  const Vec2 out = t1 * (2.0 * d.dot(t1)) - d;
  PhasePoint next;
  next.v = std::atan2(t1.cross(out), t1.dot(out));
  const double total = b.total_length();
  next.s = std::fmod(b.arc_length(psi), total);
  if (next.s < 0.0) next.s += total;
  return next;
}

// Discrete Euler-Lagrange residual, one component per vertex, cyclic.
inline std::vector<double> el_residual(const DeformedBoundary& b,
                                       const OrbitConfiguration& c) {
  c.validate();
  std::vector<double> r(c.q);
  const double lift = numerics::kTwoPi * c.p;
  for (int i = 0; i < c.q; ++i) {
    const double prev = i == 0 ? c.angles[c.q - 1] - lift : c.angles[i - 1];
    r[i] = h_partial_s1(b, c.angles[i], c.angles[i + 1]) +
           h_partial_s2(b, prev, c.angles[i]);
  }
  return r;
}

}  // namespace caustics
