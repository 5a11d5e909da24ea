#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "caustics/error.hpp"
#include "caustics/fourier_profile.hpp"
#include "caustics/numerics.hpp"

namespace caustics {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
};

struct ConvexityReport {
  bool convex = false;
  double min_curvature = 0.0;
  double argmin = 0.0;
};

struct Frame {
  Vec2 tangent;
  Vec2 normal;  // outward
};

/// Star-shaped curve r(theta) = 1 + eps n(theta) + eps^2 m(theta).
class DeformedBoundary {
 public:
  struct RadialJet {
    double r = 0.0;
    double dr = 0.0;
    double d2r = 0.0;
  };

  DeformedBoundary(FourierProfile n, FourierProfile m, double epsilon)
      : n_(std::move(n)), m_(std::move(m)), eps_(epsilon), sn_(n_), sm_(m_) {
    if (!std::isfinite(epsilon)) throw ValidationError("epsilon must be finite");
    check_positive_radius();
    build_length_table();
    convexity_ = scan_convexity();
  }

  DeformedBoundary(FourierProfile n, double epsilon)
      : DeformedBoundary(std::move(n), FourierProfile{}, epsilon) {}

  const FourierProfile& n() const { return n_; }
  const FourierProfile& m() const { return m_; }
  double epsilon() const { return eps_; }

  RadialJet radial_jet(double theta) const {
    const auto a = sn_.jet(theta);
    const auto b = sm_.jet(theta);
    const double e2 = eps_ * eps_;
    return {1.0 + eps_ * a.f + e2 * b.f, eps_ * a.df + e2 * b.df,
            eps_ * a.d2f + e2 * b.d2f};
  }

  double radius(double theta) const {
    const double r = radial_jet(theta).r;
    if (!(r > 0.0)) throw GeometryError("non-positive radius");
    return r;
  }

  Vec2 point(double theta) const {
    const double r = radius(theta);
    return {r * std::cos(theta), r * std::sin(theta)};
  }

  // First and second theta-derivatives of the curve.
  Vec2 velocity(double theta) const {
    const auto j = radial_jet(theta);
    const double c = std::cos(theta), s = std::sin(theta);
    return {j.dr * c - j.r * s, j.dr * s + j.r * c};
  }

  Vec2 acceleration(double theta) const {
    const auto j = radial_jet(theta);
    const double c = std::cos(theta), s = std::sin(theta);
    return {(j.d2r - j.r) * c - 2.0 * j.dr * s, (j.d2r - j.r) * s + 2.0 * j.dr * c};
  }

  double speed(double theta) const {
    const auto j = radial_jet(theta);
    return std::hypot(j.r, j.dr);
  }

  double total_length() const { return cumulative_.back(); }

  // Counter-clockwise arc length from theta = 0; s(theta + 2pi) = s(theta) + L.
  double arc_length(double theta) const {
    const double turns = std::floor(theta / numerics::kTwoPi);
    double t = theta - turns * numerics::kTwoPi;
    if (t < 0.0) t = 0.0;
    const double h = numerics::kTwoPi / kPanels;
    int j = std::min(kPanels - 1, static_cast<int>(t / h));
    const double partial = numerics::integrate(
        [this](double x) { return speed(x); }, j * h, t, 1e-14);
    return turns * total_length() + cumulative_[j] + partial;
  }

  double theta_from_arc(double s) const {
    const double total = total_length();
    const double turns = std::floor(s / total);
    const double rem = s - turns * total;
    // Panel lookup for a bracket, then safeguarded Newton.
    const double h = numerics::kTwoPi / kPanels;
    int j = static_cast<int>(std::upper_bound(cumulative_.begin(),
                                              cumulative_.end(), rem) -
                             cumulative_.begin()) - 1;
    j = std::clamp(j, 0, kPanels - 1);
    double lo = j * h, hi = (j + 1) * h;
    double t = lo + (rem - cumulative_[j]) / speed(lo);
    for (int it = 0; it < 100; ++it) {
      if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
      const double f = arc_length(t) - rem;
      if (std::abs(f) <= 1e-14 * std::max(1.0, total)) break;
      if (f > 0.0) hi = t; else lo = t;
      const double step = f / speed(t);
      t -= step;
      if (hi - lo < 1e-15) break;
    }
    return turns * numerics::kTwoPi + t;
  }

  Frame tangent_normal(double theta) const {
    const Vec2 v = velocity(theta);
    const double len = v.norm();
    const Vec2 t{v.x / len, v.y / len};
    return {t, Vec2{t.y, -t.x}};
  }

  double curvature(double theta) const {
    const auto j = radial_jet(theta);
    const double denom = std::pow(j.r * j.r + j.dr * j.dr, 1.5);
    return (j.r * j.r + 2.0 * j.dr * j.dr - j.r * j.d2r) / denom;
  }

  const ConvexityReport& convexity_check() const { return convexity_; }

 private:
  static constexpr int kPanels = 64;

  int scan_points() const {
    const int harmonic = std::max(n_.max_index(), m_.max_index());
    return std::max(4096, 8 * harmonic);
  }

  void check_positive_radius() const {
    const int n = scan_points();
    const double h = numerics::kTwoPi / n;
    auto r = [this](double t) { return radial_jet(t).r; };
    double rmin = r(0.0);
    int jmin = 0;
    for (int j = 1; j < n; ++j) {
      const double v = r(j * h);
      if (v < rmin) { rmin = v; jmin = j; }
    }
    const double t = numerics::golden_section_max(
        [&](double x) { return -r(x); }, (jmin - 1) * h, (jmin + 1) * h, 1e-12);
    rmin = std::min(rmin, r(t));
    if (!(rmin > 0.0)) {
      throw GeometryError("radius not positive: min r = " + std::to_string(rmin));
    }
  }

  void build_length_table() {
    const double h = numerics::kTwoPi / kPanels;
    cumulative_.assign(kPanels + 1, 0.0);
    for (int j = 0; j < kPanels; ++j) {
      cumulative_[j + 1] =
          cumulative_[j] + numerics::integrate([this](double x) { return speed(x); },
                                               j * h, (j + 1) * h, 1e-15);
    }
  }

  ConvexityReport scan_convexity() const {
    const int n = scan_points();
    const double h = numerics::kTwoPi / n;
    std::vector<double> k(n);
    for (int j = 0; j < n; ++j) k[j] = curvature(j * h);
    std::vector<int> minima;
    for (int j = 0; j < n; ++j) {
      if (k[j] <= k[(j + n - 1) % n] && k[j] <= k[(j + 1) % n]) minima.push_back(j);
    }
    std::sort(minima.begin(), minima.end(), [&](int a, int b) { return k[a] < k[b]; });
    if (minima.size() > 4) minima.resize(4);
    ConvexityReport rep{true, k[0], 0.0};
    for (int j = 0; j < n; ++j) {
      if (k[j] < rep.min_curvature) rep = {true, k[j], j * h};
    }
    for (int j : minima) {
      const double t = numerics::golden_section_max(
          [&](double x) { return -curvature(x); }, (j - 1) * h, (j + 1) * h, 1e-12);
      const double v = curvature(t);
      if (v < rep.min_curvature) rep = {true, v, t};
    }
    rep.convex = rep.min_curvature > 0.0;
    return rep;
  }

  FourierProfile n_, m_;
  double eps_ = 0.0;
  TrigSeries sn_, sm_;
  std::vector<double> cumulative_;
  ConvexityReport convexity_;
};

}  // namespace caustics
