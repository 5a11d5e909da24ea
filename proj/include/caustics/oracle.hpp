#pragma once

// Independent numerical ground truth for the epsilon-expansion of the
// pinned maximal perimeter. Deliberately does not include the
// perturbation engine.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "caustics/billiard_dynamics.hpp"
#include "caustics/boundary_geometry.hpp"
#include "caustics/error.hpp"
#include "caustics/fourier_profile.hpp"
#include "caustics/numerics.hpp"
#include "caustics/variational_orbits.hpp"

namespace caustics {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

struct ExpansionEstimate {
  Estimate order0, order1, order2;
  std::vector<double> eps_grid;
  int richardson_order = 0;        // highest power of eps eliminated
  std::vector<double> cubic_fit;   // c0..c3 from least squares on all samples
  double fit_residual = 0.0;
};

inline std::vector<double> default_eps_grid() {
  return {1e-2, 7.5e-3, 5e-3, 2.5e-3, 1.25e-3};
}

// P_q(theta) sampled at 0 and +-eps. Symmetric differences remove odd or
// even powers, and Neville extrapolation in eps^2 removes the rest.
inline ExpansionEstimate fd_expansion(const FourierProfile& n, const FourierProfile& m,
                                      int q, double theta,
                                      std::vector<double> eps_grid = default_eps_grid(),
                                      const MaximizeOptions& opt = {}) {
  if (eps_grid.size() < 3) throw DomainError("fd_expansion: need at least 3 eps values");
  std::sort(eps_grid.begin(), eps_grid.end(), std::greater<>());
  for (double e : eps_grid) {
    if (!(e > 0.0)) throw DomainError("fd_expansion: eps values must be positive");
  }
  auto sample = [&](double eps) {
    const DeformedBoundary b(n, m, eps);
    if (!b.convexity_check().convex) {
      throw GeometryError("fd_expansion: convexity lost at eps=" + std::to_string(eps));
    }
    return maximize_perimeter(b, q, theta, 1, opt).value;
  };

  const std::size_t k = eps_grid.size();
  std::vector<double> plus(k), minus(k);
  double p0 = 0.0;
  numerics::parallel_for(2 * k + 1, [&](std::size_t i) {
    if (i == 2 * k) {
      p0 = sample(0.0);
    } else if (i < k) {
      plus[i] = sample(eps_grid[i]);
    } else {
      minus[i - k] = sample(-eps_grid[i - k]);
    }
  });

  std::vector<double> x(k), d1(k), d2(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double e = eps_grid[i];
    x[i] = e * e;
    d1[i] = (plus[i] - minus[i]) / (2.0 * e);
    d2[i] = (plus[i] + minus[i] - 2.0 * p0) / (2.0 * e * e);
  }
  const auto r1 = numerics::neville_to_zero(x, d1);
  const auto r2 = numerics::neville_to_zero(x, d2);

  // Round-off floor: optimizer values are accurate to a few ulps of P.
  const double ulp = 8.0 * 2.2e-16 * std::max(1.0, std::abs(p0));
  const double emin = eps_grid.back();

  ExpansionEstimate est;
  est.eps_grid = eps_grid;
  est.richardson_order = 2 * static_cast<int>(k);
  est.order0 = {p0, ulp};
  est.order1 = {r1.value, r1.error + ulp / emin};
  est.order2 = {r2.value, r2.error + 2.0 * ulp / (emin * emin)};

  const int rows = static_cast<int>(2 * k + 1);
  const double scale = eps_grid.front();
  Eigen::MatrixXd A(rows, 4);
  Eigen::VectorXd y(rows);
  auto put = [&](int r, double e, double v) {
    const double t = e / scale;
    A.row(r) << 1.0, t, t * t, t * t * t;
    y[r] = v;
  };
  for (std::size_t i = 0; i < k; ++i) {
    put(static_cast<int>(2 * i), eps_grid[i], plus[i]);
    put(static_cast<int>(2 * i + 1), -eps_grid[i], minus[i]);
  }
  put(rows - 1, 0.0, p0);
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
  est.cubic_fit = {c[0], c[1] / scale, c[2] / (scale * scale), c[3] / (scale * scale * scale)};
  est.fit_residual = (A * c - y).cwiseAbs().maxCoeff();
  return est;
}

namespace detail {

// Compass search: derivative-free polish of the interior vertices.
template <class F>
double compass_polish(F&& value, std::vector<double>& x, double step) {
  double best = value(x);
  while (step > 1e-13) {
    bool improved = false;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
      for (double dir : {1.0, -1.0}) {
        std::vector<double> trial = x;
        trial[i] += dir * step;
        if (!(trial[i] > trial[i - 1] && trial[i] < trial[i + 1])) continue;
        const double v = value(trial);
        if (v > best) {
          best = v;
          x = std::move(trial);
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace detail

// Exhaustive grid over the interior vertices, then compass polish.
inline double brute_pq(const DeformedBoundary& b, int q, double theta, int density) {
  if (q != 2 && q != 3) throw DomainError("brute_pq: q must be 2 or 3");
  if (density < 4) throw DomainError("brute_pq: density too small");
  const double h = numerics::kTwoPi / density;
  auto value = [&](const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) s += (b.point(x[i + 1]) - b.point(x[i])).norm();
    return s;
  };
  std::vector<double> best_x;
  double best = -1.0;
  std::vector<double> x(q + 1);
  x[0] = theta;
  x[q] = theta + numerics::kTwoPi;
  if (q == 2) {
    for (int i = 1; i < density; ++i) {
      x[1] = theta + i * h;
      const double v = value(x);
      if (v > best) { best = v; best_x = x; }
    }
  } else {
    for (int i = 1; i < density; ++i) {
      for (int j = i + 1; j < density; ++j) {
        x[1] = theta + i * h;
        x[2] = theta + j * h;
        const double v = value(x);
        if (v > best) { best = v; best_x = x; }
      }
    }
  }
  return detail::compass_polish(value, best_x, h);
}

inline bool el_orbit_check(const DeformedBoundary& b, const ActionSample& s,
                           double tol = 1e-8) {
  const auto r = el_residual(b, s.config);
  for (int i = 1; i < s.q; ++i) {
    if (!(std::abs(r[i]) <= tol)) return false;
  }
  return true;
}

}  // namespace caustics
