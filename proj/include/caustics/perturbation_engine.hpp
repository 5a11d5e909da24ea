#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "caustics/error.hpp"
#include "caustics/fourier_profile.hpp"
#include "caustics/numerics.hpp"

namespace caustics {

using cplx = std::complex<double>;

inline bool in_z23(int k) { return k % 2 != 0 && k % 3 != 0; }

// +1 for k = 1 mod 3, -1 for k = 2 mod 3, 0 otherwise.
inline int residue_sign3(int k) {
  const int r = ((k % 3) + 3) % 3;
  return r == 1 ? 1 : (r == 2 ? -1 : 0);
}

/// Profile values n, n' at the q equispaced angles theta + 2 pi j / q,
/// with index q repeating index 0.
struct VertexValues {
  int q = 0;
  double theta = 0.0;
  std::vector<double> n, dn;
};

inline VertexValues vertex_values(const FourierProfile& n, int q, double theta) {
  const TrigSeries s(n);
  VertexValues v;
  v.q = q;
  v.theta = theta;
  v.n.resize(q + 1);
  v.dn.resize(q + 1);
  for (int j = 0; j < q; ++j) {
    const auto jet = s.jet(theta + numerics::kTwoPi * j / q);
    v.n[j] = jet.f;
    v.dn[j] = jet.df;
  }
  v.n[q] = v.n[0];
  v.dn[q] = v.dn[0];
  return v;
}

enum class FirstVariationSystem { kPrinted, kStationary, kPrintedQ2 };

struct FirstVariation {
  int q = 0;
  double theta = 0.0;
  FirstVariationSystem system = FirstVariationSystem::kPrinted;
  std::vector<double> theta1;  // interior vertices 1..q-1
  std::vector<double> eta_perp, eta_par, xi_perp, xi_par;  // vertices 0..q-1
  double residual = 0.0;
};

namespace detail {

// Right-hand side 4n'(t_k) - (n(t_{k+1}) - n(t_{k-1})) / tan(pi/q), k = 1..q-1.
inline std::vector<double> first_variation_rhs(const VertexValues& v) {
  const int q = v.q;
  const double cot = std::cos(numerics::kPi / q) / std::sin(numerics::kPi / q);
  std::vector<double> rhs(q - 1);
  for (int k = 1; k < q; ++k) {
    rhs[k - 1] = 4.0 * v.dn[k] - (v.n[k + 1] - v.n[k - 1]) * cot;
  }
  return rhs;
}

// Solves a x_k - x_{k+1} - b x_{k-1} = rhs_k with pinned zero ends.
inline std::vector<double> solve_pinned(int q, double a, double b,
                                        const std::vector<double>& rhs,
                                        double* residual) {
  const int n = q - 1;
  std::vector<double> sub(n, -b), diag(n, a), sup(n, -1.0);
  auto x = numerics::solve_tridiagonal(sub, diag, sup, rhs);
  double res = 0.0;
  for (int k = 0; k < n; ++k) {
    const double prev = k > 0 ? x[k - 1] : 0.0;
    const double next = k + 1 < n ? x[k + 1] : 0.0;
    res = std::max(res, std::abs(a * x[k] - next - b * prev - rhs[k]));
  }
  if (residual) *residual = res;
  return x;
}

inline FirstVariation assemble_variation(const VertexValues& v,
                                         std::vector<double> interior,
                                         FirstVariationSystem sys,
                                         double residual) {
  FirstVariation fv;
  fv.q = v.q;
  fv.theta = v.theta;
  fv.system = sys;
  fv.residual = residual;
  fv.theta1 = std::move(interior);
  for (int k = 0; k < v.q; ++k) {
    const double t = k == 0 ? 0.0 : fv.theta1[k - 1];
    fv.eta_perp.push_back(v.n[k]);
    fv.eta_par.push_back(t);
    fv.xi_perp.push_back(-0.5 * t * t + v.dn[k] * t);
    fv.xi_par.push_back(v.n[k] * t);
  }
  return fv;
}

}  // namespace detail

// First variation from the printed tridiagonal system
// 4x_k - x_{k+1} - 3x_{k-1} = rhs_k.
inline FirstVariation theta1_solve(const FourierProfile& n, int q, double theta) {
  if (q < 3) throw DomainError("theta1_solve: q must be >= 3");
  const auto v = vertex_values(n, q, theta);
  double res = 0.0;
  auto x = detail::solve_pinned(q, 4.0, 3.0, detail::first_variation_rhs(v), &res);
  return detail::assemble_variation(v, std::move(x), FirstVariationSystem::kPrinted, res);
}

// Stationary point of the second-order functional:
// 2x_k - x_{k+1} - x_{k-1} = rhs_k. Valid for q >= 2.
inline FirstVariation theta1_stationary(const FourierProfile& n, int q, double theta) {
  if (q < 2) throw DomainError("theta1_stationary: q must be >= 2");
  const auto v = vertex_values(n, q, theta);
  double res = 0.0;
  auto x = detail::solve_pinned(q, 2.0, 1.0, detail::first_variation_rhs(v), &res);
  return detail::assemble_variation(v, std::move(x), FirstVariationSystem::kStationary, res);
}

// Closed-form solution of the printed system for q = 3.
inline std::array<double, 2> theta1_q3_closed_form(const FourierProfile& n, double theta) {
  const auto v = vertex_values(n, 3, theta);
  const double s3 = std::sqrt(3.0);
  const double t1 = 4.0 / 13.0 * (v.dn[2] + 4.0 * v.dn[1]) +
                    (3.0 * v.n[0] + v.n[1] - 4.0 * v.n[2]) / (13.0 * s3);
  const double t2 = 4.0 / 13.0 * (3.0 * v.dn[1] + 4.0 * v.dn[2]) +
                    (-v.n[0] - 3.0 * v.n[2] + 4.0 * v.n[1]) / (13.0 * s3);
  return {t1, t2};
}

// Printed q = 2 first variation: n'(theta + pi) - n'(theta).
inline double theta1_q2(const FourierProfile& n, double theta) {
  const auto v = vertex_values(n, 2, theta);
  return v.dn[1] - v.dn[0];
}

inline double first_order_term(const FourierProfile& n, int q, double theta) {
  if (q < 2) throw DomainError("first_order_term: q must be >= 2");
  return 2.0 * q * std::sin(numerics::kPi / q) * evaluate(q_average(n, q), theta);
}

// epsilon^2 contribution of m: 2q sin(pi/q) m^(q)(theta).
inline double m_term(const FourierProfile& m, int q, double theta) {
  return first_order_term(m, q, theta);
}

// Second-order coefficient (m = 0) as a function of the interior
// first-variation angles.
inline double second_order_functional(const VertexValues& v,
                                      const std::vector<double>& interior) {
  const int q = v.q;
  if (static_cast<int>(interior.size()) != q - 1) {
    throw std::invalid_argument("second_order_functional: need q-1 angles");
  }
  const double s = std::sin(numerics::kPi / q);
  const double c = std::cos(numerics::kTwoPi / q);
  const double s2 = std::sin(numerics::kTwoPi / q);
  auto t = [&](int k) { return (k == 0 || k == q) ? 0.0 : interior[k - 1]; };
  double sum = 0.0;
  for (int k = 0; k < q; ++k) {
    const double nk = v.n[k], nk1 = v.n[k + 1];
    const double tk = t(k), tk1 = t(k + 1);
    const double xi = -0.5 * tk * tk + v.dn[k] * tk;
    const double bracket = (1.0 - c) * (nk + nk1) + s2 * (tk1 - tk);
    const double a = bracket * bracket / (16.0 * s * s * s);
    const double b = (nk * nk + tk * tk + nk1 * nk1 + tk1 * tk1) / (4.0 * s);
    const double d =
        (-2.0 * (nk * nk1 + tk * tk1) * c + 2.0 * s2 * (nk * tk1 - nk1 * tk)) / (4.0 * s);
    sum += 2.0 * s * xi - a + b + d;
  }
  return sum;
}

inline double dq_from_vertex_values(const VertexValues& v) {
  const int q = v.q;
  double res = 0.0;
  auto x = detail::solve_pinned(q, 2.0, 1.0, detail::first_variation_rhs(v), &res);
  return second_order_functional(v, x);
}

// D_q(theta): epsilon^2 coefficient of the pinned maximal perimeter, m = 0.
inline double dq_evaluate(const FourierProfile& n, int q, double theta) {
  if (q < 2) throw DomainError("dq_evaluate: q must be >= 2");
  return dq_from_vertex_values(vertex_values(n, q, theta));
}

// Same functional evaluated at the printed first variation.
inline double dq_evaluate_printed(const FourierProfile& n, int q, double theta) {
  if (q < 2) throw DomainError("dq_evaluate_printed: q must be >= 2");
  const auto v = vertex_values(n, q, theta);
  if (q == 2) return second_order_functional(v, {theta1_q2(n, theta)});
  return second_order_functional(v, theta1_solve(n, q, theta).theta1);
}

// Printed q = 2 closed form (3b^2 - a^2)/2 - ab with a = n'(theta),
// b = n'(theta + pi). On T_2 it must equal 2n'(theta)^2.
inline double d2_closed_form(const FourierProfile& n, double theta) {
  const auto v = vertex_values(n, 2, theta);
  const double a = v.dn[0], b = v.dn[1];
  const double value = 0.5 * (3.0 * b * b - a * a) - a * b;
  if (tq_member(n, 2)) {
    const double reduced = 2.0 * a * a;
    if (std::abs(value - reduced) > 1e-12 * std::max(1.0, std::abs(reduced))) {
      throw ConsistencyError("d2_closed_form: T_2 reduction failed");
    }
  }
  return value;
}

// Holds for every profile: D_2 = 2 n'(theta + pi)^2.
inline double d2_stationary_closed_form(const FourierProfile& n, double theta) {
  const double b = vertex_values(n, 2, theta).dn[1];
  return 2.0 * b * b;
}

/// Symmetric 2q x 2q matrix M with D_q = x^T M x, x = (N_0..N_{q-1},
/// N'_0..N'_{q-1}), obtained by polarisation.
class VertexQuadraticForm {
 public:
  explicit VertexQuadraticForm(int q) : q_(q), m_(2 * q, 2 * q) {
    if (q < 2) throw DomainError("VertexQuadraticForm: q must be >= 2");
    const int dim = 2 * q;
    auto eval = [&](const Eigen::VectorXd& x) {
      VertexValues v;
      v.q = q;
      v.n.assign(q + 1, 0.0);
      v.dn.assign(q + 1, 0.0);
      for (int j = 0; j < q; ++j) {
        v.n[j] = x[j];
        v.dn[j] = x[q + j];
      }
      v.n[q] = v.n[0];
      v.dn[q] = v.dn[0];
      return dq_from_vertex_values(v);
    };
    std::vector<double> diag(dim);
    for (int i = 0; i < dim; ++i) {
      diag[i] = eval(Eigen::VectorXd::Unit(dim, i));
      m_(i, i) = diag[i];
    }
    for (int i = 0; i < dim; ++i) {
      for (int j = i + 1; j < dim; ++j) {
        const double both =
            eval(Eigen::VectorXd::Unit(dim, i) + Eigen::VectorXd::Unit(dim, j));
        m_(i, j) = m_(j, i) = 0.5 * (both - diag[i] - diag[j]);
      }
    }
  }

  int q() const { return q_; }
  const Eigen::MatrixXd& matrix() const { return m_; }

  // Ordered-pair kernel: coefficient of n_k n_l e^{i(k+l)theta}.
  cplx kernel(int k, int l) const {
    const auto uk = harmonic_vector(k), ul = harmonic_vector(l);
    return uk.transpose() * m_.cast<cplx>() * ul;
  }

 private:
  Eigen::VectorXcd harmonic_vector(int k) const {
    Eigen::VectorXcd u(2 * q_);
    for (int j = 0; j < q_; ++j) {
      const long long e = ((static_cast<long long>(k) * j) % q_ + q_) % q_;
      const cplx w = std::polar(1.0, numerics::kTwoPi * e / q_);
      u[j] = w;
      u[q_ + j] = cplx(0.0, k) * w;
    }
    return u;
  }

  int q_;
  Eigen::MatrixXd m_;
};

// Closed-form ordered kernels. q = 2 holds for all k, l; q = 3 is stated on
// Z_{2,3} x Z_{2,3}.
inline double d2_kernel_closed_form(int k, int l) {
  const double sign = ((k + l) % 2 == 0) ? 1.0 : -1.0;
  return -2.0 * k * l * sign;
}

inline double d3_kernel_closed_form(int k, int l) {
  if (!in_z23(k) || !in_z23(l)) {
    throw DomainError("d3_kernel_closed_form: indices must lie in Z_{2,3}");
  }
  const int sk = residue_sign3(k), sl = residue_sign3(l);
  if (sk == sl) return 0.0;
  return 0.5 * std::sqrt(3.0) * (1.0 - sk * k - sl * l - 4.0 * k * l);
}

// Per-pair weight of n_k n_l (k != l, unordered) in 4 D_2 - 3 sqrt3 D_3.
inline double diamond_pair_weight(int k, int l) {
  return 4.0 * 2.0 * d2_kernel_closed_form(k, l) -
         3.0 * std::sqrt(3.0) * 2.0 * d3_kernel_closed_form(k, l);
}

enum class DqSource { kDirectEval, kConvolution, kClosedForm };

inline std::string to_string(DqSource s) {
  switch (s) {
    case DqSource::kDirectEval: return "direct-eval";
    case DqSource::kConvolution: return "convolution";
    case DqSource::kClosedForm: return "closed-form";
  }
  return "unknown";
}

struct DqSeries {
  int q = 0;
  std::map<int, cplx> coeffs;
  DqSource source = DqSource::kConvolution;

  cplx coeff(int h) const {
    auto it = coeffs.find(h);
    return it == coeffs.end() ? cplx{} : it->second;
  }

  double evaluate(double theta) const {
    cplx sum{};
    for (const auto& [h, c] : coeffs) sum += c * std::polar(1.0, h * theta);
    return sum.real();
  }
};

struct DqFourierOptions {
  DqSource source = DqSource::kConvolution;
  bool require_t23 = true;
};

inline DqSeries dq_fourier(const FourierProfile& n, int q, int cutoff,
                           const DqFourierOptions& opt = {}) {
  if (q < 2) throw DomainError("dq_fourier: q must be >= 2");
  if (n.max_index() > cutoff) {
    throw PreconditionError("dq_fourier: profile index exceeds cutoff");
  }
  if (opt.require_t23 && !(tq_member(n, 2) && tq_member(n, 3))) {
    throw PreconditionError("dq_fourier: profile must lie in T_2 and T_3");
  }
  DqSeries out;
  out.q = q;
  out.source = opt.source;
  if (opt.source == DqSource::kDirectEval) {
    const int N = std::max(16, 4 * cutoff + 4);
    std::vector<double> samples(N);
    for (int j = 0; j < N; ++j) samples[j] = dq_evaluate(n, q, numerics::kTwoPi * j / N);
    for (int h = -2 * cutoff; h <= 2 * cutoff; ++h) {
      cplx acc{};
      for (int j = 0; j < N; ++j) {
        const long long e = ((static_cast<long long>(-h) * j) % N + N) % N;
        acc += samples[j] * std::polar(1.0, numerics::kTwoPi * e / N);
      }
      out.coeffs[h] = acc / static_cast<double>(N);
    }
    return out;
  }
  std::optional<VertexQuadraticForm> form;
  if (opt.source == DqSource::kConvolution) {
    form.emplace(q);
  } else if (q == 3 && !(tq_member(n, 2) && tq_member(n, 3))) {
    throw PreconditionError("dq_fourier: q=3 closed form needs a T_2 and T_3 profile");
  } else if (q != 2 && q != 3) {
    throw DomainError("dq_fourier: closed form only for q = 2, 3");
  }
  for (const auto& [k, nk] : n.coeffs()) {
    for (const auto& [l, nl] : n.coeffs()) {
      cplx c;
      if (form) {
        c = form->kernel(k, l);
      } else {
        c = q == 2 ? d2_kernel_closed_form(k, l) : d3_kernel_closed_form(k, l);
      }
      out.coeffs[k + l] += nk * nl * c;
    }
  }
  return out;
}

// ---- printed coefficient tables ----

// Printed c^(2) table on Z_{2,3}: 0 on equal residues mod 6, 2kl otherwise.
inline double c2_coefficient(int k, int l) {
  if (!in_z23(k) || !in_z23(l)) {
    throw DomainError("c2_coefficient: indices must lie in Z_{2,3}");
  }
  if (residue_sign3(k) == residue_sign3(l)) return 0.0;
  return 2.0 * k * l;
}

namespace detail {

inline cplx omega_pow(long long e) {
  const int r = static_cast<int>(((e % 3) + 3) % 3);
  static const cplx kRoots[3] = {
      {1.0, 0.0}, {-0.5, 0.8660254037844386}, {-0.5, -0.8660254037844386}};
  return kRoots[r];
}

using Mat3 = Eigen::Matrix<cplx, 3, 3>;

inline const Mat3& printed_a3() {
  static const Mat3 a = [] {
    Mat3 m;
    m << 4, -2, -2, -2, 4, -2, -2, -2, 4;
    return m;
  }();
  return a;
}

inline const Mat3& printed_b3() {
  static const Mat3 b = [] {
    const double r = std::sqrt(3.0);
    Mat3 m;
    m << 0, 3 * r, -3 * r, 0, 3 * r, 6 * r, 0, -6 * r, -3 * r;
    return m;
  }();
  return b;
}

inline const Mat3& printed_c3() {
  static const Mat3 c = [] {
    Mat3 m;
    m << 0, 0, 0, 0, 36, 30, 0, 6, 36;
    return m;
  }();
  return c;
}

inline Eigen::Matrix<cplx, 3, 1> v3(int k) {
  Eigen::Matrix<cplx, 3, 1> v;
  v << 1.0, omega_pow(k), omega_pow(2LL * k);
  return v;
}

}  // namespace detail

// V(k)^T [A + l B + kl C] V(l) / (13 sqrt3) with the printed matrices.
inline cplx c3_matrix_form(int k, int l) {
  const auto vk = detail::v3(k), vl = detail::v3(l);
  const double kl = static_cast<double>(k) * l;
  const detail::Mat3 xi = detail::printed_a3() + static_cast<double>(l) * detail::printed_b3() +
                          kl * detail::printed_c3();
  return (vk.transpose() * xi * vl)(0, 0) / (13.0 * std::sqrt(3.0));
}

// Exponential-sum transcription, with the two typos corrected so that it
// expands the matrix form term by term.
inline cplx c3_exp_sum(int k, int l) {
  using detail::omega_pow;
  const double r = std::sqrt(3.0);
  const double kl = static_cast<double>(k) * l;
  const long long K = k, L = l;
  cplx s = 4.0 - 2.0 * omega_pow(K) - 2.0 * omega_pow(2 * K);
  s += (3.0 * r * l - 2.0) * omega_pow(L);
  s += (4.0 + r * 3.0 * l + 36.0 * kl) * omega_pow(K + L);
  s += (6.0 * kl - 2.0 - 6.0 * r * l) * omega_pow(2 * K + L);
  s -= (2.0 + 3.0 * r * l) * omega_pow(2 * L);
  s += (-2.0 + 6.0 * r * l + 30.0 * kl) * omega_pow(K + 2 * L);
  s += (4.0 - 3.0 * r * l + 36.0 * kl) * omega_pow(2 * K + 2 * L);
  return s / (13.0 * r);
}

// Literal transcription (with the imaginary unit restored in the exponents).
inline cplx c3_exp_sum_literal(int k, int l) {
  using detail::omega_pow;
  const double r = std::sqrt(3.0);
  const double kl = static_cast<double>(k) * l;
  const long long K = k, L = l;
  cplx s = 4.0 - 2.0 * omega_pow(K) - 2.0 * omega_pow(2 * K);
  s += (3.0 * r - 2.0) * omega_pow(L);
  s += (4.0 + r * 3.0 * l + 36.0 * kl) * omega_pow(2 * K + 2 * L);
  s += (6.0 * kl - 2.0 - 6.0 * r * l) * omega_pow(2 * K + L);
  s -= (2.0 + 3.0 * r * l) * omega_pow(2 * L);
  s += (-2.0 + 6.0 * r * l + 30.0 * kl) * omega_pow(K + 2 * L);
  s += (4.0 - 3.0 * r * l + 36.0 * kl) * omega_pow(2 * K + 2 * L);
  return s / (13.0 * r);
}

struct C3Evaluation {
  cplx matrix_form;
  cplx exp_sum;
  std::optional<cplx> corollary_printed;  // opposite residues only
  std::optional<cplx> appendix_printed;
  bool corollary_matches = false;
  bool appendix_matches = false;
};

inline C3Evaluation c3_coefficient(int k, int l) {
  C3Evaluation e;
  e.matrix_form = c3_matrix_form(k, l);
  e.exp_sum = c3_exp_sum(k, l);
  const double scale = std::max(1.0, std::abs(e.matrix_form));
  if (std::abs(e.matrix_form - e.exp_sum) > 1e-10 * scale) {
    throw ConsistencyError("c3_coefficient: matrix and exponential-sum paths disagree at (" +
                           std::to_string(k) + "," + std::to_string(l) + ")");
  }
  if (in_z23(k) && in_z23(l) && residue_sign3(k) != residue_sign3(l)) {
    const double r = std::sqrt(3.0);
    const double kl = static_cast<double>(k) * l;
    const double sgn = residue_sign3(k) == 1 ? 1.0 : -1.0;
    e.corollary_printed =
        cplx(36.0 + 108.0 * kl, sgn * (27.0 * (l + k) + 24.0 * r * kl)) / (13.0 * r);
    const cplx rot = sgn > 0 ? detail::omega_pow(2) : detail::omega_pow(1);
    e.appendix_printed =
        (18.0 - sgn * 27.0 * l * cplx(0.0, 1.0) + kl * (66.0 + 24.0 * rot)) / (13.0 * r);
    e.corollary_matches = std::abs(*e.corollary_printed - e.matrix_form) <= 1e-10 * scale;
    e.appendix_matches = std::abs(*e.appendix_printed - e.matrix_form) <= 1e-10 * scale;
  }
  return e;
}

/// The three modular sums of a 3x3 matrix picked out by V(k)^T Xi V(l);
/// value = s0 + s1 w + s2 w^2 with w = exp(2 pi i / 3).
struct ModularSums {
  cplx s0, s1, s2;
};

inline ModularSums modular_sums(const detail::Mat3& xi, int k, int l) {
  ModularSums m;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const long long e = static_cast<long long>(k) * i + static_cast<long long>(l) * j;
      const int r = static_cast<int>(((e % 3) + 3) % 3);
      (r == 0 ? m.s0 : (r == 1 ? m.s1 : m.s2)) += xi(i, j);
    }
  }
  return m;
}

inline detail::Mat3 printed_xi3(int k, int l) {
  return detail::printed_a3() + static_cast<double>(l) * detail::printed_b3() +
         static_cast<double>(k) * l * detail::printed_c3();
}

// Series built from a printed table: sum over k >= l of 2 n_k n_l c(k,l),
// with diagonal pairs counted once.
template <class Table>
std::map<int, cplx> printed_table_series(const FourierProfile& n, Table table) {
  std::map<int, cplx> out;
  for (const auto& [k, nk] : n.coeffs()) {
    for (const auto& [l, nl] : n.coeffs()) {
      if (k < l) continue;
      const double w = k == l ? 1.0 : 2.0;
      out[k + l] += w * nk * nl * cplx(table(k, l));
    }
  }
  return out;
}

struct TableCalibration {
  int q = 0;
  cplx scale;            // least-squares factor printed -> true
  double sign = 0.0;     // +-1 when the factor is a sign, 0 otherwise
  double residual = 0.0; // max misfit on harmonics divisible by 6
  bool calibrated = false;
};

inline FourierProfile calibration_probe() {
  return FourierProfile::cosine(5) - FourierProfile::cosine(7);
}

// Fits the printed table to the exact series of the probe on harmonics
// divisible by 6 (the ones entering the diamond equalities).
inline TableCalibration calibrate_printed_table(int q) {
  if (q != 2 && q != 3) throw DomainError("calibrate_printed_table: q must be 2 or 3");
  const auto probe = calibration_probe();
  const auto truth = dq_fourier(probe, q, probe.max_index());
  const auto printed =
      q == 2 ? printed_table_series(probe, [](int k, int l) { return cplx(c2_coefficient(k, l)); })
             : printed_table_series(probe, [](int k, int l) { return c3_matrix_form(k, l); });
  cplx num{};
  double den = 0.0;
  std::vector<int> hs;
  for (const auto& [h, c] : truth.coeffs) {
    if (h % 6 == 0) hs.push_back(h);
  }
  for (int h : hs) {
    const auto it = printed.find(h);
    const cplx p = it == printed.end() ? cplx{} : it->second;
    num += std::conj(p) * truth.coeff(h);
    den += std::norm(p);
  }
  TableCalibration cal;
  cal.q = q;
  cal.scale = den > 0.0 ? num / den : cplx{};
  double scale = 1.0;
  for (int h : hs) {
    const auto it = printed.find(h);
    const cplx p = it == printed.end() ? cplx{} : it->second;
    cal.residual = std::max(cal.residual, std::abs(cal.scale * p - truth.coeff(h)));
    scale = std::max(scale, std::abs(truth.coeff(h)));
  }
  const bool is_sign = std::abs(std::abs(cal.scale.real()) - 1.0) <= 1e-12 &&
                       std::abs(cal.scale.imag()) <= 1e-12;
  cal.sign = is_sign ? (cal.scale.real() > 0 ? 1.0 : -1.0) : 0.0;
  cal.calibrated = is_sign && cal.residual <= 1e-9 * scale;
  return cal;
}

}  // namespace caustics
