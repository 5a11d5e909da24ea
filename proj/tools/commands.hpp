#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "caustics/caustics.hpp"

namespace caustics::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kNumericalError = 3 };

struct RunConfig {
  std::string command;
  std::string input;
  std::string out;
  std::vector<int> q;
  int cutoff = -1;
  double tol = 1e-6;
  int grid = 0;
  std::vector<double> eps;
  std::uint64_t seed = 0;
  double theta = 0.0;
};

using io::json;

namespace detail {

inline std::string num(double v) { return io::format_double(v); }

inline std::vector<int> q_list(const RunConfig& c, std::vector<int> fallback) {
  auto qs = c.q.empty() ? fallback : c.q;
  for (int q : qs) {
    if (q < 2) throw DomainError("q must be >= 2");
  }
  return qs;
}

inline json tq_entry(const FourierProfile& p, int q) {
  const bool member = tq_member(p, q);
  json j{{"member", member}};
  if (!member) j["message"] = "not in T_" + std::to_string(q);
  return j;
}

}  // namespace detail

inline int run_validate(const RunConfig& c, std::ostream& out) {
  const auto spec = io::boundary_from_json(io::read_json_file(c.input));
  const auto& n = spec.n;
  json j;
  j["profile"] = io::profile_to_json(n);
  j["constraints"] = io::to_json(check_constraints(n, c.tol));
  j["t2"] = detail::tq_entry(n, 2);
  j["t3"] = detail::tq_entry(n, 3);
  j["even_symmetry"] = n.has_even_symmetry();
  if (n.max_index() > 0 && !n.is_zero()) {
    const auto est = slowest_decay(n);
    const auto decay = decay_condition(est);
    j["modular_estimate"] = io::to_json(est);
    j["decay_condition"] = {{"verdict", to_string(decay.verdict)}, {"heuristic", true}};
  }
  if (spec.epsilon != 0.0) {
    const DeformedBoundary b(spec.n, spec.m, spec.epsilon);
    const auto& conv = b.convexity_check();
    j["boundary"] = {{"epsilon", spec.epsilon},
                     {"convex", conv.convex},
                     {"min_curvature", conv.min_curvature},
                     {"length", b.total_length()}};
  }
  out << j.dump(2) << "\n";
  return kOk;
}

inline int run_expand(const RunConfig& c, std::ostream& out) {
  const auto n = io::boundary_from_json(io::read_json_file(c.input)).n;
  const auto qs = detail::q_list(c, {2});
  if (qs.size() != 1) throw DomainError("expand takes a single --q");
  const int q = qs.front();
  const int grid = c.grid > 0 ? c.grid : 64;
  const int cutoff = c.cutoff >= 0 ? c.cutoff : n.max_index();
  const auto series = dq_fourier(n, q, cutoff, {DqSource::kConvolution, false});
  io::CsvWriter csv(out);
  csv.row({"theta", "first_order", "d_q", "series_eval", "diff"});
  for (int j = 0; j < grid; ++j) {
    const double t = numerics::kTwoPi * j / grid;
    const double d = dq_evaluate(n, q, t);
    const double s = series.evaluate(t);
    csv.row({detail::num(t), detail::num(first_order_term(n, q, t)), detail::num(d),
             detail::num(s), detail::num(std::abs(d - s))});
  }
  return kOk;
}

inline int run_obstruct(const RunConfig& c, std::ostream& out) {
  const auto n = io::boundary_from_json(io::read_json_file(c.input)).n;
  const int cutoff = c.cutoff >= 0 ? c.cutoff : n.max_index();
  VerdictOptions opt;
  opt.tol = c.tol;
  if (!n.is_zero() && n.truncated()) opt.modular = slowest_decay(n);
  const auto rep = coexistence_verdict(n, cutoff, opt);
  const bool csv_out = c.out.size() > 4 && c.out.substr(c.out.size() - 4) == ".csv";
  if (csv_out) {
    io::CsvWriter csv(out);
    csv.row({"harmonic", "d2", "d3", "residual"});
    if (rep.diamond) {
      for (const auto& [l, e] : rep.diamond->entries) {
        csv.row({std::to_string(e.harmonic), detail::num(e.d2.real()),
                 detail::num(e.d3.real()), detail::num(e.residual)});
      }
    }
  } else {
    out << io::to_json(rep).dump(2) << "\n";
  }
  return kOk;
}

inline int run_oracle(const RunConfig& c, std::ostream& out) {
  const auto spec = io::boundary_from_json(io::read_json_file(c.input));
  const auto qs = detail::q_list(c, {2});
  const int grid = c.grid > 0 ? c.grid : 8;
  const auto eps = c.eps.empty() ? default_eps_grid() : c.eps;
  MaximizeOptions mopt;
  mopt.seed = c.seed;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  io::CsvWriter csv(out);
  csv.row({"q", "theta", "order", "predicted", "oracle", "error_bar", "abs_err", "rel_err",
           "status"});
  for (int q : qs) {
    for (int j = 0; j < grid; ++j) {
      const double t = numerics::kTwoPi * j / grid;
      const double pred[3] = {2.0 * q * std::sin(numerics::kPi / q),
                              first_order_term(spec.n, q, t),
                              dq_evaluate(spec.n, q, t) + m_term(spec.m, q, t)};
      try {
        const auto est = fd_expansion(spec.n, spec.m, q, t, eps, mopt);
        const Estimate got[3] = {est.order0, est.order1, est.order2};
        for (int o = 0; o < 3; ++o) {
          const double abs_err = std::abs(got[o].value - pred[o]);
          const double rel = abs_err / std::max(std::abs(pred[o]), 1e-300);
          csv.row({std::to_string(q), detail::num(t), std::to_string(o), detail::num(pred[o]),
                   detail::num(got[o].value), detail::num(got[o].error), detail::num(abs_err),
                   detail::num(rel), "ok"});
        }
      } catch (const GeometryError& e) {
        for (int o = 0; o < 3; ++o) {
          csv.row({std::to_string(q), detail::num(t), std::to_string(o), detail::num(pred[o]),
                   detail::num(nan), detail::num(nan), detail::num(nan), detail::num(nan),
                   std::string("error: ") + e.what()});
        }
      }
    }
  }
  return kOk;
}

inline int run_orbit(const RunConfig& c, std::ostream& out, std::ostream& log) {
  const auto spec = io::boundary_from_json(io::read_json_file(c.input));
  const auto qs = detail::q_list(c, {3});
  const DeformedBoundary b(spec.n, spec.m, spec.epsilon);
  MaximizeOptions mopt;
  mopt.seed = c.seed;
  io::CsvWriter csv(out);
  csv.row({"q", "vertex", "theta", "s", "v", "el_residual"});
  for (int q : qs) {
    const auto sample = maximize_perimeter(b, q, c.theta, 1, mopt);
    const auto res = el_residual(b, sample.config);
    for (int i = 0; i < q; ++i) {
      const double th = sample.config.angles[i];
      const double nx = sample.config.angles[i + 1];
      const Vec2 d = b.point(nx) - b.point(th);
      const Vec2 t = b.tangent_normal(th).tangent;
      const double v = std::atan2(t.cross(d), t.dot(d));
      double s = std::fmod(b.arc_length(th), b.total_length());
      if (s < 0.0) s += b.total_length();
      csv.row({std::to_string(q), std::to_string(i), detail::num(th), detail::num(s),
               detail::num(v), detail::num(res[i])});
    }
    log << "q=" << q << " perimeter=" << detail::num(sample.value)
        << " el_residual=" << detail::num(sample.el_residual) << "\n";
  }
  return kOk;
}

// Runs one subcommand, mapping failures to exit codes.
inline int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.command == "validate") return run_validate(c, out);
    if (c.command == "expand") return run_expand(c, out);
    if (c.command == "obstruct") return run_obstruct(c, out);
    if (c.command == "oracle") return run_oracle(c, out);
    if (c.command == "orbit") return run_orbit(c, out, err);
    err << "unknown command '" << c.command << "'\n";
    return kInputError;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kInputError;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInputError;
  } catch (const DomainError& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kInputError;
  } catch (const PreconditionError& e) {
    err << "precondition: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  }
}

}  // namespace caustics::cli
