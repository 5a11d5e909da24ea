#pragma once

#include <cstdio>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "caustics/boundary_geometry.hpp"
#include "caustics/error.hpp"
#include "caustics/fourier_profile.hpp"
#include "caustics/obstruction_analyzer.hpp"
#include "caustics/oracle.hpp"
#include "caustics/perturbation_engine.hpp"
#include "caustics/variational_orbits.hpp"

namespace caustics::io {

using nlohmann::json;

// ---- profiles ----

inline FourierProfile profile_from_json(const json& j) {
  try {
    if (!j.is_object()) throw ParseError("profile must be a JSON object");
    const std::string kind = j.at("kind").get<std::string>();
    const bool even = j.value("even", false);
    const bool truncated = j.value("truncated", false);
    std::optional<int> cutoff;
    if (j.contains("cutoff")) cutoff = j.at("cutoff").get<int>();
    const auto& terms = j.at("terms");
    if (!terms.is_array()) throw ParseError("terms must be an array");
    if (kind == "exp") {
      FourierProfile::CoeffMap c;
      for (const auto& t : terms) {
        c[t.at("k").get<int>()] += cplx(t.value("re", 0.0), t.value("im", 0.0));
      }
      return FourierProfile::from_exponential(c, even, cutoff, truncated);
    }
    if (kind == "trig") {
      std::vector<TrigTerm> tt;
      for (const auto& t : terms) {
        tt.push_back({t.at("k").get<int>(), t.value("cos", 0.0), t.value("sin", 0.0)});
      }
      return FourierProfile::from_trig(tt, even, cutoff, truncated);
    }
    throw ParseError("unknown profile kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed profile: ") + e.what());
  }
}

inline json profile_to_json(const FourierProfile& p) {
  json terms = json::array();
  for (const auto& [k, c] : p.coeffs()) {
    terms.push_back({{"k", k}, {"re", c.real()}, {"im", c.imag()}});
  }
  json j{{"kind", "exp"}, {"terms", terms}, {"even", p.even()}, {"cutoff", p.cutoff()}};
  if (p.truncated()) j["truncated"] = true;
  return j;
}

struct BoundarySpec {
  double epsilon = 0.0;
  FourierProfile n;
  FourierProfile m;
};

// Accepts {epsilon, n, m} or a bare profile (taken as n, with m = 0).
inline BoundarySpec boundary_from_json(const json& j) {
  try {
    BoundarySpec b;
    if (j.is_object() && j.contains("kind")) {
      b.n = profile_from_json(j);
      return b;
    }
    b.epsilon = j.value("epsilon", 0.0);
    if (j.contains("n")) b.n = profile_from_json(j.at("n"));
    if (j.contains("m")) b.m = profile_from_json(j.at("m"));
    return b;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed boundary: ") + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("invalid JSON in '" + path + "': " + e.what());
  }
}

// ---- reports ----

inline json to_json(const ConstraintReport& r) {
  return {{"tol", r.tol},
          {"sup_norm", r.sup_norm},
          {"rescale_ok", r.rescale_ok},
          {"value_at_zero", r.value_at_zero},
          {"derivative_at_zero", r.derivative_at_zero},
          {"rigid_ok", r.rigid_ok},
          {"mean", r.mean},
          {"flux_ok", r.flux_ok}};
}

inline json to_json(const DqSeries& s) {
  json coeffs = json::array();
  for (const auto& [h, c] : s.coeffs) coeffs.push_back({h, c.real(), c.imag()});
  return {{"q", s.q}, {"coeffs", coeffs}, {"source", to_string(s.source)}};
}

inline json to_json(const ModularEstimate& e) {
  return {{"indices", e.indices}, {"magnitudes", e.magnitudes}, {"w", e.w},
          {"ratio_2exp", e.ratio_2exp}, {"truncated", e.truncated}};
}

inline json to_json(const ActionSample& s) {
  return {{"theta", s.theta},
          {"q", s.q},
          {"p", s.p},
          {"value", s.value},
          {"angles", s.config.angles},
          {"el_residual", s.el_residual},
          {"multistart_spread", s.multistart_spread},
          {"starts_converged", s.starts_converged}};
}

inline json to_json(const Estimate& e) { return {{"value", e.value}, {"error", e.error}}; }

inline json to_json(const ExpansionEstimate& e) {
  return {{"order0", to_json(e.order0)}, {"order1", to_json(e.order1)},
          {"order2", to_json(e.order2)}, {"eps_grid", e.eps_grid},
          {"richardson_order", e.richardson_order}, {"cubic_fit", e.cubic_fit},
          {"fit_residual", e.fit_residual}};
}

inline json to_json(const ObstructionReport& r) {
  json j{{"cutoff", r.cutoff},
         {"tol", r.tol},
         {"noise", r.noise},
         {"normalization", r.normalization},
         {"even", r.even},
         {"in_t2", r.in_t2},
         {"in_t3", r.in_t3},
         {"verdict", to_string(r.verdict)},
         {"max_diamond_residual", r.max_diamond_residual},
         {"worst_harmonic", r.worst_harmonic},
         {"notes", r.notes}};
  if (r.constraints) j["constraints"] = to_json(*r.constraints);
  if (r.d2) j["d2"] = to_json(*r.d2);
  if (r.d3) j["d3"] = to_json(*r.d3);
  if (r.projection) {
    j["residuals_spade"] = r.projection->spade;
    j["residuals_club"] = r.projection->club;
    j["residuals_heart"] = r.projection->heart;
  }
  if (r.diamond) {
    json d = json::array();
    for (const auto& [l, e] : r.diamond->entries) {
      d.push_back({{"l", l}, {"harmonic", e.harmonic}, {"d2", e.d2.real()},
                   {"d3", e.d3.real()}, {"residual", e.residual}});
    }
    j["residuals_diamond"] = d;
    j["averaged_form_residual"] = r.diamond->averaged_form_residual;
    j["averaged_form_mean_gap"] = r.diamond->averaged_form_mean_gap;
  }
  if (r.chain) {
    json levels = json::array();
    for (const auto& lv : r.chain->levels) {
      levels.push_back({{"K", lv.K}, {"delta", lv.delta},
                        {"pair", {lv.argmax.first, lv.argmax.second}},
                        {"bound", lv.bound}, {"base", lv.base}, {"holds", lv.holds}});
    }
    j["delta_chain"] = {{"L", r.chain->L}, {"P", r.chain->P}, {"heuristic", true},
                        {"levels", levels}};
  }
  if (r.claims) {
    j["claims"] = {{"opposite_pairs", r.claims->opposite_pairs},
                   {"unique_opposite_pair", r.claims->unique_opposite_pair},
                   {"rigid_sum", r.claims->rigid_sum},
                   {"heuristic", true}};
  }
  if (r.remainder_bound) j["remainder_bound"] = *r.remainder_bound;
  return j;
}

// ---- CSV ----

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << csv_escape(fields[i]);
    }
    out_ << "\r\n";
  }

 private:
  std::ostream& out_;
};

}  // namespace caustics::io
