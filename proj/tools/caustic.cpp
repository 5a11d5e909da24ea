#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "commands.hpp"

int main(int argc, char** argv) {
  using caustics::cli::RunConfig;
  CLI::App app{"caustic: perturbative caustic analysis of near-circular billiards"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input,-i", cfg.input, "profile or boundary JSON")->required();
    sub->add_option("--out,-o", cfg.out, "output file (default stdout)");
    sub->add_option("--q", cfg.q, "period(s)")->delimiter(',');
    sub->add_option("--cutoff", cfg.cutoff, "harmonic cutoff");
    sub->add_option("--tol", cfg.tol, "tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--grid", cfg.grid, "theta grid size")->check(CLI::PositiveNumber);
    sub->add_option("--eps", cfg.eps, "eps grid, comma separated")->delimiter(',');
    sub->add_option("--seed", cfg.seed, "seed for jittered starts");
    sub->add_option("--theta", cfg.theta, "pinned angle");
  };
  const std::pair<const char*, const char*> subs[] = {
      {"validate", "check constraints, T_2/T_3 membership and decay (JSON)"},
      {"expand", "second-order coefficient D_q on a theta grid (CSV)"},
      {"obstruct", "diamond residuals and coexistence verdict (JSON, or CSV for *.csv)"},
      {"oracle", "finite-difference oracle vs predicted expansion (CSV)"},
      {"orbit", "maximal periodic orbit vertices (CSV)"},
  };
  for (const auto& [name, help] : subs) add_common(app.add_subcommand(name, help));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return caustics::cli::kInputError;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  // Buffer so a failed run never leaves a partial output file behind.
  std::ostringstream buf;
  const int rc = caustics::cli::dispatch(cfg, buf, std::cerr);
  if (rc != caustics::cli::kOk) return rc;
  if (cfg.out.empty()) {
    std::cout << buf.str();
    return rc;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f || !(f << buf.str())) {
    std::cerr << "cannot write '" << cfg.out << "'\n";
    return caustics::cli::kInputError;
  }
  return rc;
}
