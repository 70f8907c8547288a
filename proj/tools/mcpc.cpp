#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_run_options(CLI::App& sub, mcpc::cli::RunOptions& options, bool with_channels) {
  sub.add_option("--config", options.config, "Experiment file (key = value) or a run manifest (.json)");
  if (with_channels) {
    sub.add_option("--channels", options.channels, "Channel gains CSV, one row per user")->required();
    sub.add_option("--powers", options.powers, "Current powers CSV (default: all zero)");
  }
  sub.add_option("--seed", options.seed, "Override the experiment seed");
  sub.add_option("--trials", options.trials, "Override the number of trials");
  sub.add_option("--threads", options.threads, "Worker threads (0 = all cores, 1 = serial)");
  sub.add_option("--out", options.out,
                 std::string("Output CSV path; relative paths resolve against $") +
                     mcpc::cli::kOutputDirEnv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-carrier uplink power control game: equilibria, dynamics and Monte Carlo statistics"};
  app.set_version_flag("--version", std::string(mcpc::cli::kVersion));
  app.require_subcommand(1);

  mcpc::cli::RunOptions options;
  for (int i = 0; i < argc; ++i) options.command_line += (i ? " " : "") + std::string(argv[i]);

  int exponent = 100;
  double tol = 1e-10;
  auto* gamma = app.add_subcommand("gamma-star", "Solve for the utility-maximizing SIR");
  gamma->add_option("--exponent", exponent, "Efficiency exponent M in (1 - e^-g)^M")->capture_default_str();
  gamma->add_option("--tol", tol, "Bisection tolerance")->capture_default_str();

  std::size_t user = 1;
  auto* best = app.add_subcommand("best-response", "Best carrier and power for one user");
  add_run_options(*best, options, true);
  best->add_option("--user", user, "1-based user index")->capture_default_str();

  auto* equilibria = app.add_subcommand("equilibria", "Enumerate all Nash equilibria of a channel realization");
  add_run_options(*equilibria, options, true);

  auto* dynamics = app.add_subcommand("dynamics", "Run sequential best-response dynamics");
  add_run_options(*dynamics, options, true);

  auto* pmf = app.add_subcommand("pmf", "Analytic and Monte Carlo pmf of users on carrier 1");
  add_run_options(*pmf, options, false);

  auto* compare = app.add_subcommand("compare", "Joint vs per-carrier utility over a user sweep");
  add_run_options(*compare, options, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mcpc::cli::kUsage;
  }

  auto& out = std::cout;
  auto& err = std::cerr;
  if (*gamma) return mcpc::cli::cmd_gamma_star(exponent, tol, out, err);
  if (*best) return mcpc::cli::cmd_best_response(options, user, out, err);
  if (*equilibria) return mcpc::cli::cmd_equilibria(options, out, err);
  if (*dynamics) return mcpc::cli::cmd_dynamics(options, out, err);
  if (*pmf) return mcpc::cli::cmd_pmf(options, out, err);
  if (*compare) return mcpc::cli::cmd_compare(options, out, err);
  return mcpc::cli::kUsage;
}
