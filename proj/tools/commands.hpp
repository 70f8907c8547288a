#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mcpc/montecarlo.hpp"

namespace mcpc::cli {

inline constexpr std::string_view kVersion = "1.0.0";

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kNoEquilibrium = 1,
  kUsage = 2,
  kParse = 3,
  kSolver = 4,
  kInfeasible = 5,
  kInternal = 6,
};

/// Environment variable naming the directory for relative --out paths.
inline constexpr const char* kOutputDirEnv = "MCPC_OUTPUT_DIR";

struct RunOptions {
  std::optional<std::filesystem::path> config;    // key=value file or a previous run's manifest (.json)
  std::optional<std::filesystem::path> channels;  // CSV, K rows x D columns
  std::optional<std::filesystem::path> powers;    // CSV of current powers, same shape as channels
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<unsigned> threads;
  std::optional<std::filesystem::path> out;
  std::string command_line;                       // recorded in the manifest
};

/// Resolved experiment: config file (or defaults) with command-line overrides applied.
ExperimentSpec resolve_spec(const RunOptions& options);

/// `--out` joined onto $MCPC_OUTPUT_DIR when relative and the variable is set.
std::filesystem::path resolve_output(const std::filesystem::path& out);

/// CSV body (header + rows, no manifest) for a pmf sweep.
std::string pmf_csv(const std::vector<PmfEstimate>& estimates, SweepParameter parameter,
                    const EfficiencyModel& model);

/// CSV body for a utility comparison sweep.
std::string compare_csv(const std::vector<UtilityComparison>& rows);

int cmd_gamma_star(int exponent, double tol, std::ostream& out, std::ostream& err);
int cmd_best_response(const RunOptions& options, std::size_t user, std::ostream& out,
                      std::ostream& err);
int cmd_equilibria(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_dynamics(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_pmf(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_compare(const RunOptions& options, std::ostream& out, std::ostream& err);

}  // namespace mcpc::cli
