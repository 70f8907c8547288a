#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mcpc/equilibrium.hpp"
#include "mcpc/game.hpp"
#include "mcpc/rng.hpp"

namespace mcpc {

/// Which SystemConfig field a sweep point overrides.
enum class SweepParameter { ProcessingGain, Users };

struct ExperimentSpec {
  SystemConfig base;
  std::size_t trials = 20000;
  int max_rounds = 20;
  double tolerance = DynamicsOptions{}.tolerance;
  std::uint64_t seed = 1;
  SweepParameter sweep_parameter = SweepParameter::ProcessingGain;
  std::vector<int> sweep;
  unsigned threads = 0;  // 0: one per hardware thread, 1: serial

  /// Throws DomainError for an unusable spec.
  void validate() const;

  /// `base` with the sweep parameter set to `value`.
  SystemConfig config_at(int value) const;
};

/// Monte Carlo estimate of the X1 pmf at one sweep point.
struct PmfEstimate {
  int sweep_value = 0;
  SystemConfig config;
  std::size_t trials = 0;
  std::vector<std::size_t> counts;  // counts[m]: converged trials with m users on carrier 1
  std::size_t no_equilibrium = 0;
  bool crowded_feasible = true;     // N > (K-1) gamma*
  std::size_t spot_checked = 0;     // converged trials re-verified against the closed-form conditions
  std::size_t spot_check_failures = 0;

  double frequency(std::size_t m) const;
  double standard_error(std::size_t m) const;
  double no_equilibrium_frequency() const;
  double no_equilibrium_standard_error() const;
};

struct UtilityComparison {
  int sweep_value = 0;
  SystemConfig config;
  std::size_t trials = 0;
  std::size_t converged = 0;         // trials averaged
  bool baseline_feasible = true;
  double mean_joint = 0.0;           // bits/Joule, summed over users
  double mean_independent = 0.0;

  double ratio() const { return mean_joint / mean_independent; }
  double convergence_rate() const {
    return trials == 0 ? 0.0 : static_cast<double>(converged) / static_cast<double>(trials);
  }
};

/// K x D i.i.d. Exp(1) gains drawn row-major from `rng`.
ChannelMatrix sample_channels(SplitMix64& rng, std::size_t users, std::size_t carriers);

/// For each sweep point: sample channels per trial, run best-response dynamics
/// from all-zero powers and tally where users settle. Trial t always uses
/// substream (seed, t), so the output is independent of the thread count.
std::vector<PmfEstimate> run_pmf_experiment(const ExperimentSpec& spec);

/// Every user on every carrier at the power giving gamma* when all K users
/// share each carrier. Throws InfeasibleError unless N > (K-1) gamma*.
PowerAllocation independent_baseline_powers(const ChannelMatrix& channels,
                                            const SystemConfig& config,
                                            const EfficiencyModel& model);

/// Mean total utility of the converged game outcome against the per-carrier
/// baseline, over trials where the dynamics converged.
std::vector<UtilityComparison> compare_total_utility(const ExperimentSpec& spec);

}  // namespace mcpc
