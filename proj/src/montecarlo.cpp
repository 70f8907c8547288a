#include "mcpc/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace mcpc {

namespace {

constexpr std::size_t kSpotCheckStride = 100;

unsigned resolve_threads(unsigned requested, std::size_t work) {
  unsigned threads = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(work, 1)));
}

// Runs body(i) for i in [0, count) over contiguous chunks. Bodies write only to
// their own slot, so results are identical for any thread count.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body body) {
  threads = resolve_threads(threads, count);
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  const std::size_t chunk = (count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([begin, end, &body] {
      for (std::size_t i = begin; i < end; ++i) body(i);
    });
  }
}

double binomial_se(double p, std::size_t n) {
  return n == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace

void ExperimentSpec::validate() const {
  base.validate();
  if (trials < 1) throw DomainError("trials must be at least 1");
  if (max_rounds < 1) throw DomainError("max_rounds must be at least 1");
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  for (int v : sweep) {
    if (v < 1) throw DomainError("sweep values must be positive");
  }
}

SystemConfig ExperimentSpec::config_at(int value) const {
  SystemConfig config = base;
  switch (sweep_parameter) {
    case SweepParameter::ProcessingGain: config.processing_gain = value; break;
    case SweepParameter::Users: config.users = static_cast<std::size_t>(value); break;
  }
  config.validate();
  return config;
}

double PmfEstimate::frequency(std::size_t m) const {
  return trials == 0 ? 0.0 : static_cast<double>(counts.at(m)) / static_cast<double>(trials);
}

double PmfEstimate::standard_error(std::size_t m) const { return binomial_se(frequency(m), trials); }

double PmfEstimate::no_equilibrium_frequency() const {
  return trials == 0 ? 0.0 : static_cast<double>(no_equilibrium) / static_cast<double>(trials);
}

double PmfEstimate::no_equilibrium_standard_error() const {
  return binomial_se(no_equilibrium_frequency(), trials);
}

ChannelMatrix sample_channels(SplitMix64& rng, std::size_t users, std::size_t carriers) {
  if (users < 1 || carriers < 1) throw DomainError("channel matrix needs positive dimensions");
  UserCarrierMatrix gains(users, carriers);
  for (std::size_t k = 0; k < users; ++k) {
    for (double& h : gains.row(k)) h = rng.exponential();
  }
  return ChannelMatrix(std::move(gains));
}

std::vector<PmfEstimate> run_pmf_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const EfficiencyModel model(spec.base.efficiency_exponent);
  const DynamicsOptions options{spec.max_rounds, spec.tolerance};

  std::vector<PmfEstimate> estimates;
  estimates.reserve(spec.sweep.size());
  for (int value : spec.sweep) {
    const SystemConfig config = spec.config_at(value);
    // -1: no equilibrium; otherwise users on carrier 1. -2 flags a failed spot check.
    std::vector<int> outcome(spec.trials, -1);
    std::vector<signed char> spot(spec.trials, 0);

    parallel_for(spec.trials, spec.threads, [&](std::size_t t) {
      auto rng = SplitMix64::substream(spec.seed, t);
      const auto channels = sample_channels(rng, config.users, config.carriers);
      const PowerAllocation cold(config.users, config.carriers);
      const auto result = best_response_dynamics(channels, config, model, cold, options);
      if (!result.converged()) return;
      outcome[t] = result.assignment->occupancy(0);
      if (t % kSpotCheckStride == 0) {
        const bool ok = verify_assignment(*result.assignment, channels, config, model).holds();
        spot[t] = ok ? 1 : -1;
      }
    });

    PmfEstimate est;
    est.sweep_value = value;
    est.config = config;
    est.trials = spec.trials;
    est.counts.assign(config.users + 1, 0);
    est.crowded_feasible = config.crowded_carrier_feasible(model.gamma_star());
    for (std::size_t t = 0; t < spec.trials; ++t) {
      if (outcome[t] < 0) {
        ++est.no_equilibrium;
      } else {
        ++est.counts[static_cast<std::size_t>(outcome[t])];
      }
      if (spot[t] != 0) ++est.spot_checked;
      if (spot[t] < 0) ++est.spot_check_failures;
    }
    estimates.push_back(std::move(est));
  }
  return estimates;
}

PowerAllocation independent_baseline_powers(const ChannelMatrix& channels,
                                            const SystemConfig& config,
                                            const EfficiencyModel& model) {
  if (channels.users() != config.users || channels.carriers() != config.carriers) {
    throw DomainError("channel dimensions do not match the configuration");
  }
  const double gamma_star = model.gamma_star();
  const double loading =
      theta(static_cast<int>(config.users), gamma_star, config.processing_gain);
  PowerAllocation powers(config.users, config.carriers);
  for (std::size_t k = 0; k < config.users; ++k) {
    for (std::size_t l = 0; l < config.carriers; ++l) {
      powers.set(k, l, gamma_star * config.noise_power * loading / channels(k, l));
    }
  }
  return powers;
}

std::vector<UtilityComparison> compare_total_utility(const ExperimentSpec& spec) {
  spec.validate();
  const EfficiencyModel model(spec.base.efficiency_exponent);
  const DynamicsOptions options{spec.max_rounds, spec.tolerance};
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  std::vector<UtilityComparison> rows;
  rows.reserve(spec.sweep.size());
  for (int value : spec.sweep) {
    const SystemConfig config = spec.config_at(value);
    UtilityComparison row;
    row.sweep_value = value;
    row.config = config;
    row.trials = spec.trials;
    row.baseline_feasible = config.crowded_carrier_feasible(model.gamma_star());

    std::vector<double> joint(spec.trials, kNaN);
    std::vector<double> independent(spec.trials, kNaN);
    parallel_for(spec.trials, spec.threads, [&](std::size_t t) {
      auto rng = SplitMix64::substream(spec.seed, t);
      const auto channels = sample_channels(rng, config.users, config.carriers);
      const PowerAllocation cold(config.users, config.carriers);
      const auto result = best_response_dynamics(channels, config, model, cold, options);
      if (!result.converged()) return;
      double total = 0.0;
      for (std::size_t k = 0; k < config.users; ++k) {
        total += utility_joint(config, model, channels, result.powers, k);
      }
      joint[t] = total;
      if (!row.baseline_feasible) return;
      const auto baseline = independent_baseline_powers(channels, config, model);
      total = 0.0;
      for (std::size_t k = 0; k < config.users; ++k) {
        total += utility_joint(config, model, channels, baseline, k);
      }
      independent[t] = total;
    });

    double sum_joint = 0.0;
    double sum_independent = 0.0;
    for (std::size_t t = 0; t < spec.trials; ++t) {
      if (std::isnan(joint[t])) continue;
      ++row.converged;
      sum_joint += joint[t];
      sum_independent += independent[t];
    }
    const double n = static_cast<double>(row.converged);
    row.mean_joint = row.converged > 0 ? sum_joint / n : kNaN;
    row.mean_independent = row.converged > 0 && row.baseline_feasible ? sum_independent / n : kNaN;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mcpc
