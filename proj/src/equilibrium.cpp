#include "mcpc/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mcpc {

double theta(int n, double gamma_star, int processing_gain) {
  if (n < 0) throw DomainError("occupancy must be non-negative");
  if (processing_gain < 1) throw DomainError("processing gain must be positive");
  const double denominator =
      1.0 - static_cast<double>(n - 1) * gamma_star / static_cast<double>(processing_gain);
  if (!(denominator > 0.0)) {
    throw InfeasibleError("processing gain " + std::to_string(processing_gain) +
                          " cannot support " + std::to_string(n) + " co-channel users");
  }
  return 1.0 / denominator;
}

CarrierAssignment::CarrierAssignment(std::vector<std::size_t> chosen, std::size_t carriers)
    : chosen_(std::move(chosen)), occupancy_(carriers, 0) {
  if (carriers == 0) throw DomainError("assignment needs at least one carrier");
  for (std::size_t c : chosen_) {
    if (c >= carriers) throw DomainError("carrier choice out of range");
    ++occupancy_[c];
  }
}

CarrierAssignment CarrierAssignment::from_index(std::uint64_t index, std::size_t users,
                                                std::size_t carriers) {
  std::vector<std::size_t> chosen(users);
  for (std::size_t k = users; k-- > 0;) {
    chosen[k] = static_cast<std::size_t>(index % carriers);
    index /= carriers;
  }
  return CarrierAssignment(std::move(chosen), carriers);
}

bool EquilibriumPowers::any_clamped() const {
  return std::find(clamped.begin(), clamped.end(), true) != clamped.end();
}

namespace {

void check_assignment(const CarrierAssignment& assignment, const ChannelMatrix& channels,
                      const SystemConfig& config) {
  if (assignment.users() != config.users || assignment.carriers() != config.carriers ||
      channels.users() != config.users || channels.carriers() != config.carriers) {
    throw DomainError("assignment/channel dimensions do not match the configuration");
  }
}

}  // namespace

EquilibriumPowers equilibrium_powers(const CarrierAssignment& assignment,
                                     const ChannelMatrix& channels, const SystemConfig& config,
                                     const EfficiencyModel& model) {
  check_assignment(assignment, channels, config);
  const double gamma_star = model.gamma_star();
  EquilibriumPowers out{PowerAllocation(config.users, config.carriers),
                        std::vector<bool>(config.users, false)};
  for (std::size_t k = 0; k < config.users; ++k) {
    const std::size_t l = assignment.carrier_of(k);
    const double loading = theta(assignment.occupancy(l), gamma_star, config.processing_gain);
    const double p = gamma_star * config.noise_power * loading / channels(k, l);
    out.clamped[k] = p > config.p_max;
    out.powers.set(k, l, std::min(p, config.p_max));
  }
  return out;
}

Verification verify_assignment(const CarrierAssignment& assignment, const ChannelMatrix& channels,
                               const SystemConfig& config, const EfficiencyModel& model) {
  check_assignment(assignment, channels, config);
  const double gamma_star = model.gamma_star();
  const int n_gain = config.processing_gain;

  std::vector<double> loading(config.carriers);
  for (std::size_t l = 0; l < config.carriers; ++l) {
    try {
      loading[l] = theta(assignment.occupancy(l), gamma_star, n_gain);
    } catch (const InfeasibleError&) {
      return {VerifyStatus::Infeasible, 0, l};
    }
  }
  const double theta0 = theta(0, gamma_star, n_gain);
  const auto clamped = equilibrium_powers(assignment, channels, config, model).clamped;

  for (std::size_t k = 0; k < config.users; ++k) {
    if (clamped[k]) continue;
    const std::size_t l = assignment.carrier_of(k);
    for (std::size_t i = 0; i < config.carriers; ++i) {
      if (i == l) continue;
      const double ratio = channels(k, l) / channels(k, i);
      const double threshold = loading[l] / loading[i] * theta0;
      if (!(ratio > threshold)) return {VerifyStatus::Violated, k, i};
    }
  }
  return {};
}

std::vector<Equilibrium> enumerate_equilibria(const ChannelMatrix& channels,
                                              const SystemConfig& config,
                                              const EfficiencyModel& model, std::uint64_t limit) {
  if (channels.users() != config.users || channels.carriers() != config.carriers) {
    throw DomainError("channel dimensions do not match the configuration");
  }
  std::uint64_t count = 1;
  for (std::size_t k = 0; k < config.users; ++k) {
    if (count > limit / config.carriers) {
      throw CapacityError("D^K assignments exceed the enumeration limit of " +
                          std::to_string(limit));
    }
    count *= config.carriers;
  }

  std::vector<Equilibrium> found;
  for (std::uint64_t index = 0; index < count; ++index) {
    auto assignment = CarrierAssignment::from_index(index, config.users, config.carriers);
    if (!verify_assignment(assignment, channels, config, model)) continue;
    auto closed_form = equilibrium_powers(assignment, channels, config, model);
    auto sirs = sir_matrix(config, channels, closed_form.powers);
    found.push_back({std::move(assignment), std::move(closed_form.powers), std::move(sirs),
                     std::move(closed_form.clamped)});
  }
  return found;
}

EquilibriumResult best_response_dynamics(const ChannelMatrix& channels, const SystemConfig& config,
                                         const EfficiencyModel& model,
                                         const PowerAllocation& initial_powers,
                                         const DynamicsOptions& options) {
  if (options.max_rounds < 1) throw DomainError("max_rounds must be at least 1");
  if (!(options.tolerance > 0.0)) throw DomainError("tolerance must be positive");
  if (initial_powers.users() != config.users || initial_powers.carriers() != config.carriers) {
    throw DomainError("initial power dimensions do not match the configuration");
  }
  initial_powers.check_cap(config.p_max);

  EquilibriumResult result{DynamicsStatus::NoEquilibrium, std::nullopt, initial_powers,
                           UserCarrierMatrix{}, std::vector<bool>(config.users, false), 0};
  std::vector<std::size_t> chosen(config.users, 0);

  for (int round = 1; round <= options.max_rounds; ++round) {
    const PowerAllocation previous = result.powers;
    for (std::size_t k = 0; k < config.users; ++k) {
      const auto reply = best_response(config, model, channels, result.powers, k);
      result.powers.set_row(k, reply.powers(config.carriers));
      result.clamped[k] = reply.clamped;
      chosen[k] = reply.carrier;
    }
    result.rounds_used = round;

    // Relative per entry: powers span many decades across users.
    bool settled = true;
    const auto now = result.powers.matrix().values();
    const auto before = previous.matrix().values();
    for (std::size_t i = 0; i < now.size() && settled; ++i) {
      settled = std::abs(now[i] - before[i]) <= options.tolerance * std::max(now[i], before[i]);
    }
    if (settled) {
      result.status = DynamicsStatus::Converged;
      result.assignment = CarrierAssignment(chosen, config.carriers);
      break;
    }
  }
  result.sirs = sir_matrix(config, channels, result.powers);
  return result;
}

std::string_view to_string(Region region) {
  switch (region) {
    case Region::BothC1: return "both-c1";
    case Region::BothC2: return "both-c2";
    case Region::Split12: return "split-12";
    case Region::Split21: return "split-21";
    case Region::TwoEquilibria: return "two-equilibria";
    case Region::NoEquilibrium: return "no-equilibrium";
  }
  return "unknown";
}

Region classify_2x2(const ChannelMatrix& channels, const SystemConfig& config,
                    const EfficiencyModel& model) {
  if (config.users != 2 || config.carriers != 2 || channels.users() != 2 ||
      channels.carriers() != 2) {
    throw DomainError("region classification needs exactly two users and two carriers");
  }
  const double gamma_star = model.gamma_star();
  const double theta0 = theta(0, gamma_star, config.processing_gain);
  // Two users cannot share a carrier at gamma* when N <= gamma*.
  const bool sharing_feasible = config.processing_gain > gamma_star;
  const double theta2 = sharing_feasible ? theta(2, gamma_star, config.processing_gain) : 0.0;

  const double r1 = channels(0, 0) / channels(0, 1);  // h11 / h12
  const double r2 = channels(1, 0) / channels(1, 1);  // h21 / h22

  const bool both_c1 = sharing_feasible && r1 > theta2 && r2 > theta2;
  const bool both_c2 = sharing_feasible && 1.0 / r1 > theta2 && 1.0 / r2 > theta2;
  const bool split_12 = r1 > theta0 && 1.0 / r2 > theta0;
  const bool split_21 = 1.0 / r1 > theta0 && r2 > theta0;

  if (split_12 && split_21) return Region::TwoEquilibria;
  if (both_c1) return Region::BothC1;
  if (both_c2) return Region::BothC2;
  if (split_12) return Region::Split12;
  if (split_21) return Region::Split21;
  return Region::NoEquilibrium;
}

}  // namespace mcpc
