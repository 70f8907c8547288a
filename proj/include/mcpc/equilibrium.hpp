#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mcpc/game.hpp"

namespace mcpc {

/// Interference-loading factor 1 / (1 - (n-1) gamma*/N) for n co-channel users.
/// Theta(1) == 1; throws InfeasibleError when the denominator is not positive.
double theta(int n, double gamma_star, int processing_gain);

/// Single-carrier choice per user plus the induced carrier occupancy.
class CarrierAssignment {
 public:
  /// `chosen[k]` is user k's 0-based carrier. Throws DomainError on out-of-range choices.
  CarrierAssignment(std::vector<std::size_t> chosen, std::size_t carriers);

  /// Decodes `index` in [0, D^K) as base-D digits, user 0 most significant.
  static CarrierAssignment from_index(std::uint64_t index, std::size_t users, std::size_t carriers);

  std::size_t users() const noexcept { return chosen_.size(); }
  std::size_t carriers() const noexcept { return occupancy_.size(); }
  std::size_t carrier_of(std::size_t k) const { return chosen_.at(k); }
  int occupancy(std::size_t l) const { return occupancy_.at(l); }
  const std::vector<std::size_t>& chosen() const noexcept { return chosen_; }
  const std::vector<int>& occupancy() const noexcept { return occupancy_; }

  bool operator==(const CarrierAssignment&) const = default;

 private:
  std::vector<std::size_t> chosen_;
  std::vector<int> occupancy_;
};

struct EquilibriumPowers {
  PowerAllocation powers;
  std::vector<bool> clamped;  // per user: closed-form power exceeded p_max
  bool any_clamped() const;
};

/// Closed-form powers that give every user exactly gamma* on its chosen carrier:
/// p = gamma* sigma^2 Theta(n(l)) / h. Powers above p_max are capped and flagged.
/// Throws InfeasibleError when an occupied carrier cannot support its users.
EquilibriumPowers equilibrium_powers(const CarrierAssignment& assignment,
                                     const ChannelMatrix& channels, const SystemConfig& config,
                                     const EfficiencyModel& model);

enum class VerifyStatus { Holds, Violated, Infeasible };

struct Verification {
  VerifyStatus status = VerifyStatus::Holds;
  std::size_t user = 0;     // first offending user (Violated)
  std::size_t carrier = 0;  // offending alternative carrier (Violated) or overloaded carrier (Infeasible)

  bool holds() const noexcept { return status == VerifyStatus::Holds; }
  explicit operator bool() const noexcept { return holds(); }
};

/// Checks the equilibrium conditions for every user k on carrier l = L_k against
/// every alternative carrier i:  h_kl / h_ki > Theta(n(l)) / Theta(n(i)) * Theta(0),
/// where n(i) counts the incumbents of i. Inequalities are strict. Users whose
/// closed-form power is capped at p_max are not checked.
Verification verify_assignment(const CarrierAssignment& assignment, const ChannelMatrix& channels,
                               const SystemConfig& config, const EfficiencyModel& model);

struct Equilibrium {
  CarrierAssignment assignment;
  PowerAllocation powers;
  UserCarrierMatrix sirs;
  std::vector<bool> clamped;
};

/// Every one of the D^K single-carrier assignments that passes verify_assignment,
/// in increasing index order. Throws CapacityError when D^K exceeds `limit`.
std::vector<Equilibrium> enumerate_equilibria(const ChannelMatrix& channels,
                                              const SystemConfig& config,
                                              const EfficiencyModel& model,
                                              std::uint64_t limit = 1'000'000);

enum class DynamicsStatus { Converged, NoEquilibrium };

struct DynamicsOptions {
  int max_rounds = 20;
  double tolerance = 1e-3;
};

struct EquilibriumResult {
  DynamicsStatus status = DynamicsStatus::NoEquilibrium;
  std::optional<CarrierAssignment> assignment;  // set when Converged
  PowerAllocation powers;
  UserCarrierMatrix sirs;
  std::vector<bool> clamped;
  int rounds_used = 0;

  bool converged() const noexcept { return status == DynamicsStatus::Converged; }
};

/// Sequential best-response dynamics. Each round updates users 0..K-1 in
/// order, each seeing the latest powers of the others. Converged once a full
/// round moves no power entry by more than `tolerance` relative to its value.
EquilibriumResult best_response_dynamics(const ChannelMatrix& channels, const SystemConfig& config,
                                         const EfficiencyModel& model,
                                         const PowerAllocation& initial_powers,
                                         const DynamicsOptions& options = {});

/// Equilibrium structure of a two-user, two-carrier instance.
enum class Region { BothC1, BothC2, Split12, Split21, TwoEquilibria, NoEquilibrium };

std::string_view to_string(Region region);

/// Region label from the four ratio thresholds (Theta(0), Theta(2)).
/// Split12 = user 1 on carrier 1, user 2 on carrier 2. Throws DomainError unless K = D = 2.
Region classify_2x2(const ChannelMatrix& channels, const SystemConfig& config,
                    const EfficiencyModel& model);

}  // namespace mcpc
