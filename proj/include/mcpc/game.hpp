#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mcpc/errors.hpp"

namespace mcpc {

/// Population and physical-layer parameters of the uplink.
///
/// Defaults reproduce the reference simulation setup: L = M = 100 bits,
/// R = 100 kbit/s, noise power 5e-16 W and an effectively unbounded power cap.
struct SystemConfig {
  std::size_t users = 2;             // K
  std::size_t carriers = 2;          // D
  int processing_gain = 128;         // N
  double noise_power = 5e-16;        // Watts
  double p_max = 1e6;                // Watts
  double info_bits = 100;            // L
  double total_bits = 100;           // M
  double rate = 1e5;                 // bits/s
  int efficiency_exponent = 100;     // exponent of (1 - e^-g)^M

  /// Throws DomainError when a field is non-positive, non-finite or L > M.
  void validate() const;

  /// True when every user can reach `gamma_star` even if all K share one carrier.
  bool crowded_carrier_feasible(double gamma_star) const {
    return static_cast<double>(processing_gain) >
           static_cast<double>(users - 1) * gamma_star;
  }
};

/// Root of the reduced optimality condition e^g = 1 + M g, by bisection on
/// [1e-6, 100]. Throws SolverError when the bracket has no sign change.
double solve_gamma_star(int exponent, double tol = 1e-10);

/// Sigmoidal packet-success model f(g) = (1 - e^-g)^M together with its
/// utility-maximizing SIR.
class EfficiencyModel {
 public:
  explicit EfficiencyModel(int exponent = 100, double tol = 1e-10);

  int exponent() const noexcept { return exponent_; }
  double gamma_star() const noexcept { return gamma_star_; }

  double operator()(double gamma) const;
  double derivative(double gamma) const;

 private:
  int exponent_;
  double gamma_star_;
};

/// Dense row-major K x D matrix of non-negative finite values.
class UserCarrierMatrix {
 public:
  UserCarrierMatrix() = default;
  UserCarrierMatrix(std::size_t users, std::size_t carriers, double fill = 0.0)
      : users_(users), carriers_(carriers), data_(users * carriers, fill) {}

  std::size_t users() const noexcept { return users_; }
  std::size_t carriers() const noexcept { return carriers_; }

  double operator()(std::size_t k, std::size_t l) const { return data_[k * carriers_ + l]; }
  double& operator()(std::size_t k, std::size_t l) { return data_[k * carriers_ + l]; }

  std::span<const double> row(std::size_t k) const {
    return {data_.data() + k * carriers_, carriers_};
  }
  std::span<double> row(std::size_t k) { return {data_.data() + k * carriers_, carriers_}; }
  std::span<const double> values() const noexcept { return data_; }

  bool operator==(const UserCarrierMatrix&) const = default;

 private:
  std::size_t users_ = 0;
  std::size_t carriers_ = 0;
  std::vector<double> data_;
};

/// Path gains h_kl; all entries finite and strictly positive.
class ChannelMatrix {
 public:
  explicit ChannelMatrix(UserCarrierMatrix gains);
  ChannelMatrix(std::size_t users, std::size_t carriers, std::span<const double> row_major);

  std::size_t users() const noexcept { return gains_.users(); }
  std::size_t carriers() const noexcept { return gains_.carriers(); }
  double operator()(std::size_t k, std::size_t l) const { return gains_(k, l); }
  std::span<const double> row(std::size_t k) const { return gains_.row(k); }
  const UserCarrierMatrix& matrix() const noexcept { return gains_; }

  /// Same matrix with every gain multiplied by `factor`.
  ChannelMatrix scaled(double factor) const;

 private:
  UserCarrierMatrix gains_;
};

/// Transmit powers p_kl in Watts; finite and non-negative.
class PowerAllocation {
 public:
  PowerAllocation(std::size_t users, std::size_t carriers) : powers_(users, carriers) {}
  explicit PowerAllocation(UserCarrierMatrix powers);

  std::size_t users() const noexcept { return powers_.users(); }
  std::size_t carriers() const noexcept { return powers_.carriers(); }
  double operator()(std::size_t k, std::size_t l) const { return powers_(k, l); }
  std::span<const double> row(std::size_t k) const { return powers_.row(k); }
  const UserCarrierMatrix& matrix() const noexcept { return powers_; }

  /// Replaces user k's power vector. Throws DomainError on negative or non-finite entries.
  void set_row(std::size_t k, std::span<const double> powers);
  void set(std::size_t k, std::size_t l, double power);

  /// Throws DomainError if any entry exceeds `p_max`.
  void check_cap(double p_max) const;

  bool operator==(const PowerAllocation&) const = default;

 private:
  UserCarrierMatrix powers_;
};

double efficiency(double gamma, const EfficiencyModel& model);

/// Matched-filter output SIR of user k on carrier l.
double sir(const SystemConfig& config, const ChannelMatrix& channels,
           const PowerAllocation& powers, std::size_t k, std::size_t l);

/// Full K x D SIR matrix (entries of idle users are 0).
UserCarrierMatrix sir_matrix(const SystemConfig& config, const ChannelMatrix& channels,
                             const PowerAllocation& powers);

/// Channel gain of user k normalized by the noise plus interference it sees,
/// so that sir(k, l) == effective_gains(k)[l] * p_kl.
std::vector<double> effective_gains(const SystemConfig& config, const ChannelMatrix& channels,
                                    const PowerAllocation& powers, std::size_t k);

/// Goodput (L/M) R f(g) in bits/s.
double throughput(const SystemConfig& config, const EfficiencyModel& model, double gamma);

/// Total throughput over total power in bits/Joule; 0 for an idle user.
double utility_joint(const SystemConfig& config, const EfficiencyModel& model,
                     const ChannelMatrix& channels, const PowerAllocation& powers,
                     std::size_t k);

/// Sum of per-carrier throughput/power ratios; idle carriers contribute 0.
double utility_independent_sum(const SystemConfig& config, const EfficiencyModel& model,
                               const ChannelMatrix& channels, const PowerAllocation& powers,
                               std::size_t k);

struct BestResponse {
  std::size_t carrier = 0;  // 0-based index of the carrier with the largest effective gain
  double power = 0.0;
  bool clamped = false;     // target SIR needed more than p_max

  /// Length-D vector with `power` on `carrier` and zero elsewhere.
  std::vector<double> powers(std::size_t carriers) const;
};

/// Utility-maximizing reply of user k to the others' powers (row k of
/// `powers` is ignored): transmit only on the carrier with the largest
/// effective gain, at the power reaching gamma*, capped at p_max.
/// Ties go to the lowest carrier index.
BestResponse best_response(const SystemConfig& config, const EfficiencyModel& model,
                           const ChannelMatrix& channels, const PowerAllocation& powers,
                           std::size_t k);

}  // namespace mcpc
