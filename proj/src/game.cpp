#include "mcpc/game.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mcpc {

namespace {

void check_index(std::size_t index, std::size_t bound, const char* what) {
  if (index >= bound) {
    throw DomainError(std::string(what) + " index " + std::to_string(index) +
                      " out of range (" + std::to_string(bound) + ")");
  }
}

void check_shapes(const SystemConfig& config, const ChannelMatrix& channels,
                  const PowerAllocation& powers) {
  if (channels.users() != config.users || channels.carriers() != config.carriers ||
      powers.users() != config.users || powers.carriers() != config.carriers) {
    throw DomainError("channel/power dimensions do not match the configuration");
  }
}

// sigma^2 + (1/N) sum_{j != k} p_jl h_jl
double noise_plus_interference(const SystemConfig& config, const ChannelMatrix& channels,
                               const PowerAllocation& powers, std::size_t k, std::size_t l) {
  double received = 0.0;
  for (std::size_t j = 0; j < config.users; ++j) {
    if (j != k) received += powers(j, l) * channels(j, l);
  }
  return config.noise_power + received / static_cast<double>(config.processing_gain);
}

}  // namespace

void SystemConfig::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (users < 1) throw DomainError("users must be at least 1");
  if (carriers < 1) throw DomainError("carriers must be at least 1");
  if (processing_gain < 1) throw DomainError("processing_gain must be a positive integer");
  if (!positive(noise_power)) throw DomainError("noise_power must be positive and finite");
  if (!positive(p_max)) throw DomainError("p_max must be positive and finite");
  if (!positive(info_bits) || !positive(total_bits)) throw DomainError("bit counts must be positive");
  if (info_bits > total_bits) throw DomainError("info_bits must not exceed total_bits");
  if (!positive(rate)) throw DomainError("rate must be positive and finite");
  if (efficiency_exponent < 1) throw DomainError("efficiency_exponent must be a positive integer");
}

double solve_gamma_star(int exponent, double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw DomainError("solver tolerance must be positive");
  if (exponent < 1) throw DomainError("efficiency exponent must be a positive integer");

  const double m = exponent;
  // e^g - 1 - M g, written with expm1 to keep precision near the lower bracket end.
  auto reduced = [m](double g) { return std::expm1(g) - m * g; };

  double lo = 1e-6;
  double hi = 100.0;
  if (!(reduced(lo) < 0.0 && reduced(hi) > 0.0)) {
    throw SolverError("no sign change of e^g = 1 + " + std::to_string(exponent) +
                      " g on [1e-6, 100]");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (reduced(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

EfficiencyModel::EfficiencyModel(int exponent, double tol)
    : exponent_(exponent), gamma_star_(solve_gamma_star(exponent, tol)) {}

double EfficiencyModel::operator()(double gamma) const {
  if (!(gamma >= 0.0)) throw DomainError("SIR must be non-negative");
  return std::pow(-std::expm1(-gamma), exponent_);
}

double EfficiencyModel::derivative(double gamma) const {
  if (!(gamma >= 0.0)) throw DomainError("SIR must be non-negative");
  return exponent_ * std::pow(-std::expm1(-gamma), exponent_ - 1) * std::exp(-gamma);
}

ChannelMatrix::ChannelMatrix(UserCarrierMatrix gains) : gains_(std::move(gains)) {
  for (double h : gains_.values()) {
    if (!std::isfinite(h) || !(h > 0.0)) {
      throw DomainError("channel gains must be finite and strictly positive");
    }
  }
}

ChannelMatrix::ChannelMatrix(std::size_t users, std::size_t carriers,
                             std::span<const double> row_major)
    : ChannelMatrix([&] {
        if (row_major.size() != users * carriers) {
          throw DomainError("channel data size does not match dimensions");
        }
        UserCarrierMatrix m(users, carriers);
        for (std::size_t k = 0; k < users; ++k) {
          for (std::size_t l = 0; l < carriers; ++l) m(k, l) = row_major[k * carriers + l];
        }
        return m;
      }()) {}

ChannelMatrix ChannelMatrix::scaled(double factor) const {
  UserCarrierMatrix m = gains_;
  for (std::size_t k = 0; k < users(); ++k) {
    for (double& h : m.row(k)) h *= factor;
  }
  return ChannelMatrix(std::move(m));
}

PowerAllocation::PowerAllocation(UserCarrierMatrix powers) : powers_(std::move(powers)) {
  for (double p : powers_.values()) {
    if (!std::isfinite(p) || p < 0.0) throw DomainError("powers must be finite and non-negative");
  }
}

void PowerAllocation::set_row(std::size_t k, std::span<const double> powers) {
  check_index(k, users(), "user");
  if (powers.size() != carriers()) throw DomainError("power vector length must equal carrier count");
  for (double p : powers) {
    if (!std::isfinite(p) || p < 0.0) throw DomainError("powers must be finite and non-negative");
  }
  std::copy(powers.begin(), powers.end(), powers_.row(k).begin());
}

void PowerAllocation::set(std::size_t k, std::size_t l, double power) {
  check_index(k, users(), "user");
  check_index(l, carriers(), "carrier");
  if (!std::isfinite(power) || power < 0.0) throw DomainError("powers must be finite and non-negative");
  powers_(k, l) = power;
}

void PowerAllocation::check_cap(double p_max) const {
  for (double p : powers_.values()) {
    if (p > p_max) throw DomainError("power exceeds p_max");
  }
}

double efficiency(double gamma, const EfficiencyModel& model) { return model(gamma); }

double sir(const SystemConfig& config, const ChannelMatrix& channels,
           const PowerAllocation& powers, std::size_t k, std::size_t l) {
  check_shapes(config, channels, powers);
  check_index(k, config.users, "user");
  check_index(l, config.carriers, "carrier");
  return powers(k, l) * channels(k, l) / noise_plus_interference(config, channels, powers, k, l);
}

UserCarrierMatrix sir_matrix(const SystemConfig& config, const ChannelMatrix& channels,
                             const PowerAllocation& powers) {
  check_shapes(config, channels, powers);
  UserCarrierMatrix out(config.users, config.carriers);
  for (std::size_t k = 0; k < config.users; ++k) {
    for (std::size_t l = 0; l < config.carriers; ++l) {
      out(k, l) = powers(k, l) * channels(k, l) /
                  noise_plus_interference(config, channels, powers, k, l);
    }
  }
  return out;
}

std::vector<double> effective_gains(const SystemConfig& config, const ChannelMatrix& channels,
                                    const PowerAllocation& powers, std::size_t k) {
  check_shapes(config, channels, powers);
  check_index(k, config.users, "user");
  std::vector<double> gains(config.carriers);
  for (std::size_t l = 0; l < config.carriers; ++l) {
    gains[l] = channels(k, l) / noise_plus_interference(config, channels, powers, k, l);
  }
  return gains;
}

double throughput(const SystemConfig& config, const EfficiencyModel& model, double gamma) {
  return config.info_bits / config.total_bits * config.rate * model(gamma);
}

double utility_joint(const SystemConfig& config, const EfficiencyModel& model,
                     const ChannelMatrix& channels, const PowerAllocation& powers,
                     std::size_t k) {
  const auto gains = effective_gains(config, channels, powers, k);
  double total_throughput = 0.0;
  double total_power = 0.0;
  for (std::size_t l = 0; l < config.carriers; ++l) {
    const double p = powers(k, l);
    total_power += p;
    total_throughput += throughput(config, model, gains[l] * p);
  }
  return total_power > 0.0 ? total_throughput / total_power : 0.0;
}

double utility_independent_sum(const SystemConfig& config, const EfficiencyModel& model,
                               const ChannelMatrix& channels, const PowerAllocation& powers,
                               std::size_t k) {
  const auto gains = effective_gains(config, channels, powers, k);
  double score = 0.0;
  for (std::size_t l = 0; l < config.carriers; ++l) {
    const double p = powers(k, l);
    if (p > 0.0) score += throughput(config, model, gains[l] * p) / p;
  }
  return score;
}

std::vector<double> BestResponse::powers(std::size_t carriers) const {
  std::vector<double> out(carriers, 0.0);
  out.at(carrier) = power;
  return out;
}

BestResponse best_response(const SystemConfig& config, const EfficiencyModel& model,
                           const ChannelMatrix& channels, const PowerAllocation& powers,
                           std::size_t k) {
  const auto gains = effective_gains(config, channels, powers, k);
  std::size_t best = 0;
  for (std::size_t l = 1; l < gains.size(); ++l) {
    if (gains[l] > gains[best]) best = l;
  }
  const double target = model.gamma_star() / gains[best];
  BestResponse reply;
  reply.carrier = best;
  reply.clamped = target > config.p_max;
  reply.power = reply.clamped ? config.p_max : target;
  return reply;
}

}  // namespace mcpc
