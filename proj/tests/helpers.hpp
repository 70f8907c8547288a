#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "mcpc/game.hpp"
#include "oracles.hpp"

namespace testing {

/// Pure relative comparison; doctest::Approx adds an absolute floor of ~epsilon,
/// which is useless for powers around 1e-15 W.
inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

inline oracle::Instance to_instance(const mcpc::SystemConfig& config,
                                    const mcpc::ChannelMatrix& channels,
                                    const mcpc::PowerAllocation& powers) {
  oracle::Instance in;
  in.users = config.users;
  in.carriers = config.carriers;
  in.processing_gain = config.processing_gain;
  in.noise = config.noise_power;
  for (double h : channels.matrix().values()) in.gains.push_back(h);
  for (double p : powers.matrix().values()) in.powers.push_back(p);
  return in;
}

inline mcpc::ChannelMatrix random_channels(std::mt19937_64& rng, std::size_t users,
                                           std::size_t carriers) {
  std::exponential_distribution<double> exp1(1.0);
  mcpc::UserCarrierMatrix m(users, carriers);
  for (std::size_t k = 0; k < users; ++k)
    for (std::size_t l = 0; l < carriers; ++l) m(k, l) = exp1(rng) + 1e-12;
  return mcpc::ChannelMatrix(std::move(m));
}

/// Powers on the natural scale of the default noise power (~1e-15 W), some entries zero.
inline mcpc::PowerAllocation random_powers(std::mt19937_64& rng, std::size_t users,
                                           std::size_t carriers) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  mcpc::PowerAllocation p(users, carriers);
  for (std::size_t k = 0; k < users; ++k)
    for (std::size_t l = 0; l < carriers; ++l)
      if (u(rng) > 0.2) p.set(k, l, 1e-14 * u(rng));
  return p;
}

inline mcpc::SystemConfig config_for(std::size_t users, std::size_t carriers, int n = 128) {
  mcpc::SystemConfig c;
  c.users = users;
  c.carriers = carriers;
  c.processing_gain = n;
  return c;
}

}  // namespace testing
