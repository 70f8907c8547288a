#pragma once

#include <vector>

#include "mcpc/game.hpp"

namespace mcpc {

/// Distribution of X1, the number of users on carrier 1 at equilibrium, for
/// two users on two carriers with i.i.d. exponential (Rayleigh-power) gains.
struct TwoUserPmf {
  double p0 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double p_none = 0.0;  // no equilibrium

  double existence() const noexcept { return 1.0 - p_none; }
};

/// Closed-form pmf. For N <= gamma* the shared-carrier outcomes are taken as
/// exactly zero.
TwoUserPmf pmf_two_user(int processing_gain, const EfficiencyModel& model);

/// Binomial(K, 1/2) large-N approximation of the X1 pmf, m = 0..K.
std::vector<double> asymptotic_pmf(std::size_t users);

}  // namespace mcpc
