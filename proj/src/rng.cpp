#include "mcpc/rng.hpp"

#include <cmath>

namespace mcpc {

double SplitMix64::exponential() noexcept { return -std::log(uniform_open()); }

}  // namespace mcpc
