#include "mcpc/analytics.hpp"

#include <cmath>

#include "mcpc/equilibrium.hpp"

namespace mcpc {

TwoUserPmf pmf_two_user(int processing_gain, const EfficiencyModel& model) {
  if (processing_gain < 1) throw DomainError("processing gain must be positive");
  const double gamma_star = model.gamma_star();
  const double theta0 = theta(0, gamma_star, processing_gain);
  const double lone = theta0 / (1.0 + theta0);

  TwoUserPmf pmf;
  pmf.p1 = 2.0 / ((1.0 + theta0) * (1.0 + theta0)) -
           std::pow((1.0 - theta0) / (1.0 + theta0), 2);
  if (static_cast<double>(processing_gain) > gamma_star) {
    const double theta2 = theta(2, gamma_star, processing_gain);
    const double shared = 1.0 / ((1.0 + theta2) * (1.0 + theta2));
    pmf.p0 = shared;
    pmf.p2 = shared;
    pmf.p_none = 2.0 * (lone * lone - shared);
  } else {
    pmf.p_none = 2.0 * lone * lone;
  }
  return pmf;
}

std::vector<double> asymptotic_pmf(std::size_t users) {
  if (users < 1) throw DomainError("asymptotic pmf needs at least one user");
  std::vector<double> pmf(users + 1);
  // C(K, m) / 2^K via the recurrence C(K, m+1) = C(K, m) (K - m) / (m + 1).
  double term = std::ldexp(1.0, -static_cast<int>(users));
  for (std::size_t m = 0; m <= users; ++m) {
    pmf[m] = term;
    term = term * static_cast<double>(users - m) / static_cast<double>(m + 1);
  }
  return pmf;
}

}  // namespace mcpc
