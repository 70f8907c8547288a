// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "commands.hpp"
#include "helpers.hpp"
#include "mcpc/analytics.hpp"
#include "mcpc/config.hpp"
#include "mcpc/equilibrium.hpp"
#include "mcpc/montecarlo.hpp"

using namespace mcpc;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  failures += pass ? 0 : 1;
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ExperimentSpec pmf_spec(std::vector<int> sweep, unsigned threads) {
  ExperimentSpec spec;
  spec.trials = 20000;
  spec.seed = 1;
  spec.sweep = std::move(sweep);
  spec.threads = threads;
  return spec;
}

const EfficiencyModel kModel(100);

void gamma_star_accuracy() {
  const double reference = static_cast<double>(oracle::gamma_star(100));
  std::vector<double> times;
  double g = 0.0;
  for (int i = 0; i < 11; ++i) {
    const auto t0 = Clock::now();
    g = solve_gamma_star(100);
    times.push_back(seconds_since(t0));
  }
  std::nth_element(times.begin(), times.begin() + 5, times.end());
  const double db = 10.0 * std::log10(g);
  const bool pass = std::abs(g - reference) < 1e-3 && std::abs(db - 8.1) <= 0.1 && times[5] < 1e-3;
  report(1, pass,
         fmt("gamma*=%.9f oracle=%.9f |diff|=%.1e, %.3f dB, median solve %.1f us", g, reference,
             std::abs(g - reference), db, times[5] * 1e6));
}

void existence_at_n16() {
  const auto t0 = Clock::now();
  const auto est = run_pmf_experiment(pmf_spec({16}, 0)).front();
  const double elapsed = seconds_since(t0);
  const double mc = 1.0 - est.no_equilibrium_frequency();
  const double analytic = pmf_two_user(16, kModel).existence();
  const bool pass = std::abs(mc - analytic) <= 0.01 && elapsed < 30.0;
  report(2, pass,
         fmt("N=16 existence MC=%.4f analytic=%.4f |diff|=%.4f, %.2f s", mc, analytic,
             std::abs(mc - analytic), elapsed));
}

// Also returns the CSV bytes for the determinism check.
std::string pmf_agreement() {
  const std::vector<int> sweep = {8, 16, 32, 64, 128};
  const auto estimates = run_pmf_experiment(pmf_spec(sweep, 0));
  bool pass = true;
  double worst = 0.0;  // largest |diff| in units of the 4-sigma band
  std::string where;
  for (const auto& est : estimates) {
    const auto pmf = pmf_two_user(est.sweep_value, kModel);
    const double expected[] = {pmf.p0, pmf.p1, pmf.p2, pmf.p_none};
    const double observed[] = {est.frequency(0), est.frequency(1), est.frequency(2),
                               est.no_equilibrium_frequency()};
    for (int m = 0; m < 4; ++m) {
      const double band = 4.0 * std::sqrt(expected[m] * (1 - expected[m]) / est.trials);
      const double diff = std::abs(observed[m] - expected[m]);
      if (diff > band) pass = false;
      if (band > 0 && diff / band > worst) {
        worst = diff / band;
        where = fmt("N=%d %s", est.sweep_value, m == 3 ? "none" : std::to_string(m).c_str());
      }
    }
  }
  report(3, pass,
         fmt("N in {8..128}: worst |MC-analytic| = %.2f of the 4-sigma band (%s)", worst,
             where.c_str()));
  return cli::pmf_csv(estimates, SweepParameter::ProcessingGain, kModel);
}

void partition_identity() {
  double worst = 0.0;
  for (int n = 1; n <= 100000; ++n) {
    const auto pmf = pmf_two_user(n, kModel);
    worst = std::max(worst, std::abs(pmf.p0 + pmf.p1 + pmf.p2 + pmf.p_none - 1.0));
  }
  report(4, worst <= 1e-12, fmt("N=1..100000: max |p0+p1+p2+p_none-1| = %.1e", worst));
}

void large_n_binomial() {
  auto spec = pmf_spec({512}, 0);
  spec.base.users = 10;
  const auto est = run_pmf_experiment(spec).front();
  const auto binom = asymptotic_pmf(10);
  double tv = est.no_equilibrium_frequency();
  std::size_t mode = 0;
  for (std::size_t m = 0; m <= 10; ++m) {
    tv += std::abs(est.frequency(m) - binom[m]);
    if (est.counts[m] > est.counts[mode]) mode = m;
  }
  tv /= 2.0;
  const double d9 = std::abs(est.frequency(9) - binom[9]);
  const double d10 = std::abs(est.frequency(10) - binom[10]);
  const bool pass = tv < 0.05 && d9 < 0.02 && d10 < 0.02 && mode >= 4 && mode <= 6;
  report(5, pass,
         fmt("K=10 N=512: TV=%.4f, |dP(9)|=%.4f, |dP(10)|=%.4f, mode=%zu, no-eq=%.4f", tv, d9, d10,
             mode, est.no_equilibrium_frequency()));
}

void best_response_optimality() {
  std::mt19937_64 rng(2024);
  const oracle::Real g = oracle::gamma_star(100);
  int checked = 0, bad = 0;
  double worst = 1e300;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t users = 1 + rng() % 3;
    const std::size_t carriers = 1 + rng() % 3;
    const auto config = testing::config_for(users, carriers, 128);
    const auto h = testing::random_channels(rng, users, carriers);
    const auto powers = testing::random_powers(rng, users, carriers);
    const std::size_t k = rng() % users;
    const auto reply = best_response(config, kModel, h, powers, k);
    const auto in = testing::to_instance(config, h, powers);

    std::vector<oracle::Real> own(carriers, 0);
    own[reply.carrier] = reply.power;
    const oracle::Real achieved = oracle::utility(in, k, own, 100);
    oracle::Real min_gain = oracle::effective_gain(in, k, 0);
    for (std::size_t l = 1; l < carriers; ++l) min_gain = std::min(min_gain, oracle::effective_gain(in, k, l));
    const oracle::Real grid = oracle::grid_max_utility(in, k, 100, 2 * g / min_gain, 200);
    ++checked;
    const double ratio = static_cast<double>(achieved / grid);
    worst = std::min(worst, ratio);
    if (achieved < grid * (1 - 1e-9L)) ++bad;
  }
  report(6, bad == 0,
         fmt("%d instances (K,D<=3): %d below the 200-pt/carrier grid max; min BR/grid = %.9f",
             checked, bad, worst));
}

void dynamics_soundness() {
  std::mt19937_64 rng(7);
  const auto config = testing::config_for(2, 2, 128);
  int converged = 0, unsound = 0, empty = 0, empty_detected = 0;
  double worst_power = 0.0;
  auto run = [&](const ChannelMatrix& h) {
    const auto result = best_response_dynamics(h, config, kModel, PowerAllocation(2, 2));
    const bool none = enumerate_equilibria(h, config, kModel).empty();
    if (none) {
      ++empty;
      empty_detected += result.converged() ? 0 : 1;
    }
    if (!result.converged()) return;
    ++converged;
    if (!verify_assignment(*result.assignment, h, config, kModel).holds()) ++unsound;
    const auto closed = equilibrium_powers(*result.assignment, h, config, kModel);
    for (std::size_t k = 0; k < 2; ++k) {
      const std::size_t l = result.assignment->carrier_of(k);
      const double rel = std::abs(result.powers(k, l) - closed.powers(k, l)) / closed.powers(k, l);
      worst_power = std::max(worst_power, rel);
      if (rel > 1e-6) ++unsound;
    }
  };
  for (int i = 0; i < 1000; ++i) run(testing::random_channels(rng, 2, 2));
  const int random_empty = empty;
  // No-equilibrium draws are rare at N = 128 (~0.1%); add rejection-sampled ones.
  int extra = 0;
  while (extra < 200) {
    const auto h = testing::random_channels(rng, 2, 2);
    if (classify_2x2(h, config, kModel) != Region::NoEquilibrium) continue;
    run(h);
    ++extra;
  }
  const double detected = empty == 0 ? 1.0 : static_cast<double>(empty_detected) / empty;
  const bool pass = unsound == 0 && detected >= 0.99;
  report(7, pass,
         fmt("N=128: %d/1000 converged, %d unsound, max closed-form rel err %.1e; "
             "no-equilibrium reported for %d/%d empty instances (%d random + 200 targeted)",
             converged, unsound, worst_power, empty_detected, empty, random_empty));
}

void joint_beats_independent() {
  ExperimentSpec spec;
  spec.trials = 20000;
  spec.seed = 1;
  spec.sweep_parameter = SweepParameter::Users;
  spec.sweep = {2, 3, 4, 5, 6, 7, 8, 9, 10};
  const auto t0 = Clock::now();
  const auto rows = compare_total_utility(spec);
  const double elapsed = seconds_since(t0);
  bool pass = elapsed < 300.0;
  double previous = -1.0;
  std::string detail;
  for (const auto& row : rows) {
    const double diff = row.mean_joint - row.mean_independent;
    if (!(row.mean_joint > row.mean_independent) || !(diff > previous)) pass = false;
    previous = diff;
    detail += fmt(" K=%d:%.2f", row.sweep_value, row.ratio());
  }
  report(8, pass, fmt("D=2 N=128 joint/independent ratios%s; difference increasing=%s, %.1f s",
                      detail.c_str(), pass ? "yes" : "no", elapsed));
}

void determinism(const std::string& reference) {
  const std::vector<int> sweep = {8, 16, 32, 64, 128};
  const auto serial = cli::pmf_csv(run_pmf_experiment(pmf_spec(sweep, 1)), SweepParameter::ProcessingGain, kModel);
  const auto four = cli::pmf_csv(run_pmf_experiment(pmf_spec(sweep, 4)), SweepParameter::ProcessingGain, kModel);
  const bool pass = serial == four && four == reference;
  report(9, pass,
         fmt("pmf CSV (%zu bytes) identical for threads=1, threads=4 and the default run: %s",
             serial.size(), pass ? "yes" : "no"));
}

}  // namespace

int main() {
  gamma_star_accuracy();
  existence_at_n16();
  const auto csv = pmf_agreement();
  partition_identity();
  large_n_binomial();
  best_response_optimality();
  dynamics_soundness();
  joint_beats_independent();
  determinism(csv);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
