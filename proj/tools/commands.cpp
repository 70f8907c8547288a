#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mcpc/analytics.hpp"
#include "mcpc/config.hpp"
#include "mcpc/equilibrium.hpp"

namespace mcpc::cli {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolver;
  } catch (const InfeasibleError& e) {
    err << "infeasible configuration: " << e.what() << '\n';
    return kInfeasible;
  } catch (const DomainError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInternal;
  }
}

json config_json(const ExperimentSpec& spec) {
  const auto& c = spec.base;
  return {{"users", c.users},
          {"carriers", c.carriers},
          {"processing_gain", c.processing_gain},
          {"noise_power", c.noise_power},
          {"p_max", c.p_max},
          {"info_bits", c.info_bits},
          {"total_bits", c.total_bits},
          {"rate", c.rate},
          {"efficiency_exponent", c.efficiency_exponent},
          {"trials", spec.trials},
          {"max_rounds", spec.max_rounds},
          {"tolerance", spec.tolerance},
          {"seed", spec.seed},
          {"threads", spec.threads},
          {"sweep_parameter", std::string(to_string(spec.sweep_parameter))},
          {"sweep", spec.sweep}};
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Writes `body` preceded by a one-line manifest comment, to --out (plus a
// sidecar .manifest.json) or to `out`.
void emit(const std::string& command, const RunOptions& options, const ExperimentSpec& spec,
          const std::string& body, Clock::time_point started, std::ostream& out) {
  json manifest = {
      {"tool", "mcpc"},
      {"version", std::string(kVersion)},
      {"command", command},
      {"command_line", options.command_line},
      {"config_path", options.config ? options.config->string() : ""},
      {"channels_path", options.channels ? options.channels->string() : ""},
      {"config", config_json(spec)},
      {"config_text", format_config(spec)},
      {"seed", spec.seed},
      {"rng", std::string(SplitMix64::kName)},
      {"started_utc", utc_now()},
      {"wall_clock_seconds",
       std::chrono::duration<double>(Clock::now() - started).count()},
  };
  if (!options.out) {
    manifest["outputs"] = json::array({"-"});
    out << "# manifest: " << manifest.dump() << '\n' << body;
    return;
  }
  const auto path = resolve_output(*options.out);
  auto sidecar = path;
  sidecar += ".manifest.json";
  manifest["outputs"] = {path.string(), sidecar.string()};
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  file << "# manifest: " << manifest.dump() << '\n' << body;
  std::ofstream(sidecar) << manifest.dump(2) << '\n';
  out << "wrote " << path.string() << '\n';
}

ChannelMatrix require_channels(const RunOptions& options) {
  if (!options.channels) throw DomainError("--channels is required for this command");
  return load_channels(*options.channels);
}

// Config with K and D taken from the channel file.
SystemConfig config_for(const ExperimentSpec& spec, const ChannelMatrix& channels) {
  SystemConfig config = spec.base;
  config.users = channels.users();
  config.carriers = channels.carriers();
  config.validate();
  return config;
}

PowerAllocation initial_powers(const RunOptions& options, const SystemConfig& config) {
  if (!options.powers) return PowerAllocation(config.users, config.carriers);
  std::ifstream in(*options.powers);
  if (!in) throw ParseError("cannot open power file " + options.powers->string());
  // Same layout as a channel file, but zeros are legal.
  UserCarrierMatrix m(config.users, config.carriers);
  std::string line;
  std::size_t row = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = line.substr(0, line.find('#'));
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (row >= config.users) throw ParseError("more power rows than users", line_no);
    std::stringstream ss(line);
    std::string field;
    std::size_t col = 0;
    while (std::getline(ss, field, ',')) {
      if (col >= config.carriers) throw ParseError("more power columns than carriers", line_no);
      char* end = nullptr;
      const double p = std::strtod(field.c_str(), &end);
      while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
      if (end == field.c_str() || *end != '\0' || !std::isfinite(p) || p < 0.0) {
        throw ParseError("field " + std::to_string(col + 1) + ": bad power '" + field + "'", line_no);
      }
      m(row, col++) = p;
    }
    if (col != config.carriers) throw ParseError("expected " + std::to_string(config.carriers) + " powers", line_no);
    ++row;
  }
  if (row != config.users) throw ParseError("expected " + std::to_string(config.users) + " power rows");
  PowerAllocation powers(std::move(m));
  powers.check_cap(config.p_max);
  return powers;
}

void write_allocation_rows(std::ostringstream& csv, const std::string& tag,
                           const CarrierAssignment& assignment, const PowerAllocation& powers,
                           const UserCarrierMatrix& sirs, const std::vector<bool>& clamped) {
  for (std::size_t k = 0; k < assignment.users(); ++k) {
    const std::size_t l = assignment.carrier_of(k);
    csv << tag << ',' << k + 1 << ',' << l + 1 << ',' << format_number(powers(k, l)) << ','
        << format_number(sirs(k, l)) << ',' << (clamped[k] ? 1 : 0) << '\n';
  }
}

}  // namespace

ExperimentSpec resolve_spec(const RunOptions& options) {
  ExperimentSpec spec;
  if (options.config) {
    if (options.config->extension() == ".json") {
      std::ifstream in(*options.config);
      if (!in) throw ParseError("cannot open manifest " + options.config->string());
      json manifest;
      try {
        in >> manifest;
      } catch (const json::exception& e) {
        throw ParseError(options.config->string() + ": " + e.what());
      }
      if (!manifest.contains("config_text")) {
        throw ParseError(options.config->string() + ": manifest has no config_text");
      }
      std::istringstream text(manifest["config_text"].get<std::string>());
      spec = parse_config(text);
    } else {
      spec = load_config(*options.config);
    }
  }
  if (options.seed) spec.seed = *options.seed;
  if (options.trials) spec.trials = *options.trials;
  if (options.threads) spec.threads = *options.threads;
  spec.validate();
  return spec;
}

std::filesystem::path resolve_output(const std::filesystem::path& out) {
  if (out.is_absolute()) return out;
  if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
    return std::filesystem::path(dir) / out;
  }
  return out;
}

std::string pmf_csv(const std::vector<PmfEstimate>& estimates, SweepParameter parameter,
                    const EfficiencyModel& model) {
  const std::string name(to_string(parameter));
  std::ostringstream csv;
  csv << "sweep_parameter,value,users,processing_gain,m,analytic,mc_frequency,std_error,flag\n";
  for (const auto& est : estimates) {
    const auto& c = est.config;
    const bool closed_form = c.users == 2 && c.carriers == 2;
    const TwoUserPmf analytic =
        closed_form ? pmf_two_user(c.processing_gain, model) : TwoUserPmf{};
    const std::string flag = est.crowded_feasible ? "ok" : "infeasible";
    const std::string prefix = std::to_string(est.sweep_value) + ',' + std::to_string(c.users) +
                               ',' + std::to_string(c.processing_gain) + ',';
    for (std::size_t m = 0; m < est.counts.size(); ++m) {
      const double a = !closed_form ? std::nan("")
                       : m == 0     ? analytic.p0
                       : m == 1     ? analytic.p1
                                    : analytic.p2;
      csv << name << ',' << prefix << m << ',' << (closed_form ? format_number(a) : "") << ','
          << format_number(est.frequency(m)) << ',' << format_number(est.standard_error(m)) << ','
          << flag << '\n';
    }
    csv << name << ',' << prefix << "none," << (closed_form ? format_number(analytic.p_none) : "")
        << ',' << format_number(est.no_equilibrium_frequency()) << ','
        << format_number(est.no_equilibrium_standard_error()) << ',' << flag << '\n';
  }
  return csv.str();
}

std::string compare_csv(const std::vector<UtilityComparison>& rows) {
  std::ostringstream csv;
  csv << "value,users,carriers,processing_gain,mean_joint,mean_independent,ratio,convergence_rate,flag\n";
  for (const auto& r : rows) {
    const bool averaged = r.converged > 0 && r.baseline_feasible;
    csv << r.sweep_value << ',' << r.config.users << ',' << r.config.carriers << ','
        << r.config.processing_gain << ',' << format_number(r.mean_joint) << ','
        << (r.baseline_feasible ? format_number(r.mean_independent) : "") << ','
        << (averaged ? format_number(r.ratio()) : "") << ','
        << format_number(r.convergence_rate()) << ','
        << (r.baseline_feasible ? "ok" : "infeasible") << '\n';
  }
  return csv.str();
}

int cmd_gamma_star(int exponent, double tol, std::ostream& out, std::ostream& err) {
  if (!(tol > 0.0)) {
    err << "usage error: --tol must be positive\n";
    return kUsage;
  }
  return guarded(err, [&] {
    const double g = solve_gamma_star(exponent, tol);
    char rounded[16];
    std::snprintf(rounded, sizeof rounded, "%.1f", g);
    out << "gamma_star = " << format_number(g) << '\n'
        << "gamma_star_db = " << format_db(g) << '\n'
        << "gamma_star_rounded = " << rounded << '\n';
    return kOk;
  });
}

int cmd_best_response(const RunOptions& options, std::size_t user, std::ostream& out,
                      std::ostream& err) {
  return guarded(err, [&] {
    const auto spec = resolve_spec(options);
    const auto channels = require_channels(options);
    const auto config = config_for(spec, channels);
    if (user < 1 || user > config.users) throw DomainError("--user must be in 1.." + std::to_string(config.users));
    const EfficiencyModel model(config.efficiency_exponent);
    const auto powers = initial_powers(options, config);
    const auto reply = best_response(config, model, channels, powers, user - 1);
    const auto gains = effective_gains(config, channels, powers, user - 1);
    out << "user,carrier,power,effective_gain,clamped\n"
        << user << ',' << reply.carrier + 1 << ',' << format_number(reply.power) << ','
        << format_number(gains[reply.carrier]) << ',' << (reply.clamped ? 1 : 0) << '\n';
    return kOk;
  });
}

int cmd_equilibria(const RunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto started = Clock::now();
    auto spec = resolve_spec(options);
    const auto channels = require_channels(options);
    spec.base = config_for(spec, channels);
    const EfficiencyModel model(spec.base.efficiency_exponent);
    const auto found = enumerate_equilibria(channels, spec.base, model);

    std::ostringstream csv;
    csv << "equilibrium,user,carrier,power,sir,clamped\n";
    for (std::size_t e = 0; e < found.size(); ++e) {
      write_allocation_rows(csv, std::to_string(e + 1), found[e].assignment, found[e].powers,
                            found[e].sirs, found[e].clamped);
    }
    emit("equilibria", options, spec, csv.str(), started, out);
    return found.empty() ? kNoEquilibrium : kOk;
  });
}

int cmd_dynamics(const RunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto started = Clock::now();
    auto spec = resolve_spec(options);
    const auto channels = require_channels(options);
    spec.base = config_for(spec, channels);
    const EfficiencyModel model(spec.base.efficiency_exponent);
    const auto result = best_response_dynamics(channels, spec.base, model,
                                                initial_powers(options, spec.base),
                                                {spec.max_rounds, spec.tolerance});
    std::ostringstream csv;
    csv << "# status: " << (result.converged() ? "converged" : "no-equilibrium")
        << ", rounds: " << result.rounds_used << '\n';
    csv << "status,user,carrier,power,sir,clamped\n";
    if (result.converged()) {
      write_allocation_rows(csv, "converged", *result.assignment, result.powers, result.sirs,
                            result.clamped);
    }
    emit("dynamics", options, spec, csv.str(), started, out);
    return result.converged() ? kOk : kNoEquilibrium;
  });
}

int cmd_pmf(const RunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto started = Clock::now();
    const auto spec = resolve_spec(options);
    const EfficiencyModel model(spec.base.efficiency_exponent);
    const auto estimates = run_pmf_experiment(spec);
    emit("pmf", options, spec, pmf_csv(estimates, spec.sweep_parameter, model), started, out);
    return kOk;
  });
}

int cmd_compare(const RunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto started = Clock::now();
    const auto spec = resolve_spec(options);
    const auto rows = compare_total_utility(spec);
    emit("compare", options, spec, compare_csv(rows), started, out);
    return kOk;
  });
}

}  // namespace mcpc::cli
