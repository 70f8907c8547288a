#include "mcpc/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace mcpc {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string strip_comment(const std::string& line) { return line.substr(0, line.find('#')); }

template <typename T>
T parse_integer(const std::string& text, const std::string& key, std::size_t line) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("'" + key + "' expects an integer, got '" + text + "'", line);
  }
  return value;
}

double parse_real(const std::string& text, const std::string& what, std::size_t line) {
  // strtod rather than from_chars: libstdc++ 11 lacks floating from_chars on some targets.
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(value)) {
    throw ParseError(what + " expects a finite number, got '" + text + "'", line);
  }
  return value;
}

int parse_positive_int(const std::string& text, const std::string& key, std::size_t line) {
  const int value = parse_integer<int>(text, key, line);
  if (value < 1) throw ParseError("'" + key + "' must be positive", line);
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

using Setter = std::function<void(ExperimentSpec&, const std::string&, std::size_t)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"users", [](ExperimentSpec& s, const std::string& v, std::size_t n) {
         s.base.users = static_cast<std::size_t>(parse_positive_int(v, "users", n));
       }},
      {"carriers", [](ExperimentSpec& s, const std::string& v, std::size_t n) {
         s.base.carriers = static_cast<std::size_t>(parse_positive_int(v, "carriers", n));
       }},
      {"processing_gain", [](ExperimentSpec& s, const std::string& v, std::size_t n) {
         s.base.processing_gain = parse_positive_int(v, "processing_gain", n);
       }},
      {"noise_power", [](ExperimentSpec& s, const std::string& v, std::size_t n) {
         s.base.noise_power = parse_real(v, "'noise_power'", n);
       }},
      {"p_max", [](ExperimentSpec& s, const std::string& v, std::size_t n) {
         s.base.p_max = parse_real(v, "'p_max'", n);
       }},
      {"info_bits", [](ExperimentSpec& s, const std::string& v, std::size_t n) {
         s.base.info_bits = parse_real(v, "'info_bits'", n);
       }},
      {"total_bits", [](ExperimentSpec& s, const std::string& v, std::size_t n) {
         s.base.total_bits = parse_real(v, "'total_bits'", n);
       }},
      {"rate", [](ExperimentSpec& s, const std::string& v, std::size_t n) {
         s.base.rate = parse_real(v, "'rate'", n);
       }},
      {"efficiency_exponent", [](ExperimentSpec& s, const std::string& v, std::size_t n) {
         s.base.efficiency_exponent = parse_positive_int(v, "efficiency_exponent", n);
       }},
      {"trials", [](ExperimentSpec& s, const std::string& v, std::size_t n) {
         s.trials = parse_integer<std::size_t>(v, "trials", n);
       }},
      {"max_rounds", [](ExperimentSpec& s, const std::string& v, std::size_t n) {
         s.max_rounds = parse_positive_int(v, "max_rounds", n);
       }},
      {"tolerance", [](ExperimentSpec& s, const std::string& v, std::size_t n) {
         s.tolerance = parse_real(v, "'tolerance'", n);
       }},
      {"seed", [](ExperimentSpec& s, const std::string& v, std::size_t n) {
         s.seed = parse_integer<std::uint64_t>(v, "seed", n);
       }},
      {"threads", [](ExperimentSpec& s, const std::string& v, std::size_t n) {
         s.threads = parse_integer<unsigned>(v, "threads", n);
       }},
      {"sweep_parameter", [](ExperimentSpec& s, const std::string& v, std::size_t n) {
         if (v == "processing_gain") {
           s.sweep_parameter = SweepParameter::ProcessingGain;
         } else if (v == "users") {
           s.sweep_parameter = SweepParameter::Users;
         } else {
           throw ParseError("'sweep_parameter' must be processing_gain or users, got '" + v + "'", n);
         }
       }},
      {"sweep", [](ExperimentSpec& s, const std::string& v, std::size_t n) {
         s.sweep.clear();
         if (v.empty()) return;
         for (const auto& item : split(v, ',')) s.sweep.push_back(parse_positive_int(item, "sweep", n));
       }},
  };
  return table;
}

}  // namespace

ExperimentSpec parse_config(std::istream& in) {
  ExperimentSpec spec;
  std::set<std::string> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ParseError("unknown key '" + key + "'", line_no);
    if (!seen.insert(key).second) throw ParseError("duplicate key '" + key + "'", line_no);
    it->second(spec, value, line_no);
  }
  try {
    spec.validate();
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid configuration: ") + e.what());
  }
  return spec;
}

ExperimentSpec load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path.string());
  try {
    return parse_config(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string format_config(const ExperimentSpec& spec) {
  auto real = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream out;
  out << "users = " << spec.base.users << '\n'
      << "carriers = " << spec.base.carriers << '\n'
      << "processing_gain = " << spec.base.processing_gain << '\n'
      << "noise_power = " << real(spec.base.noise_power) << '\n'
      << "p_max = " << real(spec.base.p_max) << '\n'
      << "info_bits = " << real(spec.base.info_bits) << '\n'
      << "total_bits = " << real(spec.base.total_bits) << '\n'
      << "rate = " << real(spec.base.rate) << '\n'
      << "efficiency_exponent = " << spec.base.efficiency_exponent << '\n'
      << "trials = " << spec.trials << '\n'
      << "max_rounds = " << spec.max_rounds << '\n'
      << "tolerance = " << real(spec.tolerance) << '\n'
      << "seed = " << spec.seed << '\n'
      << "threads = " << spec.threads << '\n'
      << "sweep_parameter = " << to_string(spec.sweep_parameter) << '\n'
      << "sweep = ";
  for (std::size_t i = 0; i < spec.sweep.size(); ++i) out << (i ? ", " : "") << spec.sweep[i];
  out << '\n';
  return out.str();
}

ChannelMatrix parse_channels(std::istream& in) {
  std::vector<double> values;
  std::size_t carriers = 0;
  std::size_t users = 0;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (carriers == 0) {
      carriers = fields.size();
    } else if (fields.size() != carriers) {
      throw ParseError("expected " + std::to_string(carriers) + " gains, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    for (std::size_t f = 0; f < fields.size(); ++f) {
      const double h = parse_real(fields[f], "field " + std::to_string(f + 1), line_no);
      if (!(h > 0.0)) {
        throw ParseError("field " + std::to_string(f + 1) + ": gain must be positive", line_no);
      }
      values.push_back(h);
    }
    ++users;
  }
  if (users == 0) throw ParseError("channel file has no rows");
  return ChannelMatrix(users, carriers, values);
}

ChannelMatrix load_channels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open channel file " + path.string());
  try {
    return parse_channels(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

std::string format_db(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 10.0 * std::log10(value));
  return buf;
}

std::string_view to_string(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::ProcessingGain: return "processing_gain";
    case SweepParameter::Users: return "users";
  }
  return "unknown";
}

}  // namespace mcpc
