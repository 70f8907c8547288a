#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "mcpc/game.hpp"
#include "mcpc/montecarlo.hpp"

namespace mcpc {

/// Flat `key = value` experiment file. `#` starts a comment; unknown keys,
/// duplicate keys and badly typed values raise ParseError with the line number.
///
///   users = 2
///   processing_gain = 16
///   sweep_parameter = processing_gain
///   sweep = 8, 16, 32
ExperimentSpec parse_config(std::istream& in);
ExperimentSpec load_config(const std::filesystem::path& path);

/// Inverse of parse_config: every key written explicitly, numbers at full precision.
std::string format_config(const ExperimentSpec& spec);

/// K rows x D columns of comma-separated positive gains; blank and `#` lines skipped.
ChannelMatrix parse_channels(std::istream& in);
ChannelMatrix load_channels(const std::filesystem::path& path);

/// Decimal with 9 significant digits.
std::string format_number(double value);

/// 10 log10(x) with 2 decimals.
std::string format_db(double value);

std::string_view to_string(SweepParameter parameter);

}  // namespace mcpc
