#pragma once

#include <filesystem>
#include <istream>
#include <string_view>

#include "peach/experiment.hpp"

namespace peach {

/// Sets one `key = value` pair. Throws InvalidConfig for unknown keys or
/// malformed values.
///
/// Lists are comma-separated; numeric list items may be ranges `first:last:step`.
/// Complex coefficients are written `magnitude:phase_over_pi`, interferers as
/// `t_coeff r_coeff` pairs separated by commas.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Parses a config stream for `scenario`: starts from the scenario defaults,
/// applies keys outside any section, then keys under `[<scenario name>]`.
/// Sections for other scenarios are skipped. Errors carry `source:line`.
ExperimentConfig parse_config(std::istream& in, Scenario scenario, std::string_view source);

ExperimentConfig load_config(const std::filesystem::path& path, Scenario scenario);

}  // namespace peach
