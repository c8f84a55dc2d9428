#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "peach/experiment.hpp"

namespace peach {

/// Column order of the CSV output; stable across releases.
const std::vector<std::string>& csv_columns();

/// Header plus one line per row. Absent optional fields are empty; floats use
/// 9 significant digits.
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);

/// Same rows as an array of objects plus the run configuration.
void write_json(std::ostream& out, const ExperimentConfig& cfg, const std::vector<ResultRow>& rows);

/// Writes `csv_path` and the JSON export next to it (extension replaced by
/// .json). Throws std::runtime_error on filesystem failures.
void write_outputs(const std::filesystem::path& csv_path, const ExperimentConfig& cfg,
                   const std::vector<ResultRow>& rows);

/// printf("%.9g").
std::string format_real(double v);

}  // namespace peach
