#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "exlab/cli/config.hpp"
#include "exlab/excitation/bounds.hpp"
#include "exlab/excitation/index.hpp"

namespace exlab::cli {

struct RunResult {
  ExperimentConfig config;  // resolved
  excitation::EnergyCurve curve;
  std::vector<excitation::BoundCheckRow> bounds;  // sorted by lambda, then check name
  nlohmann::json summary;
  double wall_seconds = 0.0;
};

// Runs a resolved configuration. No files are written.
RunResult run(const ExperimentConfig& resolved);

// energy_curve.csv, bounds.csv, summary.json, and timing.json (wall clock
// kept out of summary.json so the summary is reproducible bit for bit).
void write_outputs(const RunResult& result, const std::filesystem::path& dir);

// %.17g, with "inf", "-inf", "nan" for non-finite values.
std::string format_double(double value);
// RFC 4180 field: quoted when it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view text);

void write_energy_curve_csv(std::ostream& out, const excitation::EnergyCurve& curve);
void write_bounds_csv(std::ostream& out, const std::vector<excitation::BoundCheckRow>& rows);

std::string code_version();

}  // namespace exlab::cli
