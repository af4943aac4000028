#pragma once

// Artifact serialization: CSV tables and JSON reports, every file stamped
// with the canonical config hash and the master seed.  All text output uses
// UTF-8, '\n' line endings, and %.17g doubles (lossless round-trip).

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dgff/extremes.hpp"
#include "dgff/fields.hpp"
#include "dgff/lqg.hpp"
#include "dgff/stats.hpp"

namespace dgff {

std::string format_double(double value);  // %.17g

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t value);

// Stamp embedded as a leading comment line in CSV files and as fields in
// JSON documents.
struct OutputMeta {
  std::string config_hash;
  std::uint64_t seed = 0;
};

// Header: replica,x,y,centered_height.  One row per atom; replica is the
// point set's stream id; x,y are the lattice positions scaled into the unit
// domain.
void write_extremal_csv(const std::filesystem::path& path,
                        const std::vector<ExtremalPointSet>& sets,
                        const OutputMeta& meta);

// Header: cell_x,cell_y,mass.
void write_grid_measure_csv(const std::filesystem::path& path,
                            const GridMeasure& measure,
                            const OutputMeta& meta);

// Header: replica,x,y,value.  Lattice fields use embedded positions.
void write_field_csv(const std::filesystem::path& path,
                     const std::vector<FieldSample>& fields,
                     const OutputMeta& meta);

// Header: name,value.  One row per named scalar.
void write_named_values_csv(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, double>>& rows,
    const OutputMeta& meta);

// One JSON object per report with exactly the keys
// {estimator, params, estimate, stderr, tolerance, pass}.
std::string stat_report_to_json(const StatReport& report);
StatReport stat_report_from_json(const std::string& text);

void write_stat_reports_json(const std::filesystem::path& path,
                             const std::vector<StatReport>& reports,
                             const OutputMeta& meta);

// Run manifest: inputs, environment, artifacts, and reports of one run.
struct ResultRecord {
  std::string config_hash;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string experiment;
  std::string artifact_version;
  double wall_seconds = 0.0;
  std::vector<StatReport> reports;
  std::vector<std::string> output_files;
};

void write_result_record(const std::filesystem::path& path,
                         const ResultRecord& record);
ResultRecord read_result_record(const std::filesystem::path& path);

}  // namespace dgff
