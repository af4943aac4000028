#pragma once

// Experiment configuration: typed view of the JSON config file, canonical
// serialization for hashing, and the domain factory.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dgff/errors.hpp"
#include "dgff/geometry.hpp"

namespace dgff {

struct ExperimentConfig {
  std::string experiment;  // sample | extrema | stats | lqg | kernels
  std::string domain_shape = "square";
  std::map<std::string, double> domain_params;
  std::vector<int> scales;
  std::size_t replicas = 1;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string output_dir = ".";
  std::map<std::string, double> params;        // numeric knobs
  std::map<std::string, std::string> options;  // string knobs
};

// Parses and validates; ConfigInvalid messages name the offending field
// path (e.g. "domain.shape: unknown value 'blob'").
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Deterministic canonical form (sorted keys, %.17g numbers); equal configs
// produce equal strings regardless of input formatting.
std::string canonical_config_string(const ExperimentConfig& config);

// FNV-1a hash of the canonical form, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

// Shapes: square (side, x0, y0), rectangle (x0, y0, x1, y1),
// disc (cx, cy, radius), square_minus_cross (width),
// square_minus_slit (slit_x, slit_y0, slit_y1).
ContinuumDomain domain_from_config(const ExperimentConfig& config);

}  // namespace dgff
