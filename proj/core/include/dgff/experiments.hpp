#pragma once

// Experiment orchestration: executes a named experiment from a validated
// configuration, writes stamped CSV/JSON artifacts into the resolved output
// directory, and returns the run manifest.

#include <filesystem>

#include "dgff/config.hpp"
#include "dgff/io.hpp"

namespace dgff {

// The environment variable DGFFLAB_OUTPUT_DIR overrides the config's
// output_dir.
std::filesystem::path resolve_output_dir(const ExperimentConfig& config);

// Version string recorded in every manifest.
std::string artifact_version();

// Executes config.experiment (sample | extrema | stats | lqg | kernels),
// writes the experiment's CSV artifacts plus reports.json and record.json,
// and returns the manifest.  All data artifacts are deterministic functions
// of (config, seed, threads); only the manifest's wall_seconds field varies
// between identical runs.
ResultRecord run_experiment(const ExperimentConfig& config);

}  // namespace dgff
