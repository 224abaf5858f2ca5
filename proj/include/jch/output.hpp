#pragma once

#include "jch/ensemble.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace jch {

/// Directory name of one sweep point, e.g. "D_over_J-2" or "g_cl_over_J-0.01".
std::string point_directory(const ExperimentConfig &config, Index point);

/// Files (relative to the run directory) a successful run of `config` writes.
std::vector<std::string> expected_files(const ExperimentConfig &config);

/// Writes every CSV plus metadata.json into `dir` (created if needed) and
/// returns the relative paths written. CSV bodies depend only on the config;
/// wall-clock data goes to the JSON sidecar.
std::vector<std::string> write_outputs(const ExperimentResult &result, const std::filesystem::path &dir);

/// Formatting used for every floating-point CSV field (round-trips exactly).
std::string format_double(double value);

}  // namespace jch
