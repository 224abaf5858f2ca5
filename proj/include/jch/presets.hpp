#pragma once

#include "jch/config.hpp"

#include <optional>
#include <string>
#include <vector>

namespace jch {

enum class Scale { desk, paper };

Scale parse_scale(const std::string &name);
std::string to_string(Scale scale);

/// A named bundle of runs regenerating the data behind one figure. Each run
/// writes into <root>/<preset>/<run name>/.
struct FigurePreset {
  std::string name;
  std::string description;
  Scale scale = Scale::desk;
  std::vector<ExperimentConfig> runs;

  /// Every file (relative to <root>/<preset>) a successful run produces.
  std::vector<std::string> manifest() const;
};

std::vector<std::string> preset_names();

/// Throws DomainError for an unknown name.
FigurePreset make_preset(const std::string &name, Scale scale = Scale::desk);

struct PresetOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<Index> samples;  // disordered runs only
  std::optional<int> workers;
  std::optional<double> memory_cap_mb;
};

/// Applies command-line overrides; convergence counts above the new sample count
/// are dropped.
void apply_overrides(ExperimentConfig &config, const PresetOverrides &overrides);

}  // namespace jch
