#pragma once

#include "jch/dynamics.hpp"
#include "jch/spectral.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace jch {

enum class Mode { disordered, clean };

struct GridSettings {
  TimeGrid::Spacing spacing = TimeGrid::Spacing::logarithmic;
  double t_min = 0.1;
  double t_max = 1.0e6;
  int points_per_decade = 40;
  Index linear_points = 201;
  double window_dt = 0.25;

  TimeGrid build() const;
};

struct Tasks {
  bool spectrum = true;
  bool entanglement = false;
  bool dynamics = false;
  bool eth = false;

  bool needs_vectors() const { return entanglement || eth || dynamics; }
};

/// One ensemble run: fixed (L, N, mode), a sweep over the coupling parameter
/// (D/J for disordered, g_cl/J for clean), `samples` realizations per point.
struct ExperimentConfig {
  std::string name = "run";
  int L = 6;
  int N = -1;  // -1: L/2
  double J = 1.0;
  Mode mode = Mode::disordered;
  std::vector<double> sweep{2.0};
  Index samples = 0;  // 0: default schedule for L
  std::uint64_t seed = 20240601;
  Tasks tasks;

  SpectralWindow::Kind level_window = SpectralWindow::Kind::middle_third;
  double degeneracy_floor = 1e-12;
  bool write_eigenvalues = true;

  SpectralWindow::Kind entropy_window = SpectralWindow::Kind::middle_third;
  Index page_samples = 1000;

  GridSettings grid;
  InitialStateSpec::Kind initial_state = InitialStateSpec::Kind::photon_odd_sites;

  SpectralWindow::Kind eth_diagonal_window = SpectralWindow::Kind::middle_four_fifths;
  double delta_omega = 0.002;
  double eps_center = 0.5;
  double eps_half_width = 0.005;
  Index min_bin_count = 10;

  std::vector<Index> convergence_counts;  // empty: no convergence sweep

  std::string output_dir = "out";
  int workers = 0;  // 0: available parallelism
  double memory_cap_mb = 4096.0;

  int excitations() const { return N < 0 ? L / 2 : N; }
  /// Samples actually run: schedule default when unset, always 1 in clean mode.
  Index effective_samples() const;
  std::string parameter_name() const { return mode == Mode::clean ? "g_cl_over_J" : "D_over_J"; }
};

/// 1000 (L <= 6), 400 (L = 8), 50 (L >= 10).
Index default_samples(int L);

struct ConfigError {
  std::string field;
  std::string message;
};

/// Every problem found, not just the first.
std::vector<ConfigError> validate(const ExperimentConfig &config);

struct ParsedConfig {
  ExperimentConfig config;
  std::vector<ConfigError> errors;  // parse and validation errors together
};

/// `key = value` lines, `#` comments, comma-separated lists.
ParsedConfig parse_config(const std::string &text);
ParsedConfig load_config(const std::string &path);

/// Canonical text form; parse_config(to_text(c)) reproduces c.
std::string to_text(const ExperimentConfig &config);

std::string to_string(Mode mode);
std::string to_string(SpectralWindow::Kind kind);
std::string to_string(TimeGrid::Spacing spacing);

}  // namespace jch
