#pragma once

#include "jch/basis.hpp"
#include "jch/entanglement.hpp"
#include "jch/spectral.hpp"

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace jch {

using ComplexVector = Vector<std::complex<double>>;
using ComplexMatrix = Matrix<std::complex<double>>;

struct InitialStateSpec {
  enum class Kind { photon_odd_sites, atom_odd_sites, mixed_two_site, explicit_configuration };
  Kind kind = Kind::photon_odd_sites;
  FockConfiguration configuration;
};

std::string to_string(InitialStateSpec::Kind kind);
InitialStateSpec::Kind parse_initial_state_kind(const std::string &name);

/// photon-odd-sites: |1,g> on odd sites, |0,g> on even.
/// atom-odd-sites:   |0,e> on odd sites, |0,g> on even.
/// mixed-two-site:   |1,e> on sites 1 and 5, |0,g> elsewhere (L = 8, N = 4 only).
InitialStateSpec make_initial_state(InitialStateSpec::Kind kind, int sites, int excitations);
InitialStateSpec explicit_initial_state(const FockConfiguration &cfg);

/// Basis vector of the initial configuration.
ComplexVector initial_vector(const SectorBasis &basis, const InitialStateSpec &spec);

/// Strictly increasing sample times (units of 1/J).
struct TimeGrid {
  enum class Spacing { logarithmic, linear, windowed };
  Spacing spacing = Spacing::logarithmic;
  std::vector<double> times;

  /// Optional t = 0, then points_per_decade log-spaced points from t_min to t_max inclusive.
  static TimeGrid logarithmic(double t_min, double t_max, int points_per_decade, bool include_zero = true);
  static TimeGrid linear(double t_begin, double t_end, Index points);
  /// Three windows [start, start + width) sampled with step dt each.
  static TimeGrid windowed(const std::vector<double> &starts, double width, double dt);
  /// 0 <= t < 25, 1000 <= t < 1025, 1e6 <= t < 1e6 + 25.
  static TimeGrid occupation_windows(double dt = 0.25);
};

/// |psi(t)> = sum_n exp(-i E_n t) <n|psi0> |n>, one column per grid time.
ComplexMatrix evolve(const SpectralDecomposition &spec, const Eigen::Ref<const ComplexVector> &psi0,
                     const TimeGrid &grid);
/// Single time; t may be negative.
ComplexVector propagate(const SpectralDecomposition &spec, const Eigen::Ref<const ComplexVector> &psi0, double t);

std::vector<double> ee_trajectory(const Bipartition &cut, const SpectralDecomposition &spec,
                                  const Eigen::Ref<const ComplexVector> &psi0, const TimeGrid &grid);

/// <n_c_i>(t) and <n_a_i>(t): times x sites.
struct OccupationTable {
  Eigen::MatrixXd photons;
  Eigen::MatrixXd atoms;
};

OccupationTable occupation_trajectory(const SpectralDecomposition &spec,
                                      const Eigen::Ref<const ComplexVector> &psi0, const TimeGrid &grid);

}  // namespace jch
