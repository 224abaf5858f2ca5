#pragma once

#include "jch/basis.hpp"
#include "jch/operators.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace jch {

/// Ascending eigenvalues and orthonormal eigenvectors. Eigenvectors are always
/// expressed in full-sector coordinates, so a decomposition of a subspace-projected
/// operator has fewer columns than basis states.
struct SpectralDecomposition {
  BasisPtr basis;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // basis->size() x count(), empty when values only
  std::string label;

  Index count() const { return eigenvalues.size(); }
  bool has_vectors() const { return eigenvectors.cols() == eigenvalues.size() && eigenvalues.size() > 0; }
  /// True when the eigenvectors span the whole sector (needed for time evolution).
  bool complete() const { return has_vectors() && eigenvectors.cols() == eigenvectors.rows(); }
};

/// Dense symmetric eigensolver (LAPACK dsyevd).
SpectralDecomposition diagonalize(const HermitianOperator &H, bool vectors = true);

/// Exact solver for operators that anticommute with the chiral action: in the
/// Gamma = +1 / -1 ordering H = [[0, B], [B^T, 0]], so the spectrum is
/// {+-sigma_k(B)} plus |n_+ - n_-| zero modes, eigenvectors (u_k, +-v_k)/sqrt(2).
/// Throws DomainError if any entry of H connects states of equal chiral sign.
SpectralDecomposition diagonalize_chiral(const HermitianOperator &H, const SymmetryAction &chiral,
                                         bool vectors = true);

/// Contiguous index range [begin, end) of an ascending spectrum.
struct SpectralWindow {
  enum class Kind { middle_third, middle_four_fifths, energy_density_range, all };
  Kind kind = Kind::all;
  Index begin = 0;
  Index end = 0;

  Index size() const { return end - begin; }
  bool contains(Index n) const { return n >= begin && n < end; }
};

SpectralWindow middle_third(Index count);
SpectralWindow middle_four_fifths(Index count);
SpectralWindow full_window(Index count);
/// Eigenstates with energy density in [lo, hi].
SpectralWindow energy_density_window(const Eigen::Ref<const Eigen::VectorXd> &eigenvalues, double lo,
                                     double hi);
SpectralWindow make_window(SpectralWindow::Kind kind, const Eigen::Ref<const Eigen::VectorXd> &eigenvalues);

struct LevelStatistics {
  double mean = 0.0;
  std::vector<double> ratios;
  Index degenerate_gaps = 0;  // gaps below the floor; pairs touching them are dropped
};

/// r_n = min(dE_{n+1}/dE_n, dE_n/dE_{n+1}) over consecutive gaps inside the window.
/// Gaps below relative_floor * (E_max - E_min) are treated as degenerate.
LevelStatistics level_spacing_ratio(const Eigen::Ref<const Eigen::VectorXd> &eigenvalues,
                                    const SpectralWindow &window, double relative_floor = 1e-12);

/// eps_n = (E_n - E_min) / (E_max - E_min).
Eigen::VectorXd energy_density(const Eigen::Ref<const Eigen::VectorXd> &eigenvalues);

/// Bytes of dense storage one diagonalization with eigenvectors needs (matrix,
/// eigenvectors and solver workspace).
double dense_memory_estimate(Index dimension);

}  // namespace jch
