#pragma once

#include "jch/basis.hpp"
#include "jch/random.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace jch {

/// Per-site atom-photon couplings g_i and hopping J (energy unit).
struct CouplingProfile {
  enum class Source { clean, disordered };

  std::vector<double> g;
  double J = 1.0;
  Source source = Source::clean;
  double strength = 0.0;  // g_cl for clean, D for disordered
  std::uint64_t seed = 0;
  std::uint64_t realization = 0;

  int sites() const { return static_cast<int>(g.size()); }
};

/// g_i = g_cl on every site.
CouplingProfile clean_profile(int sites, double g_cl, double J = 1.0);

/// g_i i.i.d. uniform on [0, D], consuming `sites` draws from the stream.
CouplingProfile sample_couplings(double D, int sites, RandomStream &stream, double J = 1.0);

/// Real symmetric matrix over a sector basis, or over its antisymmetric
/// subspace when `subspace` is set (then the matrix is V^T M V).
struct HermitianOperator {
  BasisPtr basis;
  std::shared_ptr<const AntisymmetricSubspace> subspace;
  Eigen::SparseMatrix<double> matrix;
  std::string label;

  Index dimension() const { return matrix.rows(); }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix); }
};

/// H = sum_i g_i (a_i s_i^+ + h.c.) - J sum_{i<L} (a_i^dag a_{i+1} + h.c.), open chain.
HermitianOperator build_hamiltonian(const BasisPtr &basis, const CouplingProfile &profile);

/// Uniform-coupling Hamiltonian, optionally projected onto the reflection-odd subspace.
HermitianOperator build_clean_hamiltonian(const BasisPtr &basis, double g_cl, double J = 1.0,
                                          std::shared_ptr<const AntisymmetricSubspace> subspace = {});

/// V^T O V for an operator on the full sector.
HermitianOperator project(const HermitianOperator &op,
                          std::shared_ptr<const AntisymmetricSubspace> subspace);

struct Observable {
  enum class Kind { site_occupancy, atom_occupancy, photon_occupancy, kinetic };
  Kind kind = Kind::kinetic;
  int site = 0;  // 1-based; unused for kinetic

  static Observable site_occupancy(int site) { return {Kind::site_occupancy, site}; }
  static Observable atom_occupancy(int site) { return {Kind::atom_occupancy, site}; }
  static Observable photon_occupancy(int site) { return {Kind::photon_occupancy, site}; }
  static Observable kinetic() { return {Kind::kinetic, 0}; }
  /// N_{L/2}: total excitation on site L/2.
  static Observable half_chain_occupancy(int sites) { return site_occupancy(sites / 2); }

  std::string label() const;
};

/// Occupancies are diagonal; kinetic is (1/L) sum_{i<L} (a_i^dag a_{i+1} + h.c.),
/// so that H(g = 0) = -J L H_kin.
HermitianOperator build_observable(const BasisPtr &basis, const Observable &which);

/// Diagonal of an occupancy observable as a dense vector (cheap path for the
/// diagonal operators used in dynamics and matrix-element statistics).
Eigen::VectorXd observable_diagonal(const SectorBasis &basis, const Observable &which);

/// Coordinate triplets "row col value", one line per stored entry.
void dump_operator(std::ostream &os, const HermitianOperator &op);

}  // namespace jch
