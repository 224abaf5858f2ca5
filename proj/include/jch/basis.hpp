#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jch {

using Index = Eigen::Index;

/// Raised for violated preconditions on physical parameters or sector membership.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One Fock basis vector |n> = prod_i |n_c_i, n_a_i>_i. Sites are 0-based here.
struct FockConfiguration {
  std::vector<int> photons;
  std::vector<int> atoms;  // 0 = ground (g), 1 = excited (e)

  int sites() const { return static_cast<int>(photons.size()); }
  int excitations() const;
  int site_excitation(int site) const { return photons[site] + atoms[site]; }

  bool operator==(const FockConfiguration &) const = default;
};

/// Formats as "n_c_1 a_1 | n_c_2 a_2 | ..." with a in {g, e}.
std::string to_string(const FockConfiguration &cfg);

/// Builds a configuration from (photons, atom) pairs, e.g. {{1,0},{0,0}} = |1,g>|0,g>.
FockConfiguration make_configuration(const std::vector<std::pair<int, int>> &sites);

/// Fixed-excitation sector of an L-site JCH chain.
///
/// States are stored as packed keys (5 bits per site, site 1 most significant,
/// field = n_c << 1 | n_a) sorted in descending order, which is descending
/// lexicographic order over (n_c_1, n_a_1, ..., n_c_L, n_a_L). The first state
/// therefore carries all N photons on site 1. Rank is a binary search.
class SectorBasis {
 public:
  static constexpr int kMaxSites = 12;
  static constexpr int kMaxExcitations = 15;

  SectorBasis(int sites, int excitations);

  int sites() const { return sites_; }
  int excitations() const { return excitations_; }
  Index size() const { return static_cast<Index>(keys_.size()); }

  FockConfiguration unrank(Index index) const;
  /// Throws DomainError naming the violated constraint.
  Index rank(const FockConfiguration &cfg) const;
  std::optional<Index> find(const FockConfiguration &cfg) const;

  int photons(Index index, int site) const {
    return static_cast<int>((keys_[index] >> shift(site)) >> 1) & 0xF;
  }
  int atom(Index index, int site) const {
    return static_cast<int>((keys_[index] >> shift(site)) & 1U);
  }
  std::uint64_t key(Index index) const { return keys_[index]; }
  std::optional<Index> find_key(std::uint64_t key) const;

  std::uint64_t pack(const FockConfiguration &cfg) const;
  static std::uint64_t field(int photons, int atom) {
    return (static_cast<std::uint64_t>(photons) << 1) | static_cast<std::uint64_t>(atom);
  }
  int shift(int site) const { return 5 * (sites_ - 1 - site); }

  bool operator==(const SectorBasis &other) const {
    return sites_ == other.sites_ && excitations_ == other.excitations_;
  }

 private:
  int sites_;
  int excitations_;
  std::vector<std::uint64_t> keys_;
};

using BasisPtr = std::shared_ptr<const SectorBasis>;

BasisPtr enumerate_basis(int sites, int excitations);

/// sum_{s=0}^{min(N,L)} C(L,s) C(N-s+L-1, L-1): s counts excited atoms.
std::uint64_t sector_dimension(int sites, int excitations);

/// "index: n_c_1 a_1 | n_c_2 a_2 | ..." one line per state.
void dump_basis(std::ostream &os, const SectorBasis &basis);

enum class SymmetryKind { chiral, reflection, composite };

/// A signed permutation on basis indices: |i> -> signs[i] |permutation[i]>.
struct SymmetryAction {
  SymmetryKind kind = SymmetryKind::composite;
  std::vector<Index> permutation;
  std::vector<int> signs;

  Index size() const { return static_cast<Index>(permutation.size()); }
};

/// Gamma = prod_{j even} exp(i pi n_c_j) prod_{j odd} sigma^z_j, sites 1-based,
/// sigma^z|e> = +|e>, sigma^z|g> = -|g>. Diagonal in the Fock basis.
SymmetryAction chiral_action(const SectorBasis &basis);

/// Site i -> site L+1-i.
SymmetryAction reflection_action(const SectorBasis &basis);

/// outer after inner.
SymmetryAction compose(const SymmetryAction &outer, const SymmetryAction &inner);
bool is_identity(const SymmetryAction &action);

Eigen::SparseMatrix<double> to_matrix(const SymmetryAction &action);

/// Max-abs entry of AB - BA.
double commutator_norm(const SymmetryAction &a, const SymmetryAction &b);

/// Orthonormal basis of the reflection-odd subspace: one column
/// (|i> - |P(i)>)/sqrt(2) per orbit pair i < P(i), ordered by i.
struct AntisymmetricSubspace {
  int sites = 0;
  int excitations = 0;
  Index full_dimension = 0;
  Index fixed_points = 0;
  std::vector<std::pair<Index, Index>> pairs;
  Eigen::SparseMatrix<double> vectors;  // full_dimension x dimension()

  Index dimension() const { return static_cast<Index>(pairs.size()); }
};

AntisymmetricSubspace antisymmetric_projector(const SectorBasis &basis,
                                              const SymmetryAction &reflection);

}  // namespace jch
