#pragma once

#include "jch/basis.hpp"
#include "jch/random.hpp"
#include "jch/spectral.hpp"

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace jch {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

enum class KeptHalf { left, right };

/// Half-chain factorization tables for one sector: sites 1..L/2 on the left.
///
/// Because excitations are conserved, a sector state with k excitations on the
/// left factorizes into (left config with k) x (right config with N-k), and every
/// such pair is a sector state. Amplitudes reshape into one dense left x right
/// block per k.
class Bipartition {
 public:
  struct Block {
    int left_excitations = 0;
    Index left_size = 0;
    Index right_size = 0;
    std::vector<Index> states;  // column-major left_size x right_size -> basis index
  };

  explicit Bipartition(BasisPtr basis);

  const SectorBasis &basis() const { return *basis_; }
  const BasisPtr &basis_ptr() const { return basis_; }
  int left_sites() const { return basis_->sites() / 2; }
  const std::vector<Block> &blocks() const { return blocks_; }
  /// Number of local configurations of the kept half (all excitation numbers).
  Index half_dimension(KeptHalf half) const;

 private:
  BasisPtr basis_;
  std::vector<Block> blocks_;
};

/// rho over the kept half, block diagonal by the kept half's excitation number
/// (blocks ordered by left excitation number k = 0..N).
template <typename Scalar>
struct ReducedDensityMatrix {
  KeptHalf kept = KeptHalf::left;
  std::vector<Matrix<Scalar>> blocks;

  Index dimension() const;
  Scalar trace() const;
  Matrix<Scalar> dense() const;
  /// All eigenvalues, ascending.
  Eigen::VectorXd eigenvalues() const;
};

template <typename Scalar>
ReducedDensityMatrix<Scalar> reduced_density_matrix(const Bipartition &cut,
                                                    const Eigen::Ref<const Vector<Scalar>> &state,
                                                    KeptHalf kept = KeptHalf::left);

/// -sum lambda ln lambda over eigenvalues above 1e-14 (nats).
template <typename Scalar>
double entropy(const ReducedDensityMatrix<Scalar> &rho);

/// Half-chain entropy without forming rho: per block, the smaller of M M^dag
/// and M^dag M has the same nonzero spectrum.
template <typename Scalar>
double entanglement_entropy(const Bipartition &cut, const Eigen::Ref<const Vector<Scalar>> &state);

inline constexpr double kEigenvalueFloor = 1e-14;
inline constexpr double kNormTolerance = 1e-10;

struct PageEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  Index samples = 0;
};

/// Monte-Carlo mean half-chain entropy of Haar-random (complex Gaussian,
/// normalized) vectors inside the sector.
PageEstimate page_value(const Bipartition &cut, Index samples, RandomStream &stream);

/// Entropies of the eigenstates in the window, in window order.
std::vector<double> eigenstate_entropies(const Bipartition &cut, const SpectralDecomposition &spec,
                                         const SpectralWindow &window);

struct EntropyStatistics {
  std::vector<double> per_realization;  // window-mean entropy per realization
  double mean = 0.0;
  double deviation = 0.0;  // sample standard deviation across realizations; NaN for one realization
  PageEstimate page;

  double normalized_mean() const { return mean / page.mean; }
  double normalized_deviation() const { return deviation / page.mean; }
};

EntropyStatistics entropy_statistics(std::span<const double> per_realization_means,
                                     const PageEstimate &page = {});

}  // namespace jch
