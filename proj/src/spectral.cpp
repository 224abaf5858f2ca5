#include "jch/spectral.hpp"

#include <fmt/format.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace jch {

namespace {

void require_finite(const HermitianOperator &H) {
  for (Index k = 0; k < H.matrix.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(H.matrix, k); it; ++it)
      if (!std::isfinite(it.value()))
        throw DomainError(fmt::format("{}: non-finite entry at ({}, {})", H.label, it.row(), it.col()));
}

Eigen::MatrixXd lift(const HermitianOperator &H, const Eigen::MatrixXd &vectors) {
  if (!H.subspace) return vectors;
  return H.subspace->vectors * vectors;
}

}  // namespace

SpectralDecomposition diagonalize(const HermitianOperator &H, bool vectors) {
  require_finite(H);
  const Index n = H.dimension();
  SpectralDecomposition out;
  out.basis = H.basis;
  out.label = H.label;
  out.eigenvalues.resize(n);
  if (n == 0) return out;
  Eigen::MatrixXd a = H.dense();
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L',
                                         static_cast<lapack_int>(n), a.data(),
                                         static_cast<lapack_int>(n), out.eigenvalues.data());
  if (info != 0)
    throw std::runtime_error(fmt::format("{}: dsyevd failed to converge (info={})", H.label, info));
  if (vectors) out.eigenvectors = lift(H, a);
  return out;
}

namespace {

// Full SVD of a column-major matrix; falls back to dgesvd if dgesdd does not converge.
void singular_value_decomposition(Eigen::MatrixXd &b, Eigen::VectorXd &sigma, Eigen::MatrixXd &u,
                                  Eigen::MatrixXd &vt, bool vectors, const std::string &label) {
  const auto rows = static_cast<lapack_int>(b.rows());
  const auto cols = static_cast<lapack_int>(b.cols());
  sigma.resize(std::min(b.rows(), b.cols()));
  if (vectors) {
    u.resize(rows, rows);
    vt.resize(cols, cols);
  }
  const Eigen::MatrixXd backup = b;
  lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, vectors ? 'A' : 'N', rows, cols, b.data(), rows,
                                   sigma.data(), vectors ? u.data() : nullptr, rows,
                                   vectors ? vt.data() : nullptr, cols);
  if (info > 0) {
    b = backup;
    std::vector<double> superb(std::max<std::size_t>(1, sigma.size()));
    info = LAPACKE_dgesvd(LAPACK_COL_MAJOR, vectors ? 'A' : 'N', vectors ? 'A' : 'N', rows, cols,
                          b.data(), rows, sigma.data(), vectors ? u.data() : nullptr, rows,
                          vectors ? vt.data() : nullptr, cols, superb.data());
  }
  if (info != 0)
    throw std::runtime_error(fmt::format("{}: singular value decomposition failed (info={})", label, info));
}

}  // namespace

SpectralDecomposition diagonalize_chiral(const HermitianOperator &H, const SymmetryAction &chiral,
                                         bool vectors) {
  if (H.subspace) throw DomainError("diagonalize_chiral works on the full sector only");
  if (chiral.size() != H.dimension())
    throw DomainError(fmt::format("chiral action on {} states, operator on {}", chiral.size(),
                                  H.dimension()));
  require_finite(H);

  const Index n = H.dimension();
  std::vector<Index> block_pos(n);
  std::vector<Index> plus, minus;
  for (Index i = 0; i < n; ++i) {
    if (chiral.permutation[i] != i) throw DomainError("chiral action must be diagonal");
    auto &side = chiral.signs[i] > 0 ? plus : minus;
    block_pos[i] = static_cast<Index>(side.size());
    side.push_back(i);
  }

  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Index>(plus.size()), static_cast<Index>(minus.size()));
  for (Index k = 0; k < H.matrix.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(H.matrix, k); it; ++it) {
      const int sr = chiral.signs[it.row()];
      const int sc = chiral.signs[it.col()];
      if (sr == sc && it.value() != 0.0)
        throw DomainError(fmt::format("{}: entry ({}, {}) connects states of equal chiral sign", H.label,
                                      it.row(), it.col()));
      if (sr > 0) b(block_pos[it.row()], block_pos[it.col()]) = it.value();
    }
  }

  const Index np = b.rows();
  const Index nm = b.cols();
  const Index m = std::min(np, nm);
  const Index zeros = n - 2 * m;

  Eigen::VectorXd sigma;
  Eigen::MatrixXd u, vt;
  if (m > 0) singular_value_decomposition(b, sigma, u, vt, vectors, H.label);

  SpectralDecomposition out;
  out.basis = H.basis;
  out.label = H.label;
  out.eigenvalues.resize(n);
  // sigma is descending: -sigma_0 <= ... <= -sigma_{m-1} <= 0 ... <= sigma_{m-1} <= ... <= sigma_0
  for (Index k = 0; k < m; ++k) {
    out.eigenvalues[k] = -sigma[k];
    out.eigenvalues[n - 1 - k] = sigma[k];
  }
  for (Index z = 0; z < zeros; ++z) out.eigenvalues[m + z] = 0.0;
  if (!vectors) return out;

  out.eigenvectors = Eigen::MatrixXd::Zero(n, n);
  const double amp = 1.0 / std::sqrt(2.0);
  for (Index k = 0; k < m; ++k) {
    const Index neg = k;
    const Index pos = n - 1 - k;
    for (Index r = 0; r < np; ++r) {
      out.eigenvectors(plus[r], neg) = amp * u(r, k);
      out.eigenvectors(plus[r], pos) = amp * u(r, k);
    }
    for (Index r = 0; r < nm; ++r) {
      out.eigenvectors(minus[r], neg) = -amp * vt(k, r);
      out.eigenvectors(minus[r], pos) = amp * vt(k, r);
    }
  }
  // null space of B (or B^T) on the larger chiral side
  for (Index z = 0; z < zeros; ++z) {
    const Index col = m + z;
    if (np > nm) {
      for (Index r = 0; r < np; ++r) out.eigenvectors(plus[r], col) = u(r, m + z);
    } else {
      for (Index r = 0; r < nm; ++r) out.eigenvectors(minus[r], col) = vt(m + z, r);
    }
  }
  return out;
}

SpectralWindow middle_third(Index count) {
  SpectralWindow w;
  w.kind = SpectralWindow::Kind::middle_third;
  w.begin = count / 3;
  w.end = count - count / 3;
  return w;
}

SpectralWindow middle_four_fifths(Index count) {
  SpectralWindow w;
  w.kind = SpectralWindow::Kind::middle_four_fifths;
  w.begin = count / 10;
  w.end = count - count / 10;
  return w;
}

SpectralWindow full_window(Index count) {
  SpectralWindow w;
  w.kind = SpectralWindow::Kind::all;
  w.begin = 0;
  w.end = count;
  return w;
}

SpectralWindow energy_density_window(const Eigen::Ref<const Eigen::VectorXd> &eigenvalues, double lo,
                                     double hi) {
  const Eigen::VectorXd eps = energy_density(eigenvalues);
  SpectralWindow w;
  w.kind = SpectralWindow::Kind::energy_density_range;
  w.begin = eps.size();
  w.end = eps.size();
  for (Index n = 0; n < eps.size(); ++n) {
    if (eps[n] >= lo && w.begin == eps.size()) w.begin = n;
    if (eps[n] <= hi) w.end = n + 1;
  }
  if (w.end < w.begin) w.end = w.begin;
  return w;
}

SpectralWindow make_window(SpectralWindow::Kind kind, const Eigen::Ref<const Eigen::VectorXd> &eigenvalues) {
  switch (kind) {
    case SpectralWindow::Kind::middle_third: return middle_third(eigenvalues.size());
    case SpectralWindow::Kind::middle_four_fifths: return middle_four_fifths(eigenvalues.size());
    case SpectralWindow::Kind::all: return full_window(eigenvalues.size());
    case SpectralWindow::Kind::energy_density_range:
      throw DomainError("energy-density windows need explicit bounds");
  }
  return full_window(eigenvalues.size());
}

LevelStatistics level_spacing_ratio(const Eigen::Ref<const Eigen::VectorXd> &eigenvalues,
                                    const SpectralWindow &window, double relative_floor) {
  if (window.begin < 0 || window.end > eigenvalues.size() || window.size() < 3)
    throw DomainError(fmt::format("level-spacing window [{}, {}) needs >= 3 eigenvalues", window.begin,
                                  window.end));
  const double bandwidth = eigenvalues.maxCoeff() - eigenvalues.minCoeff();
  const double floor = relative_floor * bandwidth;
  LevelStatistics stats;
  std::vector<double> gaps;
  for (Index n = window.begin; n + 1 < window.end; ++n) {
    gaps.push_back(eigenvalues[n + 1] - eigenvalues[n]);
    if (gaps.back() < floor) ++stats.degenerate_gaps;
  }
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < gaps.size(); ++k) {
    const double a = gaps[k];
    const double b = gaps[k + 1];
    if (a < floor || b < floor || a <= 0.0 || b <= 0.0) continue;
    const double r = std::min(a / b, b / a);
    stats.ratios.push_back(r);
    sum += r;
  }
  stats.mean = stats.ratios.empty() ? std::numeric_limits<double>::quiet_NaN()
                                    : sum / static_cast<double>(stats.ratios.size());
  return stats;
}

Eigen::VectorXd energy_density(const Eigen::Ref<const Eigen::VectorXd> &eigenvalues) {
  if (eigenvalues.size() == 0) throw DomainError("energy density of an empty spectrum");
  const double lo = eigenvalues.minCoeff();
  const double hi = eigenvalues.maxCoeff();
  if (!(hi > lo)) throw DomainError("energy density undefined for a fully degenerate spectrum");
  return (eigenvalues.array() - lo) / (hi - lo);
}

double dense_memory_estimate(Index dimension) {
  const double d = static_cast<double>(dimension);
  // matrix copy + eigenvectors + LAPACK divide-and-conquer workspace (~ 2 n^2)
  return 8.0 * d * d * 4.0;
}

}  // namespace jch
