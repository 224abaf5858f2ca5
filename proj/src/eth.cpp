#include "jch/eth.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace jch {

MatrixElementTable matrix_elements(const HermitianOperator &O, const SpectralDecomposition &spec,
                                   const SpectralWindow &diagonal_window, const OffDiagonalTarget &target) {
  if (O.subspace) throw DomainError("matrix elements are taken of full-sector operators");
  if (!spec.has_vectors()) throw DomainError("matrix elements need eigenvectors");
  if (!(*O.basis == *spec.basis) || O.dimension() != spec.eigenvectors.rows())
    throw DomainError(fmt::format("observable {} and spectrum {} live on different bases", O.label, spec.label));
  if (diagonal_window.begin < 0 || diagonal_window.end > spec.count())
    throw DomainError("diagonal window outside the spectrum");

  const Eigen::MatrixXd &V = spec.eigenvectors;
  const Eigen::MatrixXd W = O.matrix * V;
  const Eigen::VectorXd eps = energy_density(spec.eigenvalues);

  MatrixElementTable table;
  table.label = O.label;
  for (Index n = diagonal_window.begin; n < diagonal_window.end; ++n)
    table.diagonal.push_back({n, eps[n], V.col(n).dot(W.col(n))});

  const double lo_sum = 2.0 * (target.center - target.half_width);
  const double hi_sum = 2.0 * (target.center + target.half_width);
  const double *e = eps.data();
  for (Index n = 0; n < eps.size(); ++n) {
    // partners m < n with eps_n + eps_m inside [lo_sum, hi_sum]
    const double *first = std::lower_bound(e, e + n, lo_sum - eps[n]);
    const double *last = std::upper_bound(e, e + n, hi_sum - eps[n]);
    for (const double *p = first; p < last; ++p) {
      const Index m = p - e;
      const double eps_bar = 0.5 * (eps[n] + eps[m]);
      if (std::abs(eps_bar - target.center) > target.half_width) continue;
      const double omega = eps[n] - eps[m];
      if (omega < target.degeneracy_floor) {
        ++table.degenerate_pairs;
        continue;
      }
      table.off_diagonal.push_back({n, m, eps_bar, omega, V.col(n).dot(W.col(m))});
    }
  }
  return table;
}

double diag_fluctuations(const MatrixElementTable &table) {
  if (table.diagonal.size() < 2) throw DomainError("diagonal fluctuations need >= 2 entries");
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < table.diagonal.size(); ++k)
    sum += std::abs(std::abs(table.diagonal[k + 1].value) - std::abs(table.diagonal[k].value));
  return sum / static_cast<double>(table.diagonal.size() - 1);
}

void BinSums::add(double omega, double value) {
  Bin &b = bins[static_cast<Index>(std::floor(omega / delta_omega))];
  ++b.count;
  b.sum_abs2 += value * value;
  b.sum_abs += std::abs(value);
  b.sum_value += value;
}

void BinSums::merge(const BinSums &other) {
  if (other.delta_omega != delta_omega) throw DomainError("cannot merge bins of different widths");
  for (const auto &[index, src] : other.bins) {
    Bin &b = bins[index];
    b.count += src.count;
    b.sum_abs2 += src.sum_abs2;
    b.sum_abs += src.sum_abs;
    b.sum_value += src.sum_value;
  }
  degenerate_pairs += other.degenerate_pairs;
}

BinSums accumulate_offdiag(const MatrixElementTable &table, double delta_omega) {
  if (!(delta_omega > 0.0)) throw DomainError("delta_omega must be > 0");
  BinSums sums;
  sums.delta_omega = delta_omega;
  sums.degenerate_pairs = table.degenerate_pairs;
  for (const auto &entry : table.off_diagonal) sums.add(entry.omega, entry.value);
  return sums;
}

BinnedStatistics finalize(const BinSums &sums, Index min_count) {
  BinnedStatistics stats;
  stats.delta_omega = sums.delta_omega;
  for (const auto &[index, b] : sums.bins) {
    if (b.count < min_count || b.count == 0) {
      ++stats.suppressed_bins;
      continue;
    }
    const double n = static_cast<double>(b.count);
    stats.bins.push_back({(static_cast<double>(index) + 0.5) * sums.delta_omega, b.count, b.sum_abs2 / n,
                          b.sum_abs / n, b.sum_value / n});
  }
  return stats;
}

BinnedStatistics binned_offdiag(const MatrixElementTable &table, double delta_omega, Index min_count) {
  if (table.off_diagonal.empty()) throw DomainError("no off-diagonal elements to bin");
  return finalize(accumulate_offdiag(table, delta_omega), min_count);
}

GammaRatio gamma_ratio(const BinnedStatistics &stats) {
  GammaRatio out;
  for (const auto &b : stats.bins) {
    if (!(b.mean_abs > 0.0)) {
      ++out.skipped_bins;
      continue;
    }
    out.omega.push_back(b.omega);
    out.gamma.push_back(b.mean_abs2 / (b.mean_abs * b.mean_abs));
  }
  return out;
}

}  // namespace jch
