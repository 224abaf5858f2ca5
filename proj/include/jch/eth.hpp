#pragma once

#include "jch/operators.hpp"
#include "jch/spectral.hpp"

#include <map>
#include <string>
#include <vector>

namespace jch {

/// Matrix elements of one observable in the eigenbasis of one realization.
struct MatrixElementTable {
  struct Diagonal {
    Index n = 0;
    double eps = 0.0;
    double value = 0.0;
  };
  /// Stored once per unordered pair with omega = eps_n - eps_m > 0.
  struct OffDiagonal {
    Index n = 0;
    Index m = 0;
    double eps_bar = 0.0;
    double omega = 0.0;
    double value = 0.0;
  };

  std::string label;
  std::vector<Diagonal> diagonal;
  std::vector<OffDiagonal> off_diagonal;
  Index degenerate_pairs = 0;  // in-window pairs with omega below the floor, excluded
};

/// Off-diagonal pairs are kept when |(eps_n + eps_m)/2 - center| <= half_width.
struct OffDiagonalTarget {
  double center = 0.5;
  double half_width = 0.005;
  double degeneracy_floor = 1e-12;
};

MatrixElementTable matrix_elements(const HermitianOperator &O, const SpectralDecomposition &spec,
                                   const SpectralWindow &diagonal_window,
                                   const OffDiagonalTarget &target = {});

/// mean over consecutive window entries of ||O_{n+1,n+1}| - |O_{n,n}||.
double diag_fluctuations(const MatrixElementTable &table);

/// Running sums per omega bin; merging is exact bin-wise addition.
struct BinSums {
  struct Bin {
    Index count = 0;
    double sum_abs2 = 0.0;
    double sum_abs = 0.0;
    double sum_value = 0.0;
  };
  double delta_omega = 0.002;
  std::map<Index, Bin> bins;
  Index degenerate_pairs = 0;

  void add(double omega, double value);
  void merge(const BinSums &other);
};

BinSums accumulate_offdiag(const MatrixElementTable &table, double delta_omega = 0.002);

struct BinnedStatistics {
  struct Bin {
    double omega = 0.0;  // bin center
    Index count = 0;
    double mean_abs2 = 0.0;
    double mean_abs = 0.0;
    double mean = 0.0;
  };
  double delta_omega = 0.002;
  std::vector<Bin> bins;  // ascending omega, only bins with count >= min_count
  Index suppressed_bins = 0;
};

BinnedStatistics finalize(const BinSums &sums, Index min_count = 10);

/// Coarse-grained |O_nm|^2 and |O_nm| in omega bins of width delta_omega.
BinnedStatistics binned_offdiag(const MatrixElementTable &table, double delta_omega = 0.002,
                                Index min_count = 10);

struct GammaRatio {
  std::vector<double> omega;
  std::vector<double> gamma;  // mean|O|^2 / (mean|O|)^2
  Index skipped_bins = 0;     // bins with zero mean |O|
};

GammaRatio gamma_ratio(const BinnedStatistics &stats);

}  // namespace jch
