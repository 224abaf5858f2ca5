#pragma once

#include "jch/config.hpp"
#include "jch/entanglement.hpp"
#include "jch/eth.hpp"

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace jch {

/// Raised before any work starts when the dense storage estimate exceeds the cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Observables whose eigenbasis matrix elements are collected: N_{L/2} and H_kin.
std::vector<Observable> eth_observables(int sites);

/// Everything one (parameter, realization) job produces. Fields of disabled
/// tasks stay empty.
struct RealizationRecord {
  struct Eth {
    std::string label;
    std::vector<MatrixElementTable::Diagonal> diagonal;
    double fluctuation = 0.0;
    BinSums bins;
  };

  Index point = 0;
  Index realization = 0;
  double parameter = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> couplings;

  Eigen::VectorXd eigenvalues;  // antisymmetric-subspace spectrum in clean mode
  double r_mean = 0.0;
  Index r_count = 0;
  Index degenerate_gaps = 0;

  std::vector<Index> ee_index;
  std::vector<double> ee_eps;
  std::vector<double> ee;
  double ee_mean = 0.0;

  std::vector<double> ee_t;        // one entry per grid time
  Eigen::MatrixXd occ_photons;     // times x sites
  Eigen::MatrixXd occ_atoms;

  std::vector<Eth> eth;
  double seconds = 0.0;
};

/// Gamma in one omega bin: computed per realization, then averaged over the
/// realizations that populate the bin. `pooled` uses sums over all realizations
/// at once, which mixes realizations of different variance and biases Gamma up.
struct GammaBin {
  double omega = 0.0;
  double mean = 0.0;
  double standard_error = 0.0;
  Index realizations = 0;
  double pooled = 0.0;
};

struct EthAggregate {
  std::string label;
  double fluctuation_mean = 0.0;
  double fluctuation_stderr = 0.0;
  Index offdiag_count = 0;
  Index degenerate_pairs = 0;
  BinnedStatistics binned;  // pooled over realizations
  std::vector<GammaBin> gamma;  // same bins as `binned`
};

/// Realization averages at one sweep point (or one prefix of its realizations).
struct PointResult {
  Index point = 0;
  double parameter = 0.0;
  Index samples = 0;

  double r_mean = 0.0;
  double r_stderr = 0.0;
  Index degenerate_gaps = 0;

  EntropyStatistics entropy;

  std::vector<double> ee_t_mean;
  std::vector<double> ee_t_stderr;
  Eigen::MatrixXd occ_photons_mean;
  Eigen::MatrixXd occ_atoms_mean;

  std::vector<EthAggregate> eth;
};

PointResult aggregate(const ExperimentConfig &config, std::span<const RealizationRecord> records,
                      const PageEstimate &page);

struct ExperimentResult {
  ExperimentConfig config;
  Index dimension = 0;           // full sector
  Index spectral_dimension = 0;  // sector or antisymmetric subspace
  TimeGrid grid;
  PageEstimate page;
  std::uint64_t page_seed = 0;
  std::vector<RealizationRecord> records;  // point-major, realizations ascending
  std::vector<PointResult> points;
  std::vector<std::vector<PointResult>> convergence;  // [point][count index]
  int workers = 1;
  double wall_seconds = 0.0;

  std::span<const RealizationRecord> point_records(Index point) const;
};

struct RunOptions {
  std::function<void(Index done, Index total)> progress;
};

/// Dense bytes the run would hold at once with `workers` concurrent jobs.
double memory_estimate_bytes(const ExperimentConfig &config, int workers);
int resolve_workers(const ExperimentConfig &config);

/// Per-realization seeds are derive_seed(seed, point, realization), so results do
/// not depend on the number of workers or on scheduling.
ExperimentResult run_experiment(const ExperimentConfig &config, const RunOptions &options = {});

}  // namespace jch
