#include "jch/ensemble.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

extern "C" void openblas_set_num_threads(int);

namespace jch {

namespace {

constexpr std::uint64_t kPageStream = std::numeric_limits<std::uint64_t>::max();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Read-only state shared by all jobs of one experiment.
struct Context {
  const ExperimentConfig &config;
  BasisPtr basis;
  SymmetryAction chiral;
  std::shared_ptr<const AntisymmetricSubspace> subspace;  // clean mode only
  std::unique_ptr<Bipartition> cut;
  std::vector<HermitianOperator> observables;
  TimeGrid grid;
  ComplexVector psi0;
};

RealizationRecord run_job(const Context &ctx, Index point, Index realization) {
  const auto start = Clock::now();
  const ExperimentConfig &cfg = ctx.config;
  const Tasks &tasks = cfg.tasks;
  RealizationRecord rec;
  rec.point = point;
  rec.realization = realization;
  rec.parameter = cfg.sweep[static_cast<std::size_t>(point)];
  rec.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(point), static_cast<std::uint64_t>(realization));

  const int L = cfg.L;
  CouplingProfile profile;
  if (cfg.mode == Mode::clean) {
    profile = clean_profile(L, rec.parameter * cfg.J, cfg.J);
  } else {
    RandomStream stream(rec.seed);
    profile = sample_couplings(rec.parameter * cfg.J, L, stream, cfg.J);
    profile.seed = rec.seed;
    profile.realization = static_cast<std::uint64_t>(realization);
  }
  rec.couplings = profile.g;

  const bool static_vectors = tasks.entanglement || tasks.eth;
  const bool static_tasks = tasks.spectrum || tasks.entanglement || tasks.eth;
  const std::string tag = fmt::format("{}={} r={}", cfg.parameter_name(), rec.parameter, realization);

  // Full-sector decomposition (disordered: everything; clean: dynamics only).
  SpectralDecomposition full;
  SpectralDecomposition spectral;
  const HermitianOperator H = build_hamiltonian(ctx.basis, profile);
  if (cfg.mode == Mode::disordered) {
    full = diagonalize_chiral(H, ctx.chiral, static_vectors || tasks.dynamics);
    full.label = tag;
    if (static_tasks) spectral = full;
  } else {
    if (static_tasks) {
      spectral = diagonalize(project(H, ctx.subspace), static_vectors);
      spectral.label = tag;
    }
    if (tasks.dynamics) {
      full = diagonalize_chiral(H, ctx.chiral, true);
      full.label = tag;
    }
  }

  if (static_tasks) {
    rec.eigenvalues = spectral.eigenvalues;
    const LevelStatistics ls = level_spacing_ratio(
        spectral.eigenvalues, make_window(cfg.level_window, spectral.eigenvalues), cfg.degeneracy_floor);
    rec.r_mean = ls.mean;
    rec.r_count = static_cast<Index>(ls.ratios.size());
    rec.degenerate_gaps = ls.degenerate_gaps;
  }

  if (tasks.entanglement) {
    const SpectralWindow window = make_window(cfg.entropy_window, spectral.eigenvalues);
    rec.ee = eigenstate_entropies(*ctx.cut, spectral, window);
    const Eigen::VectorXd eps = energy_density(spectral.eigenvalues);
    for (Index n = window.begin; n < window.end; ++n) {
      rec.ee_index.push_back(n);
      rec.ee_eps.push_back(eps[n]);
    }
    rec.ee_mean = std::accumulate(rec.ee.begin(), rec.ee.end(), 0.0) / static_cast<double>(rec.ee.size());
  }

  if (tasks.eth) {
    const SpectralWindow window = make_window(cfg.eth_diagonal_window, spectral.eigenvalues);
    const OffDiagonalTarget target{cfg.eps_center, cfg.eps_half_width, cfg.degeneracy_floor};
    for (const HermitianOperator &O : ctx.observables) {
      const MatrixElementTable table = matrix_elements(O, spectral, window, target);
      RealizationRecord::Eth eth;
      eth.label = table.label;
      eth.diagonal = table.diagonal;
      eth.fluctuation = diag_fluctuations(table);
      eth.bins = accumulate_offdiag(table, cfg.delta_omega);
      rec.eth.push_back(std::move(eth));
    }
  }

  if (tasks.dynamics) {
    rec.ee_t = ee_trajectory(*ctx.cut, full, ctx.psi0, ctx.grid);
    const OccupationTable occ = occupation_trajectory(full, ctx.psi0, ctx.grid);
    rec.occ_photons = occ.photons;
    rec.occ_atoms = occ.atoms;
  }
  rec.seconds = seconds_since(start);
  return rec;
}

double mean_of(const std::vector<double> &v) {
  return v.empty() ? kNaN : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double> &v) {
  if (v.size() < 2) return kNaN;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

std::vector<Observable> eth_observables(int sites) {
  return {Observable::half_chain_occupancy(sites), Observable::kinetic()};
}

PointResult aggregate(const ExperimentConfig &config, std::span<const RealizationRecord> records,
                      const PageEstimate &page) {
  if (records.empty()) throw DomainError("nothing to aggregate");
  PointResult out;
  out.point = records.front().point;
  out.parameter = records.front().parameter;
  out.samples = static_cast<Index>(records.size());
  const Tasks &tasks = config.tasks;

  if (tasks.spectrum || tasks.entanglement || tasks.eth) {
    std::vector<double> r;
    for (const auto &rec : records) {
      if (std::isfinite(rec.r_mean)) r.push_back(rec.r_mean);
      out.degenerate_gaps += rec.degenerate_gaps;
    }
    out.r_mean = mean_of(r);
    out.r_stderr = stderr_of(r);
  }

  if (tasks.entanglement) {
    std::vector<double> means;
    for (const auto &rec : records) means.push_back(rec.ee_mean);
    out.entropy = entropy_statistics(means, page);
  }

  if (tasks.dynamics) {
    const std::size_t T = records.front().ee_t.size();
    out.ee_t_mean.resize(T);
    out.ee_t_stderr.resize(T);
    std::vector<double> column(records.size());
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t k = 0; k < records.size(); ++k) column[k] = records[k].ee_t[t];
      out.ee_t_mean[t] = mean_of(column);
      out.ee_t_stderr[t] = stderr_of(column);
    }
    out.occ_photons_mean = Eigen::MatrixXd::Zero(records.front().occ_photons.rows(), records.front().occ_photons.cols());
    out.occ_atoms_mean = out.occ_photons_mean;
    for (const auto &rec : records) {
      out.occ_photons_mean += rec.occ_photons;
      out.occ_atoms_mean += rec.occ_atoms;
    }
    out.occ_photons_mean /= static_cast<double>(records.size());
    out.occ_atoms_mean /= static_cast<double>(records.size());
  }

  if (tasks.eth) {
    for (std::size_t o = 0; o < records.front().eth.size(); ++o) {
      EthAggregate agg;
      agg.label = records.front().eth[o].label;
      BinSums sums;
      sums.delta_omega = config.delta_omega;
      std::vector<double> fluct;
      for (const auto &rec : records) {
        fluct.push_back(rec.eth[o].fluctuation);
        sums.merge(rec.eth[o].bins);
      }
      for (const auto &[index, bin] : sums.bins) agg.offdiag_count += bin.count;
      agg.degenerate_pairs = sums.degenerate_pairs;
      agg.fluctuation_mean = mean_of(fluct);
      agg.fluctuation_stderr = stderr_of(fluct);
      agg.binned = finalize(sums, config.min_bin_count);
      std::map<Index, std::vector<double>> per_bin;
      for (const auto &rec : records)
        for (const auto &[index, bin] : rec.eth[o].bins.bins)
          if (bin.count >= config.min_bin_count && bin.sum_abs > 0.0) {
            const double n = static_cast<double>(bin.count);
            per_bin[index].push_back((bin.sum_abs2 / n) / ((bin.sum_abs / n) * (bin.sum_abs / n)));
          }
      for (const auto &b : agg.binned.bins) {
        GammaBin g;
        g.omega = b.omega;
        g.pooled = b.mean_abs > 0.0 ? b.mean_abs2 / (b.mean_abs * b.mean_abs) : kNaN;
        const auto it = per_bin.find(static_cast<Index>(std::floor(b.omega / config.delta_omega)));
        if (it != per_bin.end()) {
          g.mean = mean_of(it->second);
          g.standard_error = stderr_of(it->second);
          g.realizations = static_cast<Index>(it->second.size());
        } else {
          g.mean = g.standard_error = kNaN;
        }
        agg.gamma.push_back(g);
      }
      out.eth.push_back(std::move(agg));
    }
  }
  return out;
}

std::span<const RealizationRecord> ExperimentResult::point_records(Index point) const {
  const auto per_point = static_cast<std::size_t>(config.effective_samples());
  return std::span<const RealizationRecord>(records).subspan(static_cast<std::size_t>(point) * per_point, per_point);
}

int resolve_workers(const ExperimentConfig &config) {
  const auto jobs = static_cast<Index>(config.sweep.size()) * config.effective_samples();
  int workers = config.workers > 0 ? config.workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return static_cast<int>(std::max<Index>(1, std::min<Index>(workers, jobs)));
}

double memory_estimate_bytes(const ExperimentConfig &config, int workers) {
  const auto dim = static_cast<Index>(sector_dimension(config.L, config.excitations()));
  double per_job = dense_memory_estimate(dim);
  // the clean-mode static solve runs on a subspace of about half the sector
  if (config.mode == Mode::clean && !config.tasks.dynamics) per_job = dense_memory_estimate(dim / 2 + 1);
  return per_job * workers;
}

ExperimentResult run_experiment(const ExperimentConfig &config, const RunOptions &options) {
  if (auto errors = validate(config); !errors.empty())
    throw DomainError(fmt::format("{}: {}", errors.front().field, errors.front().message));
  const auto start = Clock::now();

  ExperimentResult result;
  result.config = config;
  result.workers = resolve_workers(config);
  const double bytes = memory_estimate_bytes(config, result.workers);
  if (bytes > config.memory_cap_mb * 1024.0 * 1024.0)
    throw ResourceError(fmt::format(
        "L={} N={} needs about {:.0f} MB of dense storage with {} worker(s), above the cap of {:.0f} MB "
        "(raise ensemble.memory_cap_mb or use fewer workers)",
        config.L, config.excitations(), bytes / (1024.0 * 1024.0), result.workers, config.memory_cap_mb));

  // one BLAS thread per job: parallelism comes from the job pool and results
  // must not depend on how many threads the BLAS would pick
  openblas_set_num_threads(1);

  Context ctx{config, enumerate_basis(config.L, config.excitations()), {}, {}, {}, {}, {}, {}};
  ctx.chiral = chiral_action(*ctx.basis);
  result.dimension = ctx.basis->size();
  result.spectral_dimension = result.dimension;
  if (config.mode == Mode::clean) {
    ctx.subspace = std::make_shared<const AntisymmetricSubspace>(
        antisymmetric_projector(*ctx.basis, reflection_action(*ctx.basis)));
    result.spectral_dimension = ctx.subspace->dimension();
  }
  if (config.tasks.entanglement || config.tasks.dynamics) ctx.cut = std::make_unique<Bipartition>(ctx.basis);
  if (config.tasks.eth)
    for (const Observable &o : eth_observables(config.L)) ctx.observables.push_back(build_observable(ctx.basis, o));
  if (config.tasks.dynamics) {
    ctx.grid = config.grid.build();
    ctx.psi0 = initial_vector(*ctx.basis, make_initial_state(config.initial_state, config.L, config.excitations()));
  }
  result.grid = ctx.grid;

  if (config.tasks.entanglement) {
    result.page_seed = derive_seed(config.seed, kPageStream, 0);
    RandomStream stream(result.page_seed);
    result.page = page_value(*ctx.cut, config.page_samples, stream);
  }

  const Index per_point = config.effective_samples();
  const Index total = static_cast<Index>(config.sweep.size()) * per_point;
  result.records.resize(static_cast<std::size_t>(total));

  std::atomic<Index> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mutex;
  Index done = 0;
  auto worker = [&] {
    for (Index job = next++; job < total && !failed; job = next++) {
      try {
        result.records[static_cast<std::size_t>(job)] = run_job(ctx, job / per_point, job % per_point);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
      std::lock_guard lock(mutex);
      ++done;
      if (options.progress) options.progress(done, total);
    }
  };
  if (result.workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < result.workers; ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  for (Index p = 0; p < static_cast<Index>(config.sweep.size()); ++p) {
    const auto records = result.point_records(p);
    result.points.push_back(aggregate(config, records, result.page));
    std::vector<PointResult> prefixes;
    for (Index count : config.convergence_counts)
      prefixes.push_back(aggregate(config, records.first(static_cast<std::size_t>(std::min(count, per_point))), result.page));
    result.convergence.push_back(std::move(prefixes));
  }
  result.wall_seconds = seconds_since(start);
  return result;
}

}  // namespace jch
