#include "jch/output.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>
#include "json.hpp"

#include <chrono>
#include <fstream>
#include <stdexcept>

#ifndef JCH_VERSION
#define JCH_VERSION "0.0.0"
#endif

namespace jch {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double value) { return fmt::format("{:.17g}", value); }

namespace {

/// Buffered CSV file, renamed into place on close so readers never see a partial file.
class CsvFile {
 public:
  CsvFile(const fs::path &dir, std::string relative, std::vector<std::string> &written)
      : path_(dir / relative), relative_(std::move(relative)), written_(written) {}

  template <typename... Args>
  void row(fmt::format_string<Args...> format, Args &&...args) {
    fmt::format_to(std::back_inserter(buffer_), format, std::forward<Args>(args)...);
    buffer_.push_back('\n');
  }

  void close() {
    fs::create_directories(path_.parent_path());
    const fs::path tmp = path_.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary);
      out.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
      if (!out) throw std::runtime_error(fmt::format("cannot write {}", tmp.string()));
    }
    fs::rename(tmp, path_);
    written_.push_back(relative_);
  }

 private:
  fs::path path_;
  std::string relative_;
  std::vector<std::string> &written_;
  fmt::memory_buffer buffer_;
};

std::string d(double v) { return format_double(v); }

bool static_tasks(const Tasks &t) { return t.spectrum || t.entanglement || t.eth; }

void write_point(const ExperimentResult &result, Index p, const fs::path &dir, std::vector<std::string> &written) {
  const ExperimentConfig &cfg = result.config;
  const std::string sub = point_directory(cfg, p);
  const auto records = result.point_records(p);
  const PointResult &agg = result.points[static_cast<std::size_t>(p)];
  auto file = [&](const std::string &name) { return CsvFile(dir, sub + "/" + name, written); };

  {
    CsvFile f = file("couplings.csv");
    f.row("realization,seed,site,g");
    for (const auto &r : records)
      for (std::size_t i = 0; i < r.couplings.size(); ++i) f.row("{},{},{},{}", r.realization, r.seed, i + 1, d(r.couplings[i]));
    f.close();
  }

  if (static_tasks(cfg.tasks)) {
    if (cfg.write_eigenvalues) {
      CsvFile f = file("spectrum.csv");
      f.row("realization,n,E,eps");
      for (const auto &r : records) {
        const Eigen::VectorXd eps = energy_density(r.eigenvalues);
        for (Index n = 0; n < r.eigenvalues.size(); ++n) f.row("{},{},{},{}", r.realization, n, d(r.eigenvalues[n]), d(eps[n]));
      }
      f.close();
    }
    CsvFile f = file("level_stats.csv");
    f.row("realization,r_mean,ratio_count,degenerate_gaps");
    for (const auto &r : records) f.row("{},{},{},{}", r.realization, d(r.r_mean), r.r_count, r.degenerate_gaps);
    f.close();
  }

  if (cfg.tasks.entanglement) {
    CsvFile f = file("ee.csv");
    f.row("realization,n,eps,S");
    for (const auto &r : records)
      for (std::size_t k = 0; k < r.ee.size(); ++k) f.row("{},{},{},{}", r.realization, r.ee_index[k], d(r.ee_eps[k]), d(r.ee[k]));
    f.close();
  }

  if (cfg.tasks.dynamics) {
    const auto &times = result.grid.times;
    {
      CsvFile f = file("ee_trajectory.csv");
      f.row("realization,t,S");
      for (const auto &r : records)
        for (std::size_t t = 0; t < times.size(); ++t) f.row("{},{},{}", r.realization, d(times[t]), d(r.ee_t[t]));
      for (std::size_t t = 0; t < times.size(); ++t) f.row("mean,{},{}", d(times[t]), d(agg.ee_t_mean[t]));
      f.close();
    }
    {
      CsvFile f = file("ee_trajectory_stats.csv");
      f.row("t,S_mean,S_stderr,samples");
      for (std::size_t t = 0; t < times.size(); ++t)
        f.row("{},{},{},{}", d(times[t]), d(agg.ee_t_mean[t]), d(agg.ee_t_stderr[t]), agg.samples);
      f.close();
    }
    {
      CsvFile f = file("occupations.csv");
      f.row("realization,t,site,n_c,n_a");
      auto emit = [&](const std::string &who, const Eigen::MatrixXd &nc, const Eigen::MatrixXd &na) {
        for (Index t = 0; t < nc.rows(); ++t)
          for (Index s = 0; s < nc.cols(); ++s)
            f.row("{},{},{},{},{}", who, d(times[static_cast<std::size_t>(t)]), s + 1, d(nc(t, s)), d(na(t, s)));
      };
      for (const auto &r : records) emit(std::to_string(r.realization), r.occ_photons, r.occ_atoms);
      emit("mean", agg.occ_photons_mean, agg.occ_atoms_mean);
      f.close();
    }
  }

  if (cfg.tasks.eth) {
    {
      CsvFile f = file("eth_diagonal.csv");
      f.row("realization,eps,O_label,value");
      for (const auto &r : records)
        for (const auto &e : r.eth)
          for (const auto &entry : e.diagonal) f.row("{},{},{},{}", r.realization, d(entry.eps), e.label, d(entry.value));
      f.close();
    }
    {
      CsvFile f = file("eth_fluctuations.csv");
      f.row("realization,O_label,mean_abs_delta");
      for (const auto &r : records)
        for (const auto &e : r.eth) f.row("{},{},{}", r.realization, e.label, d(e.fluctuation));
      f.close();
    }
    {
      CsvFile f = file("eth_binned.csv");
      f.row("O_label,omega_bin_center,L_omega,mean_abs2,mean_abs,gamma,count");
      for (const auto &e : agg.eth)
        for (std::size_t k = 0; k < e.binned.bins.size(); ++k) {
          const auto &b = e.binned.bins[k];
          f.row("{},{},{},{},{},{},{}", e.label, d(b.omega), d(cfg.L * b.omega), d(b.mean_abs2), d(b.mean_abs),
                d(e.gamma[k].mean), b.count);
        }
      f.close();
    }
    {
      CsvFile f = file("eth_gamma.csv");
      f.row("O_label,omega_bin_center,L_omega,gamma_mean,gamma_stderr,realizations,gamma_pooled");
      for (const auto &e : agg.eth)
        for (const auto &g : e.gamma)
          f.row("{},{},{},{},{},{},{}", e.label, d(g.omega), d(cfg.L * g.omega), d(g.mean), d(g.standard_error),
                g.realizations, d(g.pooled));
      f.close();
    }
  }
}

void write_aggregates(const ExperimentResult &result, const fs::path &dir, std::vector<std::string> &written) {
  const ExperimentConfig &cfg = result.config;
  const std::string pname = cfg.parameter_name();
  const int N = cfg.excitations();
  if (static_tasks(cfg.tasks)) {
    CsvFile f(dir, "level_stats_aggregate.csv", written);
    f.row("{},L,N,samples,r_mean,r_stderr,degenerate_gaps", pname);
    for (const auto &p : result.points)
      f.row("{},{},{},{},{},{},{}", d(p.parameter), cfg.L, N, p.samples, d(p.r_mean), d(p.r_stderr), p.degenerate_gaps);
    f.close();
  }
  if (cfg.tasks.entanglement) {
    CsvFile f(dir, "entanglement_aggregate.csv", written);
    f.row("{},L,S_mean,S_over_SP,Delta_S,S_P,S_P_stderr", pname);
    for (const auto &p : result.points)
      f.row("{},{},{},{},{},{},{}", d(p.parameter), cfg.L, d(p.entropy.mean), d(p.entropy.normalized_mean()),
            d(p.entropy.deviation), d(result.page.mean), d(result.page.standard_error));
    f.close();
  }
  if (cfg.tasks.eth) {
    CsvFile f(dir, "eth_fluctuations_aggregate.csv", written);
    f.row("{},L,O_label,samples,mean_abs_delta,stderr,offdiag_count,degenerate_pairs", pname);
    for (const auto &p : result.points)
      for (const auto &e : p.eth)
        f.row("{},{},{},{},{},{},{},{}", d(p.parameter), cfg.L, e.label, p.samples, d(e.fluctuation_mean),
              d(e.fluctuation_stderr), e.offdiag_count, e.degenerate_pairs);
    f.close();
  }
  if (cfg.convergence_counts.empty()) return;

  if (static_tasks(cfg.tasks)) {
    CsvFile f(dir, "convergence_level_stats.csv", written);
    f.row("{},samples,r_mean,r_stderr", pname);
    for (const auto &series : result.convergence)
      for (const auto &p : series) f.row("{},{},{},{}", d(p.parameter), p.samples, d(p.r_mean), d(p.r_stderr));
    f.close();
  }
  if (cfg.tasks.entanglement) {
    CsvFile f(dir, "convergence_entanglement.csv", written);
    f.row("{},samples,S_mean,S_over_SP,Delta_S", pname);
    for (const auto &series : result.convergence)
      for (const auto &p : series)
        f.row("{},{},{},{},{}", d(p.parameter), p.samples, d(p.entropy.mean), d(p.entropy.normalized_mean()),
              d(p.entropy.deviation));
    f.close();
  }
  if (cfg.tasks.dynamics) {
    CsvFile f(dir, "convergence_ee_trajectory.csv", written);
    f.row("{},samples,t,S_mean,S_stderr", pname);
    for (const auto &series : result.convergence)
      for (const auto &p : series)
        for (std::size_t t = 0; t < result.grid.times.size(); ++t)
          f.row("{},{},{},{},{}", d(p.parameter), p.samples, d(result.grid.times[t]), d(p.ee_t_mean[t]),
                d(p.ee_t_stderr[t]));
    f.close();
  }
  if (cfg.tasks.eth) {
    CsvFile f(dir, "convergence_eth.csv", written);
    f.row("{},samples,O_label,mean_abs_delta,stderr", pname);
    for (const auto &series : result.convergence)
      for (const auto &p : series)
        for (const auto &e : p.eth)
          f.row("{},{},{},{},{}", d(p.parameter), p.samples, e.label, d(e.fluctuation_mean), d(e.fluctuation_stderr));
    f.close();
    CsvFile b(dir, "convergence_eth_binned.csv", written);
    b.row("{},samples,O_label,omega_bin_center,L_omega,mean_abs2,mean_abs,gamma,count", pname);
    for (const auto &series : result.convergence)
      for (const auto &p : series)
        for (const auto &e : p.eth)
          for (std::size_t k = 0; k < e.binned.bins.size(); ++k) {
            const auto &bin = e.binned.bins[k];
            b.row("{},{},{},{},{},{},{},{},{}", d(p.parameter), p.samples, e.label, d(bin.omega), d(cfg.L * bin.omega),
                  d(bin.mean_abs2), d(bin.mean_abs), d(e.gamma[k].mean), bin.count);
          }
    b.close();
  }
}

json config_json(const ExperimentConfig &c) {
  return {
      {"name", c.name},
      {"L", c.L},
      {"N", c.excitations()},
      {"J", c.J},
      {"mode", to_string(c.mode)},
      {c.parameter_name(), c.sweep},
      {"samples", c.effective_samples()},
      {"seed", c.seed},
      {"tasks",
       {{"spectrum", c.tasks.spectrum},
        {"entanglement", c.tasks.entanglement},
        {"dynamics", c.tasks.dynamics},
        {"eth", c.tasks.eth}}},
      {"spectrum", {{"window", to_string(c.level_window)}, {"degeneracy_floor", c.degeneracy_floor}}},
      {"entanglement", {{"window", to_string(c.entropy_window)}, {"page_samples", c.page_samples}}},
      {"dynamics",
       {{"grid", to_string(c.grid.spacing)},
        {"t_min", c.grid.t_min},
        {"t_max", c.grid.t_max},
        {"points_per_decade", c.grid.points_per_decade},
        {"points", c.grid.linear_points},
        {"window_dt", c.grid.window_dt},
        {"initial_state", to_string(c.initial_state)}}},
      {"eth",
       {{"diagonal_window", to_string(c.eth_diagonal_window)},
        {"delta_omega", c.delta_omega},
        {"eps_center", c.eps_center},
        {"eps_halfwidth", c.eps_half_width},
        {"min_bin_count", c.min_bin_count}}},
      {"convergence_samples", c.convergence_counts},
      {"memory_cap_mb", c.memory_cap_mb},
  };
}

}  // namespace

std::string point_directory(const ExperimentConfig &config, Index point) {
  return fmt::format("{}-{}", config.parameter_name(), config.sweep[static_cast<std::size_t>(point)]);
}

std::vector<std::string> expected_files(const ExperimentConfig &cfg) {
  std::vector<std::string> files;
  const bool stat = static_tasks(cfg.tasks);
  for (Index p = 0; p < static_cast<Index>(cfg.sweep.size()); ++p) {
    const std::string sub = point_directory(cfg, p) + "/";
    files.push_back(sub + "couplings.csv");
    if (stat) {
      if (cfg.write_eigenvalues) files.push_back(sub + "spectrum.csv");
      files.push_back(sub + "level_stats.csv");
    }
    if (cfg.tasks.entanglement) files.push_back(sub + "ee.csv");
    if (cfg.tasks.dynamics)
      for (const char *f : {"ee_trajectory.csv", "ee_trajectory_stats.csv", "occupations.csv"}) files.push_back(sub + f);
    if (cfg.tasks.eth)
      for (const char *f : {"eth_diagonal.csv", "eth_fluctuations.csv", "eth_binned.csv", "eth_gamma.csv"}) files.push_back(sub + f);
  }
  if (stat) files.emplace_back("level_stats_aggregate.csv");
  if (cfg.tasks.entanglement) files.emplace_back("entanglement_aggregate.csv");
  if (cfg.tasks.eth) files.emplace_back("eth_fluctuations_aggregate.csv");
  if (!cfg.convergence_counts.empty()) {
    if (stat) files.emplace_back("convergence_level_stats.csv");
    if (cfg.tasks.entanglement) files.emplace_back("convergence_entanglement.csv");
    if (cfg.tasks.dynamics) files.emplace_back("convergence_ee_trajectory.csv");
    if (cfg.tasks.eth) {
      files.emplace_back("convergence_eth.csv");
      files.emplace_back("convergence_eth_binned.csv");
    }
  }
  files.emplace_back("metadata.json");
  return files;
}

std::vector<std::string> write_outputs(const ExperimentResult &result, const fs::path &dir) {
  std::vector<std::string> written;
  fs::create_directories(dir);
  for (Index p = 0; p < static_cast<Index>(result.points.size()); ++p) write_point(result, p, dir, written);
  write_aggregates(result, dir, written);

  const ExperimentConfig &cfg = result.config;
  json seeds = json::array();
  double job_seconds = 0.0;
  for (const auto &r : result.records) {
    seeds.push_back({{"point", r.point}, {"realization", r.realization}, {"seed", r.seed}});
    job_seconds += r.seconds;
  }
  json meta = {
      {"artifact", "jch"},
      {"version", JCH_VERSION},
      {"created", fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(
                                                           std::chrono::system_clock::now())))},
      {"config", config_json(cfg)},
      {"config_text", to_text(cfg)},
      {"dimension", result.dimension},
      {"spectral_dimension", result.spectral_dimension},
      {"seeds",
       {{"master", cfg.seed},
        {"derivation", "splitmix64 chain over (master, point index, realization index)"},
        {"page", result.page_seed},
        {"realizations", seeds}}},
      {"timings", {{"wall_seconds", result.wall_seconds}, {"job_seconds", job_seconds}, {"workers", result.workers}}},
  };
  if (cfg.tasks.entanglement)
    meta["page"] = {{"mean", result.page.mean}, {"standard_error", result.page.standard_error}, {"samples", result.page.samples}};
  json files = written;
  files.push_back("metadata.json");
  meta["files"] = files;

  const fs::path path = dir / "metadata.json";
  std::ofstream out(path);
  out << meta.dump(2) << '\n';
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  written.emplace_back("metadata.json");
  return written;
}

}  // namespace jch
