// jch: exact-diagonalization experiments on the Jaynes-Cummings-Hubbard chain.

#include "jch/ensemble.hpp"
#include "jch/output.hpp"
#include "jch/presets.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fmt/format.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitResource = 3;
constexpr int kExitFailure = 1;

const char *kSchemaHelp = R"(Config file (key = value, '#' comments, lists comma-separated):
  name, model.L, model.N (default L/2), model.J, model.mode (disordered|clean),
  model.D_over_J / model.g_cl_over_J (sweep list), ensemble.samples, ensemble.seed,
  ensemble.workers, ensemble.memory_cap_mb, tasks.spectrum|entanglement|dynamics|eth,
  spectrum.window, spectrum.degeneracy_floor, spectrum.write_eigenvalues,
  entanglement.window, entanglement.page_samples, dynamics.grid (log|linear|windows),
  dynamics.t_min, dynamics.t_max, dynamics.points_per_decade, dynamics.points,
  dynamics.window_dt, dynamics.initial_state, eth.diagonal_window, eth.delta_omega,
  eth.eps_center, eth.eps_halfwidth, eth.min_bin_count, convergence.samples, output.dir

Outputs per sweep point (<P> = D_over_J or g_cl_over_J directory <P>-<value>/):
  couplings.csv           realization,seed,site,g
  spectrum.csv            realization,n,E,eps
  level_stats.csv         realization,r_mean,ratio_count,degenerate_gaps
  ee.csv                  realization,n,eps,S
  ee_trajectory.csv       realization|mean,t,S
  ee_trajectory_stats.csv t,S_mean,S_stderr,samples
  occupations.csv         realization|mean,t,site,n_c,n_a
  eth_diagonal.csv        realization,eps,O_label,value
  eth_fluctuations.csv    realization,O_label,mean_abs_delta
  eth_binned.csv          O_label,omega_bin_center,L_omega,mean_abs2,mean_abs,gamma,count
  eth_gamma.csv           O_label,omega_bin_center,L_omega,gamma_mean,gamma_stderr,realizations,gamma_pooled
Run-level aggregates: level_stats_aggregate.csv, entanglement_aggregate.csv
  (<P>,L,S_mean,S_over_SP,Delta_S,S_P,S_P_stderr), eth_fluctuations_aggregate.csv,
  convergence_*.csv, metadata.json (config echo, seeds, version, timings).
Full reference: schemas/outputs.md. JCH_OUTPUT_ROOT overrides the output root.)";

struct Failure {
  int code;
  json body;
};

[[noreturn]] void fail(int code, const std::string &kind, const std::string &message, json extra = json::object()) {
  json body = {{"error", kind}, {"message", message}};
  body.update(extra);
  throw Failure{code, body};
}

json error_list(const std::vector<jch::ConfigError> &errors) {
  json list = json::array();
  for (const auto &e : errors) list.push_back({{"field", e.field}, {"message", e.message}});
  return list;
}

jch::ExperimentConfig load_or_fail(const std::string &path) {
  auto parsed = jch::load_config(path);
  if (!parsed.errors.empty())
    fail(kExitInvalid, "invalid_config", fmt::format("{} problem(s) in {}", parsed.errors.size(), path),
         {{"errors", error_list(parsed.errors)}});
  return parsed.config;
}

std::optional<fs::path> env_root() {
  if (const char *root = std::getenv("JCH_OUTPUT_ROOT"); root && *root) return fs::path(root);
  return std::nullopt;
}

void execute(const jch::ExperimentConfig &config, const fs::path &dir, const std::vector<std::string> &manifest) {
  if (auto errors = jch::validate(config); !errors.empty())
    fail(kExitInvalid, "invalid_config", fmt::format("run '{}' is invalid", config.name),
         {{"errors", error_list(errors)}});
  const jch::Index total = static_cast<jch::Index>(config.sweep.size()) * config.effective_samples();
  const jch::Index step = std::max<jch::Index>(1, total / 10);
  jch::RunOptions options;
  options.progress = [&](jch::Index done, jch::Index all) {
    if (done % step == 0 || done == all) fmt::print(stderr, "[{}] {}/{} realizations\n", config.name, done, all);
  };
  fmt::print(stderr, "[{}] L={} N={} {} {} point(s) x {} realization(s), {} worker(s)\n", config.name, config.L,
             config.excitations(), jch::to_string(config.mode), config.sweep.size(), config.effective_samples(),
             jch::resolve_workers(config));
  jch::ExperimentResult result;
  try {
    result = jch::run_experiment(config, options);
  } catch (const jch::ResourceError &e) {
    fail(kExitResource, "resource_cap", e.what(), {{"run", config.name}});
  }
  jch::write_outputs(result, dir);
  for (const auto &f : manifest)
    if (!fs::exists(dir / f)) fail(kExitFailure, "incomplete_output", fmt::format("missing {}", (dir / f).string()));
  fmt::print(stderr, "[{}] wrote {} ({:.1f} s)\n", config.name, dir.string(), result.wall_seconds);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Exact diagonalization of the Jaynes-Cummings-Hubbard chain"};
  app.footer(kSchemaHelp);
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<jch::Index> samples;
  std::optional<int> workers;
  std::optional<double> memory_cap;
  std::string out;
  auto common = [&](CLI::App *cmd) {
    cmd->add_option("--seed", seed, "master seed");
    cmd->add_option("--samples", samples, "realizations per sweep point (disordered runs)")->check(CLI::PositiveNumber);
    cmd->add_option("--workers", workers, "parallel jobs (default: available cores)")->check(CLI::PositiveNumber);
    cmd->add_option("--memory-cap-mb", memory_cap, "dense storage cap in MB")->check(CLI::PositiveNumber);
    cmd->add_option("--out", out, "output directory (run) or root (preset)");
  };

  std::string config_path;
  auto *run = app.add_subcommand("run", "run one experiment from a config file");
  run->add_option("config", config_path, "config file")->required();
  common(run);

  std::string preset_name;
  std::string scale_name = "desk";
  bool list = false;
  bool dry = false;
  auto *preset = app.add_subcommand("preset", "regenerate the data behind one figure");
  preset->add_option("name", preset_name, "preset name");
  preset->add_option("--scale", scale_name, "desk (L <= 8, reduced samples) or paper")->check(CLI::IsMember({"desk", "paper"}));
  preset->add_flag("--list", list, "list presets");
  preset->add_flag("--manifest", dry, "print the run configs and file manifest without running");
  common(preset);

  int L = 0, N = -1;
  bool dump = false;
  auto *basis = app.add_subcommand("basis", "print the sector dimension (and optionally the states)");
  basis->add_option("--L", L, "sites")->required();
  basis->add_option("--N", N, "excitations (default L/2)");
  basis->add_flag("--dump", dump, "list basis states");

  std::string validate_path;
  auto *validate = app.add_subcommand("validate", "check a config file");
  validate->add_option("config", validate_path, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cout.flush();
    std::cerr << json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
    return kExitInvalid;
  }

  const jch::PresetOverrides overrides{seed, samples, workers, memory_cap};
  try {
    if (*basis) {
      if (N < 0) N = L / 2;
      try {
        auto b = jch::enumerate_basis(L, N);
        fmt::print("{}\n", b->size());
        if (dump) jch::dump_basis(std::cout, *b);
      } catch (const jch::DomainError &e) {
        fail(kExitInvalid, "invalid_sector", e.what());
      }
    } else if (*validate) {
      auto config = load_or_fail(validate_path);
      fmt::print("{}", jch::to_text(config));
    } else if (*run) {
      auto config = load_or_fail(config_path);
      jch::apply_overrides(config, overrides);
      fs::path dir = config.output_dir;
      if (!out.empty()) dir = out;
      else if (auto root = env_root(); root && dir.is_relative()) dir = *root / dir;
      execute(config, dir, jch::expected_files(config));
    } else if (*preset) {
      if (list) {
        for (const auto &name : jch::preset_names()) {
          const auto p = jch::make_preset(name, jch::Scale::desk);
          fmt::print("{:<24}{}\n", name, p.description);
        }
        return 0;
      }
      if (preset_name.empty()) fail(kExitInvalid, "usage", "preset name required (see --list)");
      jch::FigurePreset p;
      try {
        p = jch::make_preset(preset_name, jch::parse_scale(scale_name));
      } catch (const jch::DomainError &e) {
        fail(kExitInvalid, "unknown_preset", e.what(), {{"known", jch::preset_names()}});
      }
      for (auto &cfg : p.runs) jch::apply_overrides(cfg, overrides);
      fs::path root = "out";
      if (!out.empty()) root = out;
      else if (auto r = env_root()) root = *r;
      const fs::path base = root / p.name;
      if (dry) {
        for (const auto &cfg : p.runs) fmt::print("# run {}\n{}\n", cfg.name, jch::to_text(cfg));
        for (const auto &f : p.manifest()) fmt::print("{}\n", f);
        return 0;
      }
      // validate everything before starting any run
      for (const auto &cfg : p.runs)
        if (auto errors = jch::validate(cfg); !errors.empty())
          fail(kExitInvalid, "invalid_config", fmt::format("preset run '{}' is invalid", cfg.name),
               {{"errors", error_list(errors)}});
      for (const auto &cfg : p.runs) {
        const double bytes = jch::memory_estimate_bytes(cfg, jch::resolve_workers(cfg));
        if (bytes > cfg.memory_cap_mb * 1024.0 * 1024.0)
          fail(kExitResource, "resource_cap",
               fmt::format("run '{}' (L={}) needs about {:.0f} MB, above the cap of {:.0f} MB (use --memory-cap-mb)",
                           cfg.name, cfg.L, bytes / (1024.0 * 1024.0), cfg.memory_cap_mb));
      }
      for (const auto &cfg : p.runs) execute(cfg, base / cfg.name, jch::expected_files(cfg));
      fmt::print("{}\n", base.string());
    }
  } catch (const Failure &f) {
    std::cout.flush();
    std::cerr << f.body.dump() << '\n';
    return f.code;
  } catch (const std::exception &e) {
    std::cout.flush();
    std::cerr << json{{"error", "failure"}, {"message", e.what()}}.dump() << '\n';
    return kExitFailure;
  }
  return 0;
}
