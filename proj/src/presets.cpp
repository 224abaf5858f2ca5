#include "jch/presets.hpp"

#include "jch/output.hpp"

#include <fmt/format.h>

#include <functional>
#include <map>

namespace jch {

Scale parse_scale(const std::string &name) {
  if (name == "desk") return Scale::desk;
  if (name == "paper") return Scale::paper;
  throw DomainError(fmt::format("unknown scale '{}' (expected desk or paper)", name));
}

std::string to_string(Scale scale) { return scale == Scale::paper ? "paper" : "desk"; }

std::vector<std::string> FigurePreset::manifest() const {
  std::vector<std::string> files;
  for (const auto &run : runs)
    for (const auto &f : expected_files(run)) files.push_back(run.name + "/" + f);
  return files;
}

namespace {

const std::vector<double> kThreePoints{0.01, 2.0, 100.0};

std::vector<double> phase_sweep(Scale scale) {
  if (scale == Scale::desk) return {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0};
  return {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0};
}

std::vector<int> sizes(Scale scale) {
  if (scale == Scale::desk) return {6, 8};
  return {6, 8, 10};
}

/// Desk scale keeps L <= 8 and cuts realizations; paper scale uses the figure
/// captions (L = 10 count differs between figures, hence the argument).
Index samples_for(int L, Scale scale, Index paper_l10) {
  if (scale == Scale::desk) return L <= 6 ? 100 : 10;
  if (L <= 6) return 1000;
  if (L <= 8) return 400;
  return paper_l10;
}

ExperimentConfig base(const std::string &name, int L, Mode mode, std::vector<double> sweep, Index samples) {
  ExperimentConfig c;
  c.name = name;
  c.L = L;
  c.mode = mode;
  c.sweep = std::move(sweep);
  c.samples = mode == Mode::clean ? 1 : samples;
  c.tasks = Tasks{};
  c.tasks.spectrum = false;
  return c;
}

std::string run_name(Mode mode, int L, const std::string &suffix = {}) {
  return fmt::format("{}-L{}{}", mode == Mode::clean ? "clean" : "disordered", L, suffix);
}

void log_grid(ExperimentConfig &c) {
  c.grid.spacing = TimeGrid::Spacing::logarithmic;
  c.grid.t_min = 0.1;
  c.grid.t_max = 1.0e8;
  c.grid.points_per_decade = 20;
}

FigurePreset fig2(Scale scale) {
  FigurePreset p{"fig2-phase", "level-spacing ratio and eigenstate EE versus D/J and g_cl/J", scale, {}};
  for (int L : sizes(scale))
    for (Mode mode : {Mode::disordered, Mode::clean}) {
      ExperimentConfig c = base(run_name(mode, L), L, mode, phase_sweep(scale), samples_for(L, scale, 50));
      c.tasks.spectrum = true;
      c.tasks.entanglement = true;
      p.runs.push_back(c);
    }
  return p;
}

FigurePreset fig3(Scale scale) {
  FigurePreset p{"fig3-ee-dynamics", "half-chain EE after a quench from the odd-site photon state", scale, {}};
  for (int L : sizes(scale))
    for (Mode mode : {Mode::disordered, Mode::clean}) {
      ExperimentConfig c = base(run_name(mode, L), L, mode, kThreePoints, samples_for(L, scale, 100));
      c.tasks.dynamics = true;
      log_grid(c);
      p.runs.push_back(c);
    }
  return p;
}

FigurePreset fig4(Scale scale) {
  FigurePreset p{"fig4-initial-states", "EE dynamics for photonic, mixed and atomic initial states", scale, {}};
  const std::vector<std::pair<InitialStateSpec::Kind, std::string>> states{
      {InitialStateSpec::Kind::photon_odd_sites, "photon"},
      {InitialStateSpec::Kind::mixed_two_site, "mixed"},
      {InitialStateSpec::Kind::atom_odd_sites, "atom"}};
  for (int L : {6, 8})
    for (Mode mode : {Mode::disordered, Mode::clean})
      for (const auto &[kind, tag] : states) {
        if (kind == InitialStateSpec::Kind::mixed_two_site && L != 8) continue;
        const Index samples = scale == Scale::desk ? samples_for(L, scale, 0) : (L <= 6 ? 1000 : 100);
        ExperimentConfig c = base(run_name(mode, L, "-" + tag), L, mode, {0.01}, samples);
        c.tasks.dynamics = true;
        c.initial_state = kind;
        log_grid(c);
        p.runs.push_back(c);
      }
  return p;
}

FigurePreset fig5(Scale scale) {
  FigurePreset p{"fig5-occupations", "site occupations in three time windows, L = 8", scale, {}};
  const std::vector<std::pair<InitialStateSpec::Kind, std::string>> states{
      {InitialStateSpec::Kind::photon_odd_sites, "photon"},
      {InitialStateSpec::Kind::mixed_two_site, "mixed"},
      {InitialStateSpec::Kind::atom_odd_sites, "atom"}};
  for (Mode mode : {Mode::disordered, Mode::clean})
    for (const auto &[kind, tag] : states) {
      ExperimentConfig c = base(run_name(mode, 8, "-" + tag), 8, mode, {0.01}, scale == Scale::desk ? 10 : 100);
      c.tasks.dynamics = true;
      c.initial_state = kind;
      c.grid.spacing = TimeGrid::Spacing::windowed;
      c.grid.window_dt = 0.25;
      p.runs.push_back(c);
    }
  return p;
}

FigurePreset eth_preset(const std::string &name, const std::string &description, Scale scale,
                        const std::vector<double> &sweep) {
  FigurePreset p{name, description, scale, {}};
  for (int L : sizes(scale))
    for (Mode mode : {Mode::disordered, Mode::clean}) {
      ExperimentConfig c = base(run_name(mode, L), L, mode, sweep, samples_for(L, scale, 100));
      c.tasks.eth = true;
      p.runs.push_back(c);
    }
  return p;
}

FigurePreset appendix(Scale scale) {
  FigurePreset p{"appendixA-convergence", "sample-count convergence of EE dynamics and diagonal elements", scale, {}};
  const std::vector<Index> counts = scale == Scale::desk ? std::vector<Index>{5, 10, 20} : std::vector<Index>{400, 1000, 2000};
  ExperimentConfig c = base(run_name(Mode::disordered, 8), 8, Mode::disordered, kThreePoints, counts.back());
  c.tasks.dynamics = true;
  c.tasks.eth = true;
  c.convergence_counts = counts;
  log_grid(c);
  p.runs.push_back(c);
  // same-count size comparison of the diagonal elements
  for (int L : {6, 8}) {
    ExperimentConfig d = base(run_name(Mode::disordered, L, "-diagonal"), L, Mode::disordered, kThreePoints,
                              scale == Scale::desk ? samples_for(L, scale, 0) : 1000);
    d.tasks.eth = true;
    p.runs.push_back(d);
  }
  return p;
}

const std::map<std::string, std::function<FigurePreset(Scale)>> &registry() {
  static const std::map<std::string, std::function<FigurePreset(Scale)>> presets{
      {"fig2-phase", fig2},
      {"fig3-ee-dynamics", fig3},
      {"fig4-initial-states", fig4},
      {"fig5-occupations", fig5},
      {"fig6-diagonal",
       [](Scale s) { return eth_preset("fig6-diagonal", "diagonal matrix elements of N_{L/2} and H_kin", s, kThreePoints); }},
      {"fig7-scaling",
       [](Scale s) { return eth_preset("fig7-scaling", "eigenstate-to-eigenstate fluctuations versus L", s, {2.0}); }},
      {"fig8-offdiag",
       [](Scale s) { return eth_preset("fig8-offdiag", "binned off-diagonal matrix elements versus L omega", s, kThreePoints); }},
      {"fig9-gamma",
       [](Scale s) { return eth_preset("fig9-gamma", "Gamma ratio of off-diagonal elements versus L omega", s, kThreePoints); }},
      {"appendixA-convergence", appendix},
  };
  return presets;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto &[name, make] : registry()) names.push_back(name);
  return names;
}

FigurePreset make_preset(const std::string &name, Scale scale) {
  auto it = registry().find(name);
  if (it == registry().end())
    throw DomainError(fmt::format("unknown preset '{}'", name));
  FigurePreset p = it->second(scale);
  for (auto &run : p.runs) run.output_dir = name;
  return p;
}

void apply_overrides(ExperimentConfig &config, const PresetOverrides &o) {
  if (o.seed) config.seed = *o.seed;
  if (o.workers) config.workers = *o.workers;
  if (o.memory_cap_mb) config.memory_cap_mb = *o.memory_cap_mb;
  if (o.samples && config.mode == Mode::disordered) {
    config.samples = *o.samples;
    if (config.convergence_counts.empty()) return;
    std::erase_if(config.convergence_counts, [&](Index n) { return n >= *o.samples; });
    config.convergence_counts.push_back(*o.samples);
  }
}

}  // namespace jch
