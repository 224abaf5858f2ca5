#include "jch/config.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace jch {

TimeGrid GridSettings::build() const {
  switch (spacing) {
    case TimeGrid::Spacing::logarithmic: return TimeGrid::logarithmic(t_min, t_max, points_per_decade);
    case TimeGrid::Spacing::linear: return TimeGrid::linear(0.0, t_max, linear_points);
    case TimeGrid::Spacing::windowed: return TimeGrid::occupation_windows(window_dt);
  }
  return TimeGrid::logarithmic(t_min, t_max, points_per_decade);
}

Index default_samples(int L) {
  if (L <= 6) return 1000;
  if (L <= 8) return 400;
  return 50;
}

Index ExperimentConfig::effective_samples() const {
  if (mode == Mode::clean) return 1;
  return samples > 0 ? samples : default_samples(L);
}

std::string to_string(Mode mode) { return mode == Mode::clean ? "clean" : "disordered"; }

std::string to_string(SpectralWindow::Kind kind) {
  switch (kind) {
    case SpectralWindow::Kind::middle_third: return "middle-third";
    case SpectralWindow::Kind::middle_four_fifths: return "middle-four-fifths";
    case SpectralWindow::Kind::all: return "all";
    case SpectralWindow::Kind::energy_density_range: return "energy-density-range";
  }
  return "?";
}

std::string to_string(TimeGrid::Spacing spacing) {
  switch (spacing) {
    case TimeGrid::Spacing::logarithmic: return "log";
    case TimeGrid::Spacing::linear: return "linear";
    case TimeGrid::Spacing::windowed: return "windows";
  }
  return "?";
}

std::vector<ConfigError> validate(const ExperimentConfig &c) {
  std::vector<ConfigError> errors;
  auto fail = [&](std::string field, std::string message) { errors.push_back({std::move(field), std::move(message)}); };
  if (c.L < 2 || c.L > SectorBasis::kMaxSites) fail("model.L", fmt::format("must be in [2, {}]", SectorBasis::kMaxSites));
  if (c.L % 2 != 0 && (c.tasks.entanglement || c.tasks.dynamics))
    fail("model.L", "half-chain entanglement needs even L");
  const int N = c.excitations();
  if (N < 1 || N > SectorBasis::kMaxExcitations)
    fail("model.N", fmt::format("must be in [1, {}]", SectorBasis::kMaxExcitations));
  if (!(c.J > 0.0)) fail("model.J", "must be > 0");
  const std::string pname = c.mode == Mode::clean ? "model.g_cl_over_J" : "model.D_over_J";
  if (c.sweep.empty()) fail(pname, "needs at least one value");
  for (double v : c.sweep)
    if (!(v >= 0.0) || !std::isfinite(v)) fail(pname, fmt::format("value {} must be finite and >= 0", v));
  if (c.samples < 0) fail("ensemble.samples", "must be >= 1");
  if (!c.tasks.spectrum && !c.tasks.entanglement && !c.tasks.dynamics && !c.tasks.eth)
    fail("tasks", "at least one task must be enabled");
  if (!(c.degeneracy_floor >= 0.0)) fail("spectrum.degeneracy_floor", "must be >= 0");
  if (c.tasks.entanglement && c.page_samples < 100) fail("entanglement.page_samples", "must be >= 100");
  if (c.tasks.dynamics) {
    if (c.grid.spacing == TimeGrid::Spacing::logarithmic) {
      if (!(c.grid.t_min > 0.0)) fail("dynamics.t_min", "must be > 0");
      if (!(c.grid.t_max > c.grid.t_min)) fail("dynamics.t_max", "must exceed dynamics.t_min");
      if (c.grid.points_per_decade < 1) fail("dynamics.points_per_decade", "must be >= 1");
    } else if (c.grid.spacing == TimeGrid::Spacing::linear) {
      if (!(c.grid.t_max > 0.0)) fail("dynamics.t_max", "must be > 0");
      if (c.grid.linear_points < 2) fail("dynamics.points", "must be >= 2");
    } else if (!(c.grid.window_dt > 0.0)) {
      fail("dynamics.window_dt", "must be > 0");
    }
    if (c.L >= 2 && N >= 1) {
      const int odd = (c.L + 1) / 2;
      switch (c.initial_state) {
        case InitialStateSpec::Kind::photon_odd_sites:
        case InitialStateSpec::Kind::atom_odd_sites:
          if (odd != N) fail("dynamics.initial_state", fmt::format("{} needs N = {} for L = {}", to_string(c.initial_state), odd, c.L));
          break;
        case InitialStateSpec::Kind::mixed_two_site:
          if (c.L != 8 || N != 4) fail("dynamics.initial_state", "mixed-two-site needs L = 8, N = 4");
          break;
        case InitialStateSpec::Kind::explicit_configuration:
          fail("dynamics.initial_state", "explicit configurations are not supported in config files");
          break;
      }
    }
  }
  if (c.tasks.eth) {
    if (!(c.delta_omega > 0.0)) fail("eth.delta_omega", "must be > 0");
    if (!(c.eps_half_width > 0.0)) fail("eth.eps_halfwidth", "must be > 0");
    if (!(c.eps_center >= 0.0 && c.eps_center <= 1.0)) fail("eth.eps_center", "must be in [0, 1]");
    if (c.min_bin_count < 1) fail("eth.min_bin_count", "must be >= 1");
  }
  for (std::size_t i = 0; i < c.convergence_counts.size(); ++i) {
    if (c.convergence_counts[i] < 1) fail("convergence.samples", "counts must be >= 1");
    if (i > 0 && c.convergence_counts[i] <= c.convergence_counts[i - 1])
      fail("convergence.samples", "counts must be strictly ascending");
  }
  if (!c.convergence_counts.empty() && c.samples >= 0 && c.convergence_counts.back() > c.effective_samples())
    fail("convergence.samples", fmt::format("largest count exceeds the {} realizations run", c.effective_samples()));
  if (c.output_dir.empty()) fail("output.dir", "must not be empty");
  if (c.workers < 0) fail("ensemble.workers", "must be >= 0");
  if (!(c.memory_cap_mb > 0.0)) fail("ensemble.memory_cap_mb", "must be > 0");
  return errors;
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string &value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

template <typename T>
bool parse_number(const std::string &s, T &out) {
  if constexpr (std::is_floating_point_v<T>) {
    try {
      std::size_t used = 0;
      out = static_cast<T>(std::stod(s, &used));
      return used == s.size();
    } catch (...) {
      return false;
    }
  } else {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
  }
}

bool parse_bool(const std::string &s, bool &out) {
  if (s == "true" || s == "yes" || s == "1") return out = true, true;
  if (s == "false" || s == "no" || s == "0") return out = false, true;
  return false;
}

bool parse_window(const std::string &s, SpectralWindow::Kind &out) {
  if (s == "middle-third") return out = SpectralWindow::Kind::middle_third, true;
  if (s == "middle-four-fifths") return out = SpectralWindow::Kind::middle_four_fifths, true;
  if (s == "all") return out = SpectralWindow::Kind::all, true;
  return false;
}

}  // namespace

ParsedConfig parse_config(const std::string &text) {
  ParsedConfig parsed;
  ExperimentConfig &c = parsed.config;
  auto &errors = parsed.errors;
  std::vector<double> d_values, g_values;
  bool have_d = false, have_g = false;

  using Setter = std::function<bool(const std::string &)>;
  auto number = [](auto &target) { return Setter([&target](const std::string &v) { return parse_number(v, target); }); };
  auto flag = [](bool &target) { return Setter([&target](const std::string &v) { return parse_bool(v, target); }); };
  auto values = [](std::vector<double> &target, bool &seen) {
    return Setter([&target, &seen](const std::string &v) {
      seen = true;
      target.clear();
      for (const auto &item : split_list(v)) {
        double x = 0;
        if (!parse_number(item, x)) return false;
        target.push_back(x);
      }
      return true;
    });
  };
  auto window = [](SpectralWindow::Kind &target) {
    return Setter([&target](const std::string &v) { return parse_window(v, target); });
  };

  Index samples = 0;
  const std::map<std::string, Setter> setters = {
      {"name", [&](const std::string &v) { c.name = v; return !v.empty(); }},
      {"model.L", number(c.L)},
      {"model.N", number(c.N)},
      {"model.J", number(c.J)},
      {"model.mode",
       [&](const std::string &v) {
         if (v == "disordered") return c.mode = Mode::disordered, true;
         if (v == "clean") return c.mode = Mode::clean, true;
         return false;
       }},
      {"model.D_over_J", values(d_values, have_d)},
      {"model.g_cl_over_J", values(g_values, have_g)},
      {"ensemble.samples", [&](const std::string &v) { return parse_number(v, samples) && samples >= 1; }},
      {"ensemble.seed", number(c.seed)},
      {"ensemble.workers", number(c.workers)},
      {"ensemble.memory_cap_mb", number(c.memory_cap_mb)},
      {"tasks.spectrum", flag(c.tasks.spectrum)},
      {"tasks.entanglement", flag(c.tasks.entanglement)},
      {"tasks.dynamics", flag(c.tasks.dynamics)},
      {"tasks.eth", flag(c.tasks.eth)},
      {"spectrum.window", window(c.level_window)},
      {"spectrum.degeneracy_floor", number(c.degeneracy_floor)},
      {"spectrum.write_eigenvalues", flag(c.write_eigenvalues)},
      {"entanglement.window", window(c.entropy_window)},
      {"entanglement.page_samples", number(c.page_samples)},
      {"dynamics.grid",
       [&](const std::string &v) {
         if (v == "log") return c.grid.spacing = TimeGrid::Spacing::logarithmic, true;
         if (v == "linear") return c.grid.spacing = TimeGrid::Spacing::linear, true;
         if (v == "windows") return c.grid.spacing = TimeGrid::Spacing::windowed, true;
         return false;
       }},
      {"dynamics.t_min", number(c.grid.t_min)},
      {"dynamics.t_max", number(c.grid.t_max)},
      {"dynamics.points_per_decade", number(c.grid.points_per_decade)},
      {"dynamics.points", number(c.grid.linear_points)},
      {"dynamics.window_dt", number(c.grid.window_dt)},
      {"dynamics.initial_state",
       [&](const std::string &v) {
         try {
           c.initial_state = parse_initial_state_kind(v);
           return true;
         } catch (const DomainError &) {
           return false;
         }
       }},
      {"eth.diagonal_window", window(c.eth_diagonal_window)},
      {"eth.delta_omega", number(c.delta_omega)},
      {"eth.eps_center", number(c.eps_center)},
      {"eth.eps_halfwidth", number(c.eps_half_width)},
      {"eth.min_bin_count", number(c.min_bin_count)},
      {"convergence.samples",
       [&](const std::string &v) {
         c.convergence_counts.clear();
         for (const auto &item : split_list(v)) {
           Index n = 0;
           if (!parse_number(item, n)) return false;
           c.convergence_counts.push_back(n);
         }
         return true;
       }},
      {"output.dir", [&](const std::string &v) { c.output_dir = v; return !v.empty(); }},
  };

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back({fmt::format("line {}", lineno), "expected 'key = value'"});
      continue;
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end()) {
      errors.push_back({key, "unknown key"});
      continue;
    }
    if (!it->second(value)) errors.push_back({key, fmt::format("invalid value '{}'", value)});
  }
  c.samples = samples;
  if (c.mode == Mode::clean) {
    if (have_g) c.sweep = g_values;
    else errors.push_back({"model.g_cl_over_J", "required in clean mode"});
  } else {
    if (have_d) c.sweep = d_values;
    else errors.push_back({"model.D_over_J", "required in disordered mode"});
  }
  for (auto &e : validate(c)) errors.push_back(std::move(e));
  return parsed;
}

ParsedConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    ParsedConfig p;
    p.errors.push_back({"file", fmt::format("cannot read '{}'", path)});
    return p;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string to_text(const ExperimentConfig &c) {
  std::string out;
  auto line = [&](std::string_view key, const std::string &value) { out += fmt::format("{} = {}\n", key, value); };
  auto num = [](double v) { return fmt::format("{:.17g}", v); };
  line("name", c.name);
  line("model.L", std::to_string(c.L));
  line("model.N", std::to_string(c.excitations()));
  line("model.J", num(c.J));
  line("model.mode", to_string(c.mode));
  std::vector<std::string> sweep;
  for (double v : c.sweep) sweep.push_back(num(v));
  line(c.mode == Mode::clean ? "model.g_cl_over_J" : "model.D_over_J", fmt::format("{}", fmt::join(sweep, ", ")));
  line("ensemble.samples", std::to_string(c.effective_samples()));
  line("ensemble.seed", std::to_string(c.seed));
  line("ensemble.workers", std::to_string(c.workers));
  line("ensemble.memory_cap_mb", num(c.memory_cap_mb));
  line("tasks.spectrum", c.tasks.spectrum ? "true" : "false");
  line("tasks.entanglement", c.tasks.entanglement ? "true" : "false");
  line("tasks.dynamics", c.tasks.dynamics ? "true" : "false");
  line("tasks.eth", c.tasks.eth ? "true" : "false");
  line("spectrum.window", to_string(c.level_window));
  line("spectrum.degeneracy_floor", num(c.degeneracy_floor));
  line("spectrum.write_eigenvalues", c.write_eigenvalues ? "true" : "false");
  line("entanglement.window", to_string(c.entropy_window));
  line("entanglement.page_samples", std::to_string(c.page_samples));
  line("dynamics.grid", to_string(c.grid.spacing));
  line("dynamics.t_min", num(c.grid.t_min));
  line("dynamics.t_max", num(c.grid.t_max));
  line("dynamics.points_per_decade", std::to_string(c.grid.points_per_decade));
  line("dynamics.points", std::to_string(c.grid.linear_points));
  line("dynamics.window_dt", num(c.grid.window_dt));
  line("dynamics.initial_state", to_string(c.initial_state));
  line("eth.diagonal_window", to_string(c.eth_diagonal_window));
  line("eth.delta_omega", num(c.delta_omega));
  line("eth.eps_center", num(c.eps_center));
  line("eth.eps_halfwidth", num(c.eps_half_width));
  line("eth.min_bin_count", std::to_string(c.min_bin_count));
  if (!c.convergence_counts.empty())
    line("convergence.samples", fmt::format("{}", fmt::join(c.convergence_counts, ", ")));
  line("output.dir", c.output_dir);
  return out;
}

}  // namespace jch
