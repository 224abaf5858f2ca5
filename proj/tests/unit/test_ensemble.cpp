#include "doctest.h"

#include "jch/ensemble.hpp"
#include "jch/output.hpp"
#include "jch/presets.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace jch;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small(Index samples) {
  ExperimentConfig c;
  c.name = "small";
  c.L = 4;
  c.sweep = {2.0, 100.0};
  c.samples = samples;
  c.seed = 5;
  c.workers = 1;
  c.tasks.entanglement = true;
  c.tasks.dynamics = true;
  c.tasks.eth = true;
  c.page_samples = 200;
  c.grid.t_max = 100.0;
  c.grid.points_per_decade = 4;
  c.eps_half_width = 0.2;
  c.delta_omega = 0.05;
  c.min_bin_count = 1;
  return c;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path &p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

fs::path scratch(const std::string &name) {
  const fs::path dir = fs::temp_directory_path() / ("jch_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("ensemble: clean sweep gives one ratio per value") {
  ExperimentConfig c;
  c.L = 6;
  c.mode = Mode::clean;
  c.sweep = {0.5, 1.0, 4.0};
  c.workers = 1;
  const auto result = run_experiment(c);
  REQUIRE(result.points.size() == 3);
  CHECK(result.records.size() == 3);
  CHECK(result.spectral_dimension < result.dimension);
  for (const auto &p : result.points) {
    CHECK(p.samples == 1);
    CHECK(std::isfinite(p.r_mean));
    CHECK(p.r_mean > 0.0);
    CHECK(p.r_mean < 1.0);
  }
}

TEST_CASE("ensemble: realizations are a prefix-stable stream") {
  const auto one = run_experiment(small(1));
  const auto two = run_experiment(small(2));
  for (Index p = 0; p < 2; ++p) {
    const auto a = one.point_records(p);
    const auto b = two.point_records(p);
    REQUIRE(a.size() == 1);
    REQUIRE(b.size() == 2);
    CHECK(a[0].seed == b[0].seed);
    CHECK(a[0].couplings == b[0].couplings);
    CHECK(a[0].r_mean == b[0].r_mean);
    CHECK(a[0].ee == b[0].ee);
    CHECK(b[0].seed != b[1].seed);
  }
  CHECK(one.point_records(0)[0].seed != one.point_records(1)[0].seed);
}

TEST_CASE("ensemble: results do not depend on the worker count") {
  auto c = small(6);
  const fs::path d1 = scratch("w1"), d3 = scratch("w3");
  write_outputs(run_experiment(c), d1);
  c.workers = 3;
  const auto r3 = run_experiment(c);
  CHECK(r3.workers == 3);
  write_outputs(r3, d3);
  Index compared = 0;
  for (const auto &f : expected_files(c)) {
    if (f == "metadata.json") continue;
    CHECK_MESSAGE(slurp(d1 / f) == slurp(d3 / f), f);
    ++compared;
  }
  CHECK(compared > 10);
  fs::remove_all(d1);
  fs::remove_all(d3);
}

TEST_CASE("ensemble: memory cap is enforced before any work") {
  ExperimentConfig c;
  c.L = 10;
  c.tasks.eth = true;
  c.memory_cap_mb = 100.0;
  c.workers = 1;
  CHECK(memory_estimate_bytes(c, 1) > 100.0 * 1024 * 1024);
  CHECK_THROWS_AS(run_experiment(c), ResourceError);
}

TEST_CASE("ensemble: aggregates agree with the per-realization files") {
  auto c = small(8);
  c.convergence_counts = {2, 4};
  const auto result = run_experiment(c);
  const fs::path dir = scratch("agg");
  const auto written = write_outputs(result, dir);
  for (const auto &f : expected_files(c)) CHECK_MESSAGE(fs::exists(dir / f), f);

  for (Index p = 0; p < 2; ++p) {
    const auto rows = read_csv(dir / point_directory(c, p) / "level_stats.csv");
    REQUIRE(rows.size() == 9);
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t k = 1; k < rows.size(); ++k) {
      const double r = std::stod(rows[k][1]);
      sum += r;
      sum2 += r * r;
    }
    const double mean = sum / 8.0;
    const double sd = std::sqrt((sum2 - 8.0 * mean * mean) / 7.0);
    CHECK(result.points[p].r_mean == doctest::Approx(mean).epsilon(1e-12));
    CHECK(result.points[p].r_stderr == doctest::Approx(sd / std::sqrt(8.0)).epsilon(1e-9));
  }
  const auto agg = read_csv(dir / "level_stats_aggregate.csv");
  REQUIRE(agg.size() == 3);
  CHECK(agg[0][0] == "D_over_J");
  CHECK(std::stod(agg[1][4]) == result.points[0].r_mean);

  // convergence rows are the aggregates of the first n realizations
  REQUIRE(result.convergence.size() == 2);
  REQUIRE(result.convergence[0].size() == 2);
  const auto first2 = aggregate(c, result.point_records(0).subspan(0, 2), result.page);
  CHECK(result.convergence[0][0].r_mean == first2.r_mean);
  CHECK(result.convergence[0][0].samples == 2);
  fs::remove_all(dir);
}

TEST_CASE("ensemble: spread statistics") {
  auto c = small(1);
  c.sweep = {2.0};
  const auto one = run_experiment(c);
  CHECK(std::isnan(one.points[0].entropy.deviation));

  // standard error shrinks roughly as 1/sqrt(n)
  c.tasks = Tasks{};
  c.L = 6;
  c.samples = 400;
  const auto big = run_experiment(c);
  const auto half = aggregate(c, big.point_records(0).subspan(0, 200), big.page);
  const double ratio = half.r_stderr / big.points[0].r_stderr;
  CHECK(ratio > std::sqrt(2.0) * 0.8);
  CHECK(ratio < std::sqrt(2.0) * 1.25);
}

TEST_CASE("ensemble: Gamma bins average realizations") {
  const auto result = run_experiment(small(4));
  for (const auto &p : result.points)
    for (const auto &e : p.eth) {
      REQUIRE(e.gamma.size() == e.binned.bins.size());
      for (std::size_t k = 0; k < e.gamma.size(); ++k) {
        const auto &g = e.gamma[k];
        CHECK(g.omega == e.binned.bins[k].omega);
        CHECK(g.realizations >= 1);
        CHECK(g.realizations <= 4);
        CHECK(g.mean >= 1.0 - 1e-12);
        CHECK(g.pooled >= 1.0 - 1e-12);
      }
    }
}

TEST_CASE("presets: every preset validates at both scales") {
  for (const auto &name : preset_names())
    for (Scale scale : {Scale::desk, Scale::paper}) {
      CAPTURE(name);
      const auto p = make_preset(name, scale);
      CHECK(p.name == name);
      CHECK_FALSE(p.runs.empty());
      std::map<std::string, int> seen;
      for (const auto &run : p.runs) {
        CAPTURE(run.name);
        CHECK(validate(run).empty());
        CHECK(++seen[run.name] == 1);
        if (scale == Scale::desk) CHECK(run.L <= 8);
      }
      const auto files = p.manifest();
      CHECK(std::find(files.begin(), files.end(), p.runs.front().name + "/metadata.json") != files.end());
    }
  CHECK_THROWS_AS(make_preset("fig99"), DomainError);
  CHECK(parse_scale("paper") == Scale::paper);
  CHECK_THROWS_AS(parse_scale("huge"), DomainError);
}

TEST_CASE("presets: overrides") {
  auto p = make_preset("appendixA-convergence", Scale::desk);
  for (auto &run : p.runs) {
    apply_overrides(run, PresetOverrides{7, 8, 2, 512.0});
    CHECK(run.seed == 7);
    CHECK(run.workers == 2);
    CHECK(run.memory_cap_mb == 512.0);
    if (run.mode == Mode::disordered) CHECK(run.samples == 8);
    if (!run.convergence_counts.empty()) CHECK(run.convergence_counts.back() == 8);
    CHECK(validate(run).empty());
  }
}

TEST_CASE("output: formatting and layout") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  ExperimentConfig c;
  c.sweep = {2.0, 0.01};
  CHECK(point_directory(c, 0) == "D_over_J-2");
  CHECK(point_directory(c, 1) == "D_over_J-0.01");
}
