// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
//
// usage: jch_acceptance <path to jch cli>

#include "oracle.hpp"

#include "jch/ensemble.hpp"
#include "jch/eth.hpp"
#include "jch/output.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace jch;
namespace fs = std::filesystem;

namespace {

// Tolerances
constexpr double kWignerDyson = 0.536;
constexpr double kPoisson = 0.386;
constexpr double kRatioTolerance = 0.02;
constexpr double kErgodicEntropyLo = 0.9;
constexpr double kErgodicEntropyHi = 1.0;
constexpr double kLocalizedEntropyHi = 0.4;
constexpr double kGrowthR2 = 0.9;
constexpr double kChiralTolerance = 1e-10;
constexpr double kRdmTolerance = 1e-10;
constexpr double kOracleTolerance = 1e-14;
constexpr double kScalingFactor = 2.0;
constexpr double kGammaTolerance = 0.10;
constexpr double kIdentityTolerance = 1e-12;

// Ensemble sizes
constexpr Index kLevelSamples = 400;
constexpr Index kEntropySamplesErgodic = 40;
constexpr Index kEntropySamplesLocalized = 20;
constexpr Index kGrowthSamples = 1000;  // 200 leaves r^2 seed-dependent (0.82 to 0.94)
constexpr Index kEthSamplesL6 = 1000;
constexpr Index kChiralSamples = 100;
constexpr Index kRdmStates = 100;
constexpr std::uint64_t kSeed = 20240601;

int failures = 0;

void report(bool pass, const std::string &name, const std::string &detail) {
  if (!pass) ++failures;
  fmt::print("{} {}: {}\n", pass ? "PASS" : "FAIL", name, detail);
  std::fflush(stdout);
}

ExperimentConfig base(int L, std::vector<double> sweep, Index samples) {
  ExperimentConfig c;
  c.L = L;
  c.sweep = std::move(sweep);
  c.samples = samples;
  c.seed = kSeed;
  c.workers = 1;
  c.tasks = Tasks{};
  return c;
}

ExperimentResult run(const ExperimentConfig &config) {
  const auto start = std::chrono::steady_clock::now();
  RunOptions options;
  const Index total = static_cast<Index>(config.sweep.size()) * config.effective_samples();
  options.progress = [&](Index done, Index all) {
    if (done % std::max<Index>(1, total / 4) == 0 || done == all)
      fmt::print(stderr, "  [L={} {}] {}/{}\n", config.L, config.name, done, all);
  };
  auto result = run_experiment(config, options);
  fmt::print(stderr, "  [L={} {}] {:.1f} s\n", config.L, config.name,
             std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  return result;
}

const EthAggregate &find_eth(const PointResult &p, const std::string &label) {
  for (const auto &e : p.eth)
    if (e.label == label) return e;
  throw std::runtime_error("missing observable " + label);
}

void level_statistics() {
  auto c = base(8, {2.0, 100.0}, kLevelSamples);
  c.name = "levels";
  const auto result = run(c);
  const auto &erg = result.points[0];
  const auto &mbl = result.points[1];
  report(std::abs(erg.r_mean - kWignerDyson) <= kRatioTolerance, "level statistics, ergodic (L=8, D/J=2)",
         fmt::format("<r> = {:.4f} +- {:.4f} over {} realizations, target {} +- {}", erg.r_mean, erg.r_stderr,
                     erg.samples, kWignerDyson, kRatioTolerance));
  report(std::abs(mbl.r_mean - kPoisson) <= kRatioTolerance, "level statistics, localized (L=8, D/J=100)",
         fmt::format("<r> = {:.4f} +- {:.4f} over {} realizations, target {} +- {}", mbl.r_mean, mbl.r_stderr,
                     mbl.samples, kPoisson, kRatioTolerance));
}

struct EthRuns {
  double fluctuation_l6 = 0.0;
  double fluctuation_l8 = 0.0;
};

EthRuns entanglement_and_eth() {
  EthRuns out;
  auto c = base(8, {2.0}, kEntropySamplesErgodic);
  c.name = "ergodic";
  c.tasks.entanglement = true;
  c.tasks.eth = true;
  const auto erg = run(c);
  const auto &p = erg.points[0];

  auto m = base(8, {100.0}, kEntropySamplesLocalized);
  m.name = "localized";
  m.tasks.entanglement = true;
  const auto mbl = run(m);
  const double s_erg = p.entropy.normalized_mean();
  const double s_mbl = mbl.points[0].entropy.normalized_mean();
  report(s_erg >= kErgodicEntropyLo && s_erg <= kErgodicEntropyHi, "entanglement normalization, ergodic (L=8, D/J=2)",
         fmt::format("<S>/S_P = {:.4f} ({} realizations, S_P = {:.4f} +- {:.4f}), band [{}, {}]", s_erg, p.samples,
                     erg.page.mean, erg.page.standard_error, kErgodicEntropyLo, kErgodicEntropyHi));
  report(s_mbl <= kLocalizedEntropyHi, "entanglement normalization, localized (L=8, D/J=100)",
         fmt::format("<S>/S_P = {:.4f} ({} realizations), bound {}", s_mbl, mbl.points[0].samples,
                     kLocalizedEntropyHi));

  // normality ratio in the lowest populated L*omega bins
  const auto &n4 = find_eth(p, Observable::half_chain_occupancy(8).label());
  const double target = std::numbers::pi / 2.0;
  bool ok = n4.gamma.size() >= 3;
  std::string detail;
  for (std::size_t k = 0; k < std::min<std::size_t>(3, n4.gamma.size()); ++k) {
    const auto &g = n4.gamma[k];
    ok = ok && std::abs(g.mean - target) <= kGammaTolerance * target;
    detail += fmt::format("L*omega={:.3f}: Gamma={:.4f}+-{:.4f} ({} realizations); ", 8 * g.omega, g.mean,
                          g.standard_error, g.realizations);
  }
  report(ok, "normality ratio (L=8, D/J=2, N_4)",
         detail + fmt::format("target pi/2 within {:.0f}%", 100 * kGammaTolerance));
  out.fluctuation_l8 = n4.fluctuation_mean;

  auto s = base(6, {2.0}, kEthSamplesL6);
  s.name = "eth";
  s.tasks.eth = true;
  const auto l6 = run(s);
  out.fluctuation_l6 = find_eth(l6.points[0], Observable::half_chain_occupancy(6).label()).fluctuation_mean;
  return out;
}

void eth_scaling(const EthRuns &r) {
  const double expected = std::sqrt((6.0 * static_cast<double>(sector_dimension(6, 3))) /
                                    (8.0 * static_cast<double>(sector_dimension(8, 4))));
  const double ratio = r.fluctuation_l8 / r.fluctuation_l6;
  const bool ok = r.fluctuation_l8 < r.fluctuation_l6 && ratio >= expected / kScalingFactor &&
                  ratio <= expected * kScalingFactor;
  report(ok, "ETH scaling of N_{L/2} fluctuations (D/J=2, L=6 -> 8)",
         fmt::format("L=6: {:.5f}, L=8: {:.5f}, ratio {:.4f}, (L D)^(-1/2) predicts {:.4f} within x{}",
                     r.fluctuation_l6, r.fluctuation_l8, ratio, expected, kScalingFactor));
}

void entanglement_growth() {
  auto c = base(6, {100.0}, kGrowthSamples);
  c.name = "growth";
  c.tasks.dynamics = true;
  c.grid.t_min = 0.1;
  c.grid.t_max = 1e4;
  c.grid.points_per_decade = 10;
  const auto result = run(c);
  const auto &p = result.points[0];
  std::vector<double> x, y;
  for (std::size_t k = 0; k < result.grid.times.size(); ++k) {
    const double t = result.grid.times[k];
    if (t < 10.0 * (1 - 1e-12) || t > 1e4 * (1 + 1e-12)) continue;
    x.push_back(std::log(t));
    y.push_back(p.ee_t_mean[k]);
  }
  const auto fit = oracle::fit_line(x, y);
  report(fit.slope > 0.0 && fit.r2 >= kGrowthR2, "logarithmic entanglement growth (L=6, D/J=100)",
         fmt::format("S = {:.4f} + {:.4f} ln t over {} times in [10, 1e4], {} realizations, r^2 = {:.4f} "
                     "(need slope > 0, r^2 >= {})",
                     fit.intercept, fit.slope, x.size(), p.samples, fit.r2, kGrowthR2));
}

void chiral_symmetry() {
  auto b = enumerate_basis(6, 3);
  RandomStream stream(derive_seed(kSeed, 7, 0));
  double worst = 0.0;
  for (Index r = 0; r < kChiralSamples; ++r) {
    const auto spec = diagonalize(build_hamiltonian(b, sample_couplings(2.0, 6, stream)), false);
    const Index D = spec.count();
    for (Index k = 0; k < D; ++k) worst = std::max(worst, std::abs(spec.eigenvalues[k] + spec.eigenvalues[D - 1 - k]));
  }
  report(worst <= kChiralTolerance, "chiral spectrum symmetry (L=6, 100 realizations, dsyevd)",
         fmt::format("max |E_k + E_(D-1-k)| = {:.3e}, tolerance {:.0e}", worst, kChiralTolerance));

  auto b42 = enumerate_basis(4, 2);
  auto b21 = enumerate_basis(2, 1);
  const double c42 = commutator_norm(reflection_action(*b42), chiral_action(*b42));
  const double c21 = commutator_norm(reflection_action(*b21), chiral_action(*b21));
  report(c42 == 0.0 && c21 > 0.0, "reflection/chiral commutation",
         fmt::format("||[P, Gamma]|| = {} for (4,2), {:.4f} for (2,1)", c42, c21));
}

void oracle_equivalence() {
  RandomStream stream(derive_seed(kSeed, 8, 0));
  double worst_h = 0.0;
  for (int L = 1; L <= 3; ++L)
    for (int N = 0; N <= 3; ++N) {
      auto b = enumerate_basis(L, N);
      const auto p = sample_couplings(3.0, L, stream, 0.9);
      const Eigen::MatrixXd H = build_hamiltonian(b, p).dense();
      worst_h = std::max(worst_h, (H - oracle::second_quantized_hamiltonian(*b, p.g, p.J)).cwiseAbs().maxCoeff());
    }
  report(worst_h <= kOracleTolerance, "Hamiltonian vs second-quantized oracle (L <= 3, N <= 3)",
         fmt::format("max entry difference {:.3e}, tolerance {:.0e}", worst_h, kOracleTolerance));

  int mismatches = 0, sectors = 0;
  for (int L = 1; L <= 6; ++L)
    for (int N = 0; N <= L; ++N) {
      ++sectors;
      const auto brute = oracle::brute_force_configurations(L, N);
      auto b = enumerate_basis(L, N);
      bool ok = b->size() == static_cast<Index>(brute.size()) && sector_dimension(L, N) == brute.size();
      for (const auto &cfg : brute) ok = ok && b->find(cfg).has_value();
      if (!ok) ++mismatches;
    }
  report(mismatches == 0, "basis vs exhaustive enumeration (L <= 6, N <= L)",
         fmt::format("{} of {} sectors mismatch", mismatches, sectors));

  auto b = enumerate_basis(6, 3);
  const Bipartition cut(b);
  double worst = 0.0;
  for (Index k = 0; k < kRdmStates; ++k) {
    Eigen::VectorXcd psi(b->size());
    for (Index i = 0; i < b->size(); ++i) psi[i] = {stream.normal(), stream.normal()};
    psi.normalize();
    const Eigen::VectorXd ev = reduced_density_matrix<std::complex<double>>(cut, psi).eigenvalues();
    worst = std::max(worst, (ev - oracle::rdm_spectrum_by_svd(*b, psi)).cwiseAbs().maxCoeff());
  }
  report(worst <= kRdmTolerance, "RDM spectra vs SVD oracle (L=6, 100 random states)",
         fmt::format("max eigenvalue difference {:.3e}, tolerance {:.0e}", worst, kRdmTolerance));
}

void zero_coupling_identity() {
  double worst = 0.0;
  for (auto [L, J] : {std::pair{6, 1.0}, std::pair{6, 0.7}, std::pair{4, 1.3}}) {
    auto b = enumerate_basis(L, L / 2);
    const auto spec = diagonalize(build_hamiltonian(b, clean_profile(L, 0.0, J)));
    const auto table = matrix_elements(build_observable(b, Observable::kinetic()), spec, full_window(spec.count()),
                                       OffDiagonalTarget{0.5, 0.0, 1e-12});
    for (const auto &d : table.diagonal)
      worst = std::max(worst, std::abs(d.value + spec.eigenvalues[d.n] / (J * L)));
  }
  report(worst <= kIdentityTolerance, "zero-coupling identity H_kin = -H/(J L)",
         fmt::format("max |(H_kin)_nn + E_n/(J L)| = {:.3e}, tolerance {:.0e}", worst, kIdentityTolerance));
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism(const std::string &cli) {
  const fs::path root = fs::temp_directory_path() / "jch_acceptance_determinism";
  fs::remove_all(root);
  auto launch = [&](int workers) {
    const fs::path out = root / fmt::format("w{}", workers);
    const std::string cmd = fmt::format("\"{}\" preset fig7-scaling --samples 3 --seed 11 --workers {} --out \"{}\" 2>/dev/null >/dev/null",
                                        cli, workers, out.string());
    return std::system(cmd.c_str()) == 0 ? out / "fig7-scaling" : fs::path();
  };
  const fs::path a = launch(1);
  const fs::path b = launch(3);
  Index compared = 0, differing = 0;
  if (!a.empty() && !b.empty()) {
    for (const auto &entry : fs::recursive_directory_iterator(a)) {
      if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
      const fs::path other = b / fs::relative(entry.path(), a);
      ++compared;
      if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) ++differing;
    }
  }
  report(!a.empty() && !b.empty() && compared > 0 && differing == 0, "determinism across worker counts (fig7-scaling)",
         fmt::format("{} CSV files compared between --workers 1 and 3, {} differ", compared, differing));
  fs::remove_all(root);
}

}  // namespace

int main(int argc, char **argv) {
  if (argc < 2) {
    fmt::print(stderr, "usage: {} <jch cli>\n", argv[0]);
    return 2;
  }
  try {
    chiral_symmetry();
    oracle_equivalence();
    zero_coupling_identity();
    entanglement_growth();
    eth_scaling(entanglement_and_eth());
    level_statistics();
    determinism(argv[1]);
  } catch (const std::exception &e) {
    fmt::print("FAIL acceptance harness: {}\n", e.what());
    return 1;
  }
  fmt::print("{} failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
