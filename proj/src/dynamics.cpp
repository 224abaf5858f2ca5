#include "jch/dynamics.hpp"

#include "jch/operators.hpp"

#include <fmt/format.h>

#include <cmath>

namespace jch {

std::string to_string(InitialStateSpec::Kind kind) {
  switch (kind) {
    case InitialStateSpec::Kind::photon_odd_sites: return "photon-odd-sites";
    case InitialStateSpec::Kind::atom_odd_sites: return "atom-odd-sites";
    case InitialStateSpec::Kind::mixed_two_site: return "mixed-two-site";
    case InitialStateSpec::Kind::explicit_configuration: return "explicit";
  }
  return "?";
}

InitialStateSpec::Kind parse_initial_state_kind(const std::string &name) {
  if (name == "photon-odd-sites") return InitialStateSpec::Kind::photon_odd_sites;
  if (name == "atom-odd-sites") return InitialStateSpec::Kind::atom_odd_sites;
  if (name == "mixed-two-site") return InitialStateSpec::Kind::mixed_two_site;
  if (name == "explicit") return InitialStateSpec::Kind::explicit_configuration;
  throw DomainError(fmt::format("unknown initial state '{}'", name));
}

InitialStateSpec make_initial_state(InitialStateSpec::Kind kind, int sites, int excitations) {
  InitialStateSpec spec;
  spec.kind = kind;
  spec.configuration.photons.assign(sites, 0);
  spec.configuration.atoms.assign(sites, 0);
  const int odd_sites = (sites + 1) / 2;
  switch (kind) {
    case InitialStateSpec::Kind::photon_odd_sites:
    case InitialStateSpec::Kind::atom_odd_sites:
      if (odd_sites != excitations)
        throw DomainError(fmt::format("{} needs N = number of odd sites ({}), got L={}, N={}", to_string(kind),
                                      odd_sites, sites, excitations));
      for (int i = 0; i < sites; i += 2) {
        if (kind == InitialStateSpec::Kind::photon_odd_sites)
          spec.configuration.photons[i] = 1;
        else
          spec.configuration.atoms[i] = 1;
      }
      break;
    case InitialStateSpec::Kind::mixed_two_site:
      if (sites != 8 || excitations != 4)
        throw DomainError(fmt::format("mixed-two-site needs L=8, N=4 (got L={}, N={})", sites, excitations));
      for (int i : {0, 4}) {
        spec.configuration.photons[i] = 1;
        spec.configuration.atoms[i] = 1;
      }
      break;
    case InitialStateSpec::Kind::explicit_configuration:
      throw DomainError("explicit initial states are built with explicit_initial_state");
  }
  return spec;
}

InitialStateSpec explicit_initial_state(const FockConfiguration &cfg) {
  return {InitialStateSpec::Kind::explicit_configuration, cfg};
}

ComplexVector initial_vector(const SectorBasis &basis, const InitialStateSpec &spec) {
  ComplexVector psi = ComplexVector::Zero(basis.size());
  psi[basis.rank(spec.configuration)] = 1.0;
  return psi;
}

TimeGrid TimeGrid::logarithmic(double t_min, double t_max, int points_per_decade, bool include_zero) {
  if (!(t_min > 0.0) || !(t_max > t_min) || points_per_decade < 1)
    throw DomainError("logarithmic grid needs 0 < t_min < t_max and points_per_decade >= 1");
  TimeGrid grid;
  grid.spacing = Spacing::logarithmic;
  if (include_zero) grid.times.push_back(0.0);
  const double lo = std::log10(t_min);
  const double decades = std::log10(t_max) - lo;
  const auto steps = static_cast<Index>(std::llround(decades * points_per_decade));
  for (Index k = 0; k <= steps; ++k)
    grid.times.push_back(std::pow(10.0, lo + decades * static_cast<double>(k) / static_cast<double>(steps)));
  return grid;
}

TimeGrid TimeGrid::linear(double t_begin, double t_end, Index points) {
  if (!(t_begin >= 0.0) || !(t_end > t_begin) || points < 2)
    throw DomainError("linear grid needs 0 <= t_begin < t_end and >= 2 points");
  TimeGrid grid;
  grid.spacing = Spacing::linear;
  for (Index k = 0; k < points; ++k)
    grid.times.push_back(t_begin + (t_end - t_begin) * static_cast<double>(k) / static_cast<double>(points - 1));
  return grid;
}

TimeGrid TimeGrid::windowed(const std::vector<double> &starts, double width, double dt) {
  if (!(width > 0.0) || !(dt > 0.0) || starts.empty()) throw DomainError("windowed grid needs width, dt > 0");
  TimeGrid grid;
  grid.spacing = Spacing::windowed;
  for (double start : starts) {
    if (!grid.times.empty() && !(start > grid.times.back()))
      throw DomainError("windowed grid windows must be increasing and disjoint");
    const auto steps = static_cast<Index>(std::ceil(width / dt - 1e-9));
    for (Index k = 0; k < steps; ++k) grid.times.push_back(start + dt * static_cast<double>(k));
  }
  return grid;
}

TimeGrid TimeGrid::occupation_windows(double dt) { return windowed({0.0, 1000.0, 1.0e6}, 25.0, dt); }

namespace {

void require_evolvable(const SpectralDecomposition &spec, const Eigen::Ref<const ComplexVector> &psi0) {
  if (!spec.complete())
    throw DomainError(fmt::format("{}: time evolution needs the complete eigenbasis of the sector", spec.label));
  if (psi0.size() != spec.eigenvectors.rows())
    throw DomainError(fmt::format("state has {} amplitudes, sector has {}", psi0.size(), spec.eigenvectors.rows()));
  if (std::abs(psi0.norm() - 1.0) > kNormTolerance) throw DomainError("initial state is not normalized");
}

}  // namespace

ComplexMatrix evolve(const SpectralDecomposition &spec, const Eigen::Ref<const ComplexVector> &psi0,
                     const TimeGrid &grid) {
  require_evolvable(spec, psi0);
  if (grid.times.empty()) throw DomainError("empty time grid");
  const Eigen::MatrixXd &V = spec.eigenvectors;
  const Index n = V.cols();
  const auto T = static_cast<Index>(grid.times.size());
  // overlaps c_n = <n|psi0>, with V real
  const Eigen::VectorXd c_re = V.transpose() * psi0.real();
  const Eigen::VectorXd c_im = V.transpose() * psi0.imag();
  Eigen::MatrixXd coeff_re(n, T), coeff_im(n, T);
  for (Index t = 0; t < T; ++t) {
    const double time = grid.times[static_cast<std::size_t>(t)];
    for (Index k = 0; k < n; ++k) {
      const double phase = -spec.eigenvalues[k] * time;
      const double cs = std::cos(phase);
      const double sn = std::sin(phase);
      coeff_re(k, t) = c_re[k] * cs - c_im[k] * sn;
      coeff_im(k, t) = c_re[k] * sn + c_im[k] * cs;
    }
  }
  ComplexMatrix out(V.rows(), T);
  out.real() = V * coeff_re;
  out.imag() = V * coeff_im;
  // t = 0 reproduces psi0 exactly rather than up to the V V^T round trip
  for (Index t = 0; t < T; ++t)
    if (grid.times[static_cast<std::size_t>(t)] == 0.0) out.col(t) = psi0;
  return out;
}

ComplexVector propagate(const SpectralDecomposition &spec, const Eigen::Ref<const ComplexVector> &psi0, double t) {
  require_evolvable(spec, psi0);
  const Eigen::MatrixXd &V = spec.eigenvectors;
  ComplexVector c = V.transpose().cast<std::complex<double>>() * psi0;
  for (Index k = 0; k < c.size(); ++k) c[k] *= std::polar(1.0, -spec.eigenvalues[k] * t);
  return V.cast<std::complex<double>>() * c;
}

std::vector<double> ee_trajectory(const Bipartition &cut, const SpectralDecomposition &spec,
                                  const Eigen::Ref<const ComplexVector> &psi0, const TimeGrid &grid) {
  const ComplexMatrix states = evolve(spec, psi0, grid);
  std::vector<double> s(grid.times.size());
  for (Index t = 0; t < states.cols(); ++t) {
    ComplexVector col = states.col(t);
    // renormalize away roundoff accumulated over long propagation times
    col /= col.norm();
    s[static_cast<std::size_t>(t)] = entanglement_entropy<std::complex<double>>(cut, col);
  }
  return s;
}

OccupationTable occupation_trajectory(const SpectralDecomposition &spec,
                                      const Eigen::Ref<const ComplexVector> &psi0, const TimeGrid &grid) {
  const ComplexMatrix states = evolve(spec, psi0, grid);
  const SectorBasis &basis = *spec.basis;
  const int L = basis.sites();
  const Eigen::MatrixXd prob = states.cwiseAbs2();  // states x times
  Eigen::MatrixXd nc(basis.size(), L), na(basis.size(), L);
  for (int i = 1; i <= L; ++i) {
    nc.col(i - 1) = observable_diagonal(basis, Observable::photon_occupancy(i));
    na.col(i - 1) = observable_diagonal(basis, Observable::atom_occupancy(i));
  }
  OccupationTable table;
  table.photons = prob.transpose() * nc;
  table.atoms = prob.transpose() * na;
  return table;
}

}  // namespace jch
