#include "jch/operators.hpp"

#include <fmt/format.h>

#include <cmath>
#include <ostream>

namespace jch {

CouplingProfile clean_profile(int sites, double g_cl, double J) {
  if (sites < 1) throw DomainError(fmt::format("L must be >= 1 (got {})", sites));
  if (!(g_cl >= 0.0)) throw DomainError(fmt::format("g_cl must be >= 0 (got {})", g_cl));
  if (!(J > 0.0)) throw DomainError(fmt::format("J must be > 0 (got {})", J));
  CouplingProfile p;
  p.g.assign(sites, g_cl);
  p.J = J;
  p.source = CouplingProfile::Source::clean;
  p.strength = g_cl;
  return p;
}

CouplingProfile sample_couplings(double D, int sites, RandomStream &stream, double J) {
  if (!(D >= 0.0)) throw DomainError(fmt::format("disorder strength D must be >= 0 (got {})", D));
  if (sites < 1) throw DomainError(fmt::format("L must be >= 1 (got {})", sites));
  if (!(J > 0.0)) throw DomainError(fmt::format("J must be > 0 (got {})", J));
  CouplingProfile p;
  p.g.resize(sites);
  for (double &g : p.g) g = D * stream.uniform();
  p.J = J;
  p.source = CouplingProfile::Source::disordered;
  p.strength = D;
  p.seed = stream.seed();
  return p;
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Adds <target|H|source> and its mirror. Each unordered pair is produced once.
void add_pair(Triplets &t, Index source, Index target, double value) {
  if (value == 0.0) return;
  t.emplace_back(target, source, value);
  t.emplace_back(source, target, value);
}

// Forward hops a_i a_{i+1}^dag (photon i -> i+1); the reverse direction is the mirror.
void add_hopping(const SectorBasis &basis, double amplitude, Triplets &t) {
  const int L = basis.sites();
  for (Index s = 0; s < basis.size(); ++s) {
    const std::uint64_t key = basis.key(s);
    for (int i = 0; i + 1 < L; ++i) {
      const int ni = basis.photons(s, i);
      if (ni == 0) continue;
      const int nj = basis.photons(s, i + 1);
      const std::uint64_t moved = key - (std::uint64_t{1} << (basis.shift(i) + 1)) +
                                  (std::uint64_t{1} << (basis.shift(i + 1) + 1));
      const Index target = *basis.find_key(moved);
      add_pair(t, s, target, amplitude * std::sqrt(double(ni)) * std::sqrt(double(nj + 1)));
    }
  }
}

}  // namespace

HermitianOperator build_hamiltonian(const BasisPtr &basis, const CouplingProfile &profile) {
  if (profile.sites() != basis->sites())
    throw DomainError(fmt::format("coupling profile has {} sites, basis has L={}", profile.sites(),
                                  basis->sites()));
  Triplets t;
  t.reserve(4 * basis->size() * basis->sites());
  // JC term a_i s_i^+ : |n, g> -> sqrt(n) |n-1, e>
  for (Index s = 0; s < basis->size(); ++s) {
    const std::uint64_t key = basis->key(s);
    for (int i = 0; i < basis->sites(); ++i) {
      const int n = basis->photons(s, i);
      if (n == 0 || basis->atom(s, i) == 1) continue;
      const std::uint64_t target_key =
          key - SectorBasis::field(n, 0) * (std::uint64_t{1} << basis->shift(i)) +
          SectorBasis::field(n - 1, 1) * (std::uint64_t{1} << basis->shift(i));
      add_pair(t, s, *basis->find_key(target_key), profile.g[i] * std::sqrt(double(n)));
    }
  }
  add_hopping(*basis, -profile.J, t);

  HermitianOperator op;
  op.basis = basis;
  op.matrix.resize(basis->size(), basis->size());
  op.matrix.setFromTriplets(t.begin(), t.end());
  op.label = profile.source == CouplingProfile::Source::clean
                 ? fmt::format("H_clean(g_cl={})", profile.strength)
                 : fmt::format("H(D={}, seed={})", profile.strength, profile.seed);
  return op;
}

HermitianOperator project(const HermitianOperator &op,
                          std::shared_ptr<const AntisymmetricSubspace> subspace) {
  if (!subspace) return op;
  if (op.subspace) throw DomainError("operator is already projected");
  if (subspace->sites != op.basis->sites() || subspace->excitations != op.basis->excitations() ||
      subspace->full_dimension != op.basis->size())
    throw DomainError("antisymmetric subspace was built from a different basis");
  // column and sign of each full-basis state in the subspace; fixed points map nowhere
  std::vector<Index> column(op.basis->size(), -1);
  std::vector<double> sign(op.basis->size(), 0.0);
  for (Index c = 0; c < subspace->dimension(); ++c) {
    column[subspace->pairs[c].first] = c;
    sign[subspace->pairs[c].first] = 1.0;
    column[subspace->pairs[c].second] = c;
    sign[subspace->pairs[c].second] = -1.0;
  }
  // accumulate the upper triangle only, then mirror, so the result is exactly symmetric
  Triplets upper;
  for (Index k = 0; k < op.matrix.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(op.matrix, k); it; ++it) {
      const Index a = column[it.row()];
      const Index b = column[it.col()];
      if (a < 0 || b < 0 || a > b) continue;
      upper.emplace_back(a, b, 0.5 * sign[it.row()] * sign[it.col()] * it.value());
    }
  }
  Eigen::SparseMatrix<double> tri(subspace->dimension(), subspace->dimension());
  tri.setFromTriplets(upper.begin(), upper.end());
  Triplets full;
  for (Index k = 0; k < tri.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(tri, k); it; ++it) {
      if (it.value() == 0.0) continue;
      full.emplace_back(it.row(), it.col(), it.value());
      if (it.row() != it.col()) full.emplace_back(it.col(), it.row(), it.value());
    }
  }
  HermitianOperator out;
  out.basis = op.basis;
  out.label = op.label + "|P=-1";
  out.matrix.resize(subspace->dimension(), subspace->dimension());
  out.matrix.setFromTriplets(full.begin(), full.end());
  out.subspace = std::move(subspace);
  return out;
}

HermitianOperator build_clean_hamiltonian(const BasisPtr &basis, double g_cl, double J,
                                          std::shared_ptr<const AntisymmetricSubspace> subspace) {
  HermitianOperator full = build_hamiltonian(basis, clean_profile(basis->sites(), g_cl, J));
  return project(full, std::move(subspace));
}

std::string Observable::label() const {
  switch (kind) {
    case Kind::site_occupancy: return fmt::format("N_{}", site);
    case Kind::atom_occupancy: return fmt::format("na_{}", site);
    case Kind::photon_occupancy: return fmt::format("nc_{}", site);
    case Kind::kinetic: return "H_kin";
  }
  return "?";
}

Eigen::VectorXd observable_diagonal(const SectorBasis &basis, const Observable &which) {
  if (which.kind == Observable::Kind::kinetic) throw DomainError("kinetic operator is not diagonal");
  if (which.site < 1 || which.site > basis.sites())
    throw DomainError(fmt::format("site index {} outside [1, {}]", which.site, basis.sites()));
  const int i = which.site - 1;
  Eigen::VectorXd d(basis.size());
  for (Index s = 0; s < basis.size(); ++s) {
    switch (which.kind) {
      case Observable::Kind::site_occupancy: d[s] = basis.photons(s, i) + basis.atom(s, i); break;
      case Observable::Kind::atom_occupancy: d[s] = basis.atom(s, i); break;
      default: d[s] = basis.photons(s, i); break;
    }
  }
  return d;
}

HermitianOperator build_observable(const BasisPtr &basis, const Observable &which) {
  HermitianOperator op;
  op.basis = basis;
  op.label = which.label();
  op.matrix.resize(basis->size(), basis->size());
  if (which.kind == Observable::Kind::kinetic) {
    Triplets t;
    add_hopping(*basis, 1.0 / basis->sites(), t);
    op.matrix.setFromTriplets(t.begin(), t.end());
    return op;
  }
  const Eigen::VectorXd d = observable_diagonal(*basis, which);
  Triplets t;
  for (Index s = 0; s < basis->size(); ++s)
    if (d[s] != 0.0) t.emplace_back(s, s, d[s]);
  op.matrix.setFromTriplets(t.begin(), t.end());
  return op;
}

void dump_operator(std::ostream &os, const HermitianOperator &op) {
  for (Index k = 0; k < op.matrix.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(op.matrix, k); it; ++it)
      os << fmt::format("{} {} {:.17g}\n", it.row(), it.col(), it.value());
}

}  // namespace jch
