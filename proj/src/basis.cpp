#include "jch/basis.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <ostream>

namespace jch {

int FockConfiguration::excitations() const {
  return std::accumulate(photons.begin(), photons.end(), 0) +
         std::accumulate(atoms.begin(), atoms.end(), 0);
}

std::string to_string(const FockConfiguration &cfg) {
  std::string out;
  for (int i = 0; i < cfg.sites(); ++i) {
    if (i > 0) out += " | ";
    out += fmt::format("{} {}", cfg.photons[i], cfg.atoms[i] ? 'e' : 'g');
  }
  return out;
}

FockConfiguration make_configuration(const std::vector<std::pair<int, int>> &sites) {
  FockConfiguration cfg;
  for (auto [c, a] : sites) {
    cfg.photons.push_back(c);
    cfg.atoms.push_back(a);
  }
  return cfg;
}

namespace {

void enumerate_into(int site, int sites, int remaining, std::uint64_t prefix,
                    std::vector<std::uint64_t> &out) {
  const int shift = 5 * (sites - 1 - site);
  if (site == sites - 1) {
    // last site absorbs the remainder; (r, g) sorts before (r-1, e)
    out.push_back(prefix | (SectorBasis::field(remaining, 0) << shift));
    if (remaining >= 1) out.push_back(prefix | (SectorBasis::field(remaining - 1, 1) << shift));
    return;
  }
  for (int c = remaining; c >= 0; --c) {
    for (int a = 1; a >= 0; --a) {
      if (c + a > remaining) continue;
      enumerate_into(site + 1, sites, remaining - c - a,
                     prefix | (SectorBasis::field(c, a) << shift), out);
    }
  }
}

}  // namespace

SectorBasis::SectorBasis(int sites, int excitations) : sites_(sites), excitations_(excitations) {
  if (sites < 1) throw DomainError(fmt::format("L must be >= 1 (got {})", sites));
  if (excitations < 0) throw DomainError(fmt::format("N must be >= 0 (got {})", excitations));
  if (sites > kMaxSites || excitations > kMaxExcitations)
    throw DomainError(fmt::format("sector (L={}, N={}) exceeds packed-key limits (L <= {}, N <= {})",
                                  sites, excitations, kMaxSites, kMaxExcitations));
  keys_.reserve(sector_dimension(sites, excitations));
  enumerate_into(0, sites, excitations, 0, keys_);
}

FockConfiguration SectorBasis::unrank(Index index) const {
  if (index < 0 || index >= size())
    throw DomainError(fmt::format("basis index {} outside [0, {})", index, size()));
  FockConfiguration cfg;
  cfg.photons.resize(sites_);
  cfg.atoms.resize(sites_);
  for (int i = 0; i < sites_; ++i) {
    cfg.photons[i] = photons(index, i);
    cfg.atoms[i] = atom(index, i);
  }
  return cfg;
}

std::uint64_t SectorBasis::pack(const FockConfiguration &cfg) const {
  std::uint64_t key = 0;
  for (int i = 0; i < sites_; ++i) key |= field(cfg.photons[i], cfg.atoms[i]) << shift(i);
  return key;
}

std::optional<Index> SectorBasis::find_key(std::uint64_t key) const {
  auto it = std::lower_bound(keys_.begin(), keys_.end(), key, std::greater<>());
  if (it == keys_.end() || *it != key) return std::nullopt;
  return static_cast<Index>(it - keys_.begin());
}

std::optional<Index> SectorBasis::find(const FockConfiguration &cfg) const {
  if (cfg.sites() != sites_ || static_cast<int>(cfg.atoms.size()) != sites_) return std::nullopt;
  for (int i = 0; i < sites_; ++i) {
    if (cfg.atoms[i] < 0 || cfg.atoms[i] > 1) return std::nullopt;
    if (cfg.photons[i] < 0 || cfg.photons[i] > excitations_) return std::nullopt;
  }
  if (cfg.excitations() != excitations_) return std::nullopt;
  return find_key(pack(cfg));
}

Index SectorBasis::rank(const FockConfiguration &cfg) const {
  if (cfg.sites() != sites_ || static_cast<int>(cfg.atoms.size()) != sites_)
    throw DomainError(fmt::format("configuration has {} sites, sector has L={}", cfg.sites(), sites_));
  for (int i = 0; i < sites_; ++i) {
    if (cfg.atoms[i] < 0 || cfg.atoms[i] > 1)
      throw DomainError(fmt::format("atom level at site {} is {}, must be 0 or 1", i + 1, cfg.atoms[i]));
    if (cfg.photons[i] < 0)
      throw DomainError(fmt::format("photon count at site {} is negative ({})", i + 1, cfg.photons[i]));
  }
  if (cfg.excitations() != excitations_)
    throw DomainError(fmt::format("total excitation {} differs from sector N={}", cfg.excitations(),
                                  excitations_));
  return *find_key(pack(cfg));
}

namespace {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

}  // namespace

std::uint64_t sector_dimension(int sites, int excitations) {
  if (sites < 1 || excitations < 0) throw DomainError("sector_dimension needs L >= 1, N >= 0");
  std::uint64_t total = 0;
  for (int s = 0; s <= std::min(excitations, sites); ++s)
    total += binomial(sites, s) * binomial(excitations - s + sites - 1, sites - 1);
  return total;
}

BasisPtr enumerate_basis(int sites, int excitations) {
  return std::make_shared<const SectorBasis>(sites, excitations);
}

void dump_basis(std::ostream &os, const SectorBasis &basis) {
  for (Index i = 0; i < basis.size(); ++i) os << i << ": " << to_string(basis.unrank(i)) << '\n';
}

SymmetryAction chiral_action(const SectorBasis &basis) {
  SymmetryAction action;
  action.kind = SymmetryKind::chiral;
  action.permutation.resize(basis.size());
  action.signs.resize(basis.size());
  for (Index i = 0; i < basis.size(); ++i) {
    action.permutation[i] = i;
    int sign = 1;
    // 1-based site j = site + 1: even j picks up photon parity, odd j the sigma^z eigenvalue
    for (int site = 0; site < basis.sites(); ++site) {
      if ((site + 1) % 2 == 0) {
        if (basis.photons(i, site) % 2 != 0) sign = -sign;
      } else if (basis.atom(i, site) == 0) {
        sign = -sign;
      }
    }
    action.signs[i] = sign;
  }
  return action;
}

SymmetryAction reflection_action(const SectorBasis &basis) {
  SymmetryAction action;
  action.kind = SymmetryKind::reflection;
  action.permutation.resize(basis.size());
  action.signs.assign(basis.size(), 1);
  const int L = basis.sites();
  for (Index i = 0; i < basis.size(); ++i) {
    std::uint64_t mirrored = 0;
    for (int site = 0; site < L; ++site) {
      const std::uint64_t f = SectorBasis::field(basis.photons(i, site), basis.atom(i, site));
      mirrored |= f << basis.shift(L - 1 - site);
    }
    action.permutation[i] = *basis.find_key(mirrored);
  }
  return action;
}

SymmetryAction compose(const SymmetryAction &outer, const SymmetryAction &inner) {
  if (outer.size() != inner.size())
    throw DomainError(fmt::format("cannot compose actions of sizes {} and {}", outer.size(), inner.size()));
  SymmetryAction out;
  out.kind = SymmetryKind::composite;
  out.permutation.resize(inner.size());
  out.signs.resize(inner.size());
  for (Index i = 0; i < inner.size(); ++i) {
    const Index mid = inner.permutation[i];
    out.permutation[i] = outer.permutation[mid];
    out.signs[i] = inner.signs[i] * outer.signs[mid];
  }
  return out;
}

bool is_identity(const SymmetryAction &action) {
  for (Index i = 0; i < action.size(); ++i)
    if (action.permutation[i] != i || action.signs[i] != 1) return false;
  return true;
}

Eigen::SparseMatrix<double> to_matrix(const SymmetryAction &action) {
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(action.size());
  for (Index i = 0; i < action.size(); ++i)
    entries.emplace_back(action.permutation[i], i, static_cast<double>(action.signs[i]));
  Eigen::SparseMatrix<double> m(action.size(), action.size());
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

double commutator_norm(const SymmetryAction &a, const SymmetryAction &b) {
  if (a.size() != b.size())
    throw DomainError(fmt::format("commutator of actions on bases of sizes {} and {}", a.size(), b.size()));
  const Eigen::SparseMatrix<double> ma = to_matrix(a);
  const Eigen::SparseMatrix<double> mb = to_matrix(b);
  const Eigen::SparseMatrix<double> diff = (ma * mb - mb * ma).pruned();
  double norm = 0.0;
  for (Index k = 0; k < diff.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it)
      norm = std::max(norm, std::abs(it.value()));
  return norm;
}

AntisymmetricSubspace antisymmetric_projector(const SectorBasis &basis,
                                              const SymmetryAction &reflection) {
  if (reflection.kind != SymmetryKind::reflection)
    throw DomainError("antisymmetric_projector needs the reflection action");
  if (reflection.size() != basis.size())
    throw DomainError("reflection action built on a different basis");
  AntisymmetricSubspace sub;
  sub.sites = basis.sites();
  sub.excitations = basis.excitations();
  sub.full_dimension = basis.size();
  for (Index i = 0; i < basis.size(); ++i) {
    const Index j = reflection.permutation[i];
    if (j == i)
      ++sub.fixed_points;
    else if (i < j)
      sub.pairs.emplace_back(i, j);
  }
  const double amp = 1.0 / std::sqrt(2.0);
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(2 * sub.pairs.size());
  for (Index col = 0; col < sub.dimension(); ++col) {
    entries.emplace_back(sub.pairs[col].first, col, amp);
    entries.emplace_back(sub.pairs[col].second, col, -amp);
  }
  sub.vectors.resize(sub.full_dimension, sub.dimension());
  sub.vectors.setFromTriplets(entries.begin(), entries.end());
  return sub;
}

}  // namespace jch
