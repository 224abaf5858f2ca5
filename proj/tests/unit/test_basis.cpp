#include "doctest.h"
#include "oracle.hpp"

#include "jch/basis.hpp"

#include <set>
#include <sstream>

using namespace jch;

TEST_CASE("basis: single-site vacuum sector has one state") {
  auto b = enumerate_basis(1, 0);
  CHECK(b->size() == 1);
  CHECK(b->unrank(0) == make_configuration({{0, 0}}));
}

TEST_CASE("basis: L=2 N=1 states in order") {
  auto b = enumerate_basis(2, 1);
  REQUIRE(b->size() == 4);
  CHECK(b->unrank(0) == make_configuration({{1, 0}, {0, 0}}));
  CHECK(b->unrank(1) == make_configuration({{0, 1}, {0, 0}}));
  CHECK(b->unrank(2) == make_configuration({{0, 0}, {1, 0}}));
  CHECK(b->unrank(3) == make_configuration({{0, 0}, {0, 1}}));
}

TEST_CASE("basis: dimension closed form") {
  CHECK(sector_dimension(6, 3) == 292);
  CHECK(sector_dimension(10, 5) == 28004);
  CHECK(enumerate_basis(6, 3)->size() == 292);
  CHECK(sector_dimension(8, 4) == 2816);
}

TEST_CASE("basis: counts match exhaustive enumeration for L <= 6, N <= L") {
  for (int L = 1; L <= 6; ++L)
    for (int N = 0; N <= L; ++N) {
      CAPTURE(L);
      CAPTURE(N);
      const auto brute = oracle::brute_force_configurations(L, N);
      auto b = enumerate_basis(L, N);
      REQUIRE(b->size() == static_cast<Index>(brute.size()));
      CHECK(sector_dimension(L, N) == brute.size());
      for (const auto &cfg : brute) CHECK(b->find(cfg).has_value());
    }
}

TEST_CASE("basis: strict order, rank inverts unrank") {
  auto b = enumerate_basis(6, 3);
  CHECK(b->rank(b->unrank(0)) == 0);
  CHECK(b->rank(b->unrank(b->size() - 1)) == b->size() - 1);
  std::set<std::string> seen;
  for (Index i = 0; i < b->size(); ++i) {
    CHECK(b->rank(b->unrank(i)) == i);
    seen.insert(to_string(b->unrank(i)));
    if (i > 0) CHECK(b->key(i - 1) > b->key(i));
  }
  CHECK(seen.size() == 292);
}

TEST_CASE("basis: rank names the violated constraint") {
  auto b = enumerate_basis(2, 1);
  auto message = [&](const FockConfiguration &cfg) {
    try {
      (void)b->rank(cfg);
    } catch (const DomainError &e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(make_configuration({{1, 0}, {1, 0}})).find("total excitation") != std::string::npos);
  CHECK(message(make_configuration({{0, 2}, {0, 0}})).find("atom level") != std::string::npos);
  CHECK(message(make_configuration({{1, 0}})).find("sites") != std::string::npos);
  CHECK_THROWS_AS(enumerate_basis(0, 1), DomainError);
  CHECK_THROWS_AS(enumerate_basis(2, -1), DomainError);
}

TEST_CASE("basis: dump format") {
  std::ostringstream os;
  dump_basis(os, *enumerate_basis(2, 1));
  CHECK(os.str() == "0: 1 g | 0 g\n1: 0 e | 0 g\n2: 0 g | 1 g\n3: 0 g | 0 e\n");
}

TEST_CASE("symmetry: chiral signs from the operator definition") {
  auto b = enumerate_basis(2, 1);
  const auto gamma = chiral_action(*b);
  CHECK(gamma.signs[b->rank(make_configuration({{0, 0}, {1, 0}}))] == 1);
  CHECK(gamma.signs[b->rank(make_configuration({{0, 1}, {0, 0}}))] == 1);
  for (int L = 1; L <= 5; ++L) {
    auto bb = enumerate_basis(L, 3);
    const auto g = chiral_action(*bb);
    for (Index i = 0; i < bb->size(); ++i) {
      CHECK(g.permutation[i] == i);
      CHECK(g.signs[i] == oracle::chiral_sign(bb->unrank(i)));
    }
  }
}

TEST_CASE("symmetry: involutions") {
  auto b = enumerate_basis(6, 3);
  const auto gamma = chiral_action(*b);
  const auto P = reflection_action(*b);
  CHECK(is_identity(compose(gamma, gamma)));
  CHECK(is_identity(compose(P, P)));
  CHECK_FALSE(is_identity(P));
  CHECK(commutator_norm(gamma, gamma) == 0.0);
}

TEST_CASE("symmetry: reflection swaps site contents") {
  auto b = enumerate_basis(2, 1);
  const auto P = reflection_action(*b);
  const Index left = b->rank(make_configuration({{1, 0}, {0, 0}}));
  const Index right = b->rank(make_configuration({{0, 0}, {1, 0}}));
  CHECK(P.permutation[left] == right);
  CHECK(P.permutation[right] == left);
  auto b4 = enumerate_basis(4, 2);
  const auto P4 = reflection_action(*b4);
  const Index pal = b4->rank(make_configuration({{1, 0}, {0, 0}, {0, 0}, {1, 0}}));
  CHECK(P4.permutation[pal] == pal);
  for (Index i = 0; i < b4->size(); ++i) {
    const auto cfg = b4->unrank(i);
    auto mirrored = cfg;
    std::reverse(mirrored.photons.begin(), mirrored.photons.end());
    std::reverse(mirrored.atoms.begin(), mirrored.atoms.end());
    CHECK(P4.permutation[i] == b4->rank(mirrored));
    CHECK(P4.signs[i] == 1);
  }
}

TEST_CASE("symmetry: [P, Gamma] vanishes for even N only") {
  auto b42 = enumerate_basis(4, 2);
  CHECK(commutator_norm(reflection_action(*b42), chiral_action(*b42)) == 0.0);
  auto b21 = enumerate_basis(2, 1);
  CHECK(commutator_norm(reflection_action(*b21), chiral_action(*b21)) > 0.0);
  auto b63 = enumerate_basis(6, 3);
  CHECK(commutator_norm(reflection_action(*b63), chiral_action(*b63)) > 0.0);
  auto b84 = enumerate_basis(8, 4);
  CHECK(commutator_norm(reflection_action(*b84), chiral_action(*b84)) == 0.0);
  CHECK_THROWS_AS(commutator_norm(chiral_action(*b21), chiral_action(*b42)), DomainError);
}

TEST_CASE("antisymmetric subspace: L=2 N=1") {
  auto b = enumerate_basis(2, 1);
  const auto sub = antisymmetric_projector(*b, reflection_action(*b));
  CHECK(sub.dimension() == 2);
  CHECK(sub.fixed_points == 0);
  const Eigen::MatrixXd V(sub.vectors);
  const double h = 1.0 / std::sqrt(2.0);
  // columns ordered by their first basis index
  CHECK(V(0, 0) == doctest::Approx(h));
  CHECK(V(2, 0) == doctest::Approx(-h));
  CHECK(V(1, 1) == doctest::Approx(h));
  CHECK(V(3, 1) == doctest::Approx(-h));
}

TEST_CASE("antisymmetric subspace: orthonormal, odd under P, dimension count") {
  for (auto [L, N] : {std::pair{4, 2}, std::pair{6, 3}, std::pair{5, 2}}) {
    auto b = enumerate_basis(L, N);
    const auto P = reflection_action(*b);
    const auto sub = antisymmetric_projector(*b, P);
    CHECK(sub.dimension() == (b->size() - sub.fixed_points) / 2);
    const Eigen::MatrixXd V(sub.vectors);
    CHECK((V.transpose() * V - Eigen::MatrixXd::Identity(V.cols(), V.cols())).cwiseAbs().maxCoeff() <= 1e-12);
    const Eigen::MatrixXd PV = Eigen::MatrixXd(to_matrix(P)) * V;
    CHECK((PV + V).cwiseAbs().maxCoeff() == 0.0);
  }
  // every state palindromic: a single site
  auto b1 = enumerate_basis(1, 2);
  CHECK(antisymmetric_projector(*b1, reflection_action(*b1)).dimension() == 0);
  CHECK_THROWS_AS(antisymmetric_projector(*b1, chiral_action(*b1)), DomainError);
}
