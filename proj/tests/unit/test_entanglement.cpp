#include "doctest.h"
#include "oracle.hpp"

#include "jch/entanglement.hpp"
#include "jch/operators.hpp"

#include <cmath>

using namespace jch;
using cplx = std::complex<double>;

namespace {

Eigen::VectorXcd random_state(Index dim, RandomStream &stream) {
  Eigen::VectorXcd v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = cplx(stream.normal(), stream.normal());
  return v / v.norm();
}

double shannon(const Eigen::VectorXd &p) {
  double s = 0.0;
  for (Index i = 0; i < p.size(); ++i)
    if (p[i] > kEigenvalueFloor) s -= p[i] * std::log(p[i]);
  return s;
}

}  // namespace

TEST_CASE("rdm: product basis state is pure") {
  auto b = enumerate_basis(4, 2);
  const Bipartition cut(b);
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(b->size());
  psi[b->rank(make_configuration({{1, 0}, {0, 0}, {1, 0}, {0, 0}}))] = 1.0;
  const auto rho = reduced_density_matrix<double>(cut, psi);
  const Eigen::MatrixXd R = rho.dense();
  CHECK((R * R).trace() == doctest::Approx(1.0));
  CHECK(rho.trace() == doctest::Approx(1.0));
  CHECK(entropy(rho) == doctest::Approx(0.0));
  CHECK(entanglement_entropy<double>(cut, psi) == doctest::Approx(0.0));
}

TEST_CASE("rdm: Bell pair across the cut") {
  auto b = enumerate_basis(2, 1);
  const Bipartition cut(b);
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(4);
  psi[b->rank(make_configuration({{1, 0}, {0, 0}}))] = 1.0 / std::sqrt(2.0);
  psi[b->rank(make_configuration({{0, 0}, {1, 0}}))] = 1.0 / std::sqrt(2.0);
  const auto rho = reduced_density_matrix<double>(cut, psi);
  const Eigen::VectorXd ev = rho.eigenvalues();
  // left half has 4 local configurations with N <= 1: |0g>, |0e>, |1g>, plus empty blocks
  int halves = 0;
  for (Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i] - 0.5) < 1e-14) ++halves;
    else CHECK(std::abs(ev[i]) < 1e-14);
  }
  CHECK(halves == 2);
  CHECK(entropy(rho) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("rdm: four-way superposition gives ln 4") {
  auto b = enumerate_basis(4, 2);
  const Bipartition cut(b);
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(b->size());
  psi[b->rank(make_configuration({{1, 0}, {0, 0}, {1, 0}, {0, 0}}))] = 0.5;
  psi[b->rank(make_configuration({{0, 1}, {0, 0}, {0, 0}, {0, 1}}))] = 0.5;
  psi[b->rank(make_configuration({{0, 0}, {1, 0}, {0, 1}, {0, 0}}))] = 0.5;
  psi[b->rank(make_configuration({{0, 0}, {0, 1}, {0, 0}, {1, 0}}))] = 0.5;
  CHECK(entanglement_entropy<double>(cut, psi) == doctest::Approx(std::log(4.0)));
}

TEST_CASE("rdm: spectrum matches an SVD oracle on random states") {
  RandomStream stream(8);
  for (auto [L, N] : {std::pair{2, 1}, std::pair{4, 2}, std::pair{6, 3}, std::pair{4, 3}}) {
    auto b = enumerate_basis(L, N);
    const Bipartition cut(b);
    for (int k = 0; k < 25; ++k) {
      const Eigen::VectorXcd psi = random_state(b->size(), stream);
      const auto rho = reduced_density_matrix<cplx>(cut, psi);
      const Eigen::VectorXd ev = rho.eigenvalues();
      const Eigen::VectorXd ref = oracle::rdm_spectrum_by_svd(*b, psi);
      REQUIRE(ev.size() == ref.size());
      CHECK((ev - ref).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK(std::abs(rho.trace() - 1.0) <= 1e-12);
      const Eigen::MatrixXcd R = rho.dense();
      CHECK((R - R.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
      const double S = entropy(rho);
      CHECK(std::abs(S - shannon(ref)) <= 1e-10);
      CHECK(std::abs(entanglement_entropy<cplx>(cut, psi) - S) <= 1e-10);
      // both halves share the nonzero spectrum
      CHECK(std::abs(entropy(reduced_density_matrix<cplx>(cut, psi, KeptHalf::right)) - S) <= 1e-10);
      CHECK(S >= -1e-14);
      CHECK(S <= std::log(static_cast<double>(rho.dimension())) + 1e-12);
    }
  }
}

TEST_CASE("rdm: input checks") {
  auto b = enumerate_basis(4, 2);
  const Bipartition cut(b);
  const Eigen::VectorXd twice = Eigen::VectorXd::Constant(b->size(), 2.0 / std::sqrt(double(b->size())));
  CHECK_THROWS_AS(reduced_density_matrix<double>(cut, twice), DomainError);
  CHECK_THROWS_AS(entanglement_entropy<double>(cut, twice), DomainError);
  CHECK_THROWS_AS(Bipartition(enumerate_basis(3, 1)), DomainError);
  CHECK_THROWS_AS(reduced_density_matrix<double>(cut, Eigen::VectorXd::Zero(3)), DomainError);
}

TEST_CASE("Page value") {
  RandomStream s0(1);
  auto trivial = enumerate_basis(2, 0);
  const auto zero = page_value(Bipartition(trivial), 100, s0);
  CHECK(zero.mean == doctest::Approx(0.0));

  auto b = enumerate_basis(6, 3);
  const Bipartition cut(b);
  RandomStream a(101), c(202);
  const auto pa = page_value(cut, 1000, a);
  const auto pc = page_value(cut, 1000, c);
  CHECK(pa.samples == 1000);
  CHECK(pa.standard_error < 0.01 * pa.mean);
  CHECK(std::abs(pa.mean - pc.mean) <= 3.0 * std::hypot(pa.standard_error, pc.standard_error));
  // far from the bound ln(dim of half) but well above half of it
  const double bound = std::log(static_cast<double>(cut.half_dimension(KeptHalf::left)));
  CHECK(pa.mean < bound);
  CHECK(pa.mean > 0.5 * bound);
  CHECK_THROWS_AS(page_value(cut, 10, a), DomainError);
}

TEST_CASE("entropy statistics across realizations") {
  const std::vector<double> same{0.7, 0.7, 0.7};
  const auto s = entropy_statistics(same, PageEstimate{1.4, 0.0, 100});
  CHECK(s.mean == doctest::Approx(0.7));
  CHECK(s.deviation == doctest::Approx(0.0));
  CHECK(s.normalized_mean() == doctest::Approx(0.5));

  const std::vector<double> two{1.0, 1.6};
  CHECK(entropy_statistics(two).deviation == doctest::Approx(0.6 / std::sqrt(2.0)));
  const std::vector<double> one{1.0};
  CHECK(std::isnan(entropy_statistics(one).deviation));
}
