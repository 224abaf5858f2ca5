#include "jch/entanglement.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace jch {

Bipartition::Bipartition(BasisPtr basis) : basis_(std::move(basis)) {
  const int L = basis_->sites();
  const int N = basis_->excitations();
  if (L % 2 != 0) throw DomainError(fmt::format("half-chain cut undefined for odd L={}", L));
  const int left_sites = L / 2;
  const int right_sites = L - left_sites;
  const int right_bits = 5 * right_sites;
  const std::uint64_t right_mask = (std::uint64_t{1} << right_bits) - 1;

  blocks_.resize(N + 1);
  std::vector<SectorBasis> lefts, rights;
  for (int k = 0; k <= N; ++k) {
    lefts.emplace_back(left_sites, k);
    rights.emplace_back(right_sites, N - k);
    Block &b = blocks_[k];
    b.left_excitations = k;
    b.left_size = lefts.back().size();
    b.right_size = rights.back().size();
    b.states.assign(static_cast<std::size_t>(b.left_size * b.right_size), -1);
  }
  for (Index s = 0; s < basis_->size(); ++s) {
    int k = 0;
    for (int site = 0; site < left_sites; ++site) k += basis_->photons(s, site) + basis_->atom(s, site);
    const std::uint64_t key = basis_->key(s);
    const Index l = *lefts[k].find_key(key >> right_bits);
    const Index r = *rights[k].find_key(key & right_mask);
    blocks_[k].states[static_cast<std::size_t>(l + r * blocks_[k].left_size)] = s;
  }
}

Index Bipartition::half_dimension(KeptHalf half) const {
  Index total = 0;
  for (const Block &b : blocks_) total += half == KeptHalf::left ? b.left_size : b.right_size;
  return total;
}

namespace {

template <typename Scalar>
void require_normalized(const Bipartition &cut, const Eigen::Ref<const Vector<Scalar>> &state) {
  if (state.size() != cut.basis().size())
    throw DomainError(fmt::format("state has {} amplitudes, sector has {}", state.size(), cut.basis().size()));
  const double norm = state.norm();
  if (std::abs(norm - 1.0) > kNormTolerance)
    throw DomainError(fmt::format("state norm {:.17g} deviates from 1 by more than {}", norm, kNormTolerance));
}

template <typename Scalar>
Matrix<Scalar> reshape_block(const Bipartition::Block &b, const Eigen::Ref<const Vector<Scalar>> &state) {
  Matrix<Scalar> m(b.left_size, b.right_size);
  for (Index r = 0; r < b.right_size; ++r)
    for (Index l = 0; l < b.left_size; ++l)
      m(l, r) = state[b.states[static_cast<std::size_t>(l + r * b.left_size)]];
  return m;
}

template <typename Scalar>
Eigen::VectorXd hermitian_eigenvalues(const Matrix<Scalar> &m) {
  if (m.rows() == 0) return {};
  if (m.rows() == 1) return Eigen::VectorXd::Constant(1, std::real(m(0, 0)));
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double entropy_of(const Eigen::Ref<const Eigen::VectorXd> &lambda) {
  double s = 0.0;
  for (double x : lambda)
    if (x > kEigenvalueFloor) s -= x * std::log(x);
  return std::max(s, 0.0);
}

}  // namespace

template <typename Scalar>
Index ReducedDensityMatrix<Scalar>::dimension() const {
  Index d = 0;
  for (const auto &b : blocks) d += b.rows();
  return d;
}

template <typename Scalar>
Scalar ReducedDensityMatrix<Scalar>::trace() const {
  Scalar t{0};
  for (const auto &b : blocks) t += b.trace();
  return t;
}

template <typename Scalar>
Matrix<Scalar> ReducedDensityMatrix<Scalar>::dense() const {
  Matrix<Scalar> out = Matrix<Scalar>::Zero(dimension(), dimension());
  Index offset = 0;
  for (const auto &b : blocks) {
    out.block(offset, offset, b.rows(), b.cols()) = b;
    offset += b.rows();
  }
  return out;
}

template <typename Scalar>
Eigen::VectorXd ReducedDensityMatrix<Scalar>::eigenvalues() const {
  Eigen::VectorXd all(dimension());
  Index offset = 0;
  for (const auto &b : blocks) {
    const Eigen::VectorXd ev = hermitian_eigenvalues<Scalar>(b);
    all.segment(offset, ev.size()) = ev;
    offset += ev.size();
  }
  std::sort(all.data(), all.data() + all.size());
  return all;
}

template <typename Scalar>
ReducedDensityMatrix<Scalar> reduced_density_matrix(const Bipartition &cut,
                                                    const Eigen::Ref<const Vector<Scalar>> &state,
                                                    KeptHalf kept) {
  require_normalized<Scalar>(cut, state);
  ReducedDensityMatrix<Scalar> rho;
  rho.kept = kept;
  for (const auto &b : cut.blocks()) {
    const Matrix<Scalar> m = reshape_block<Scalar>(b, state);
    if (kept == KeptHalf::left)
      rho.blocks.push_back(m * m.adjoint());
    else
      rho.blocks.push_back((m.adjoint() * m).transpose());
  }
  return rho;
}

template <typename Scalar>
double entropy(const ReducedDensityMatrix<Scalar> &rho) {
  return entropy_of(rho.eigenvalues());
}

template <typename Scalar>
double entanglement_entropy(const Bipartition &cut, const Eigen::Ref<const Vector<Scalar>> &state) {
  require_normalized<Scalar>(cut, state);
  double s = 0.0;
  for (const auto &b : cut.blocks()) {
    const Matrix<Scalar> m = reshape_block<Scalar>(b, state);
    const Matrix<Scalar> gram = m.rows() <= m.cols() ? Matrix<Scalar>(m * m.adjoint())
                                                     : Matrix<Scalar>(m.adjoint() * m);
    s += entropy_of(hermitian_eigenvalues<Scalar>(gram));
  }
  return s;
}

template struct ReducedDensityMatrix<double>;
template struct ReducedDensityMatrix<std::complex<double>>;
template ReducedDensityMatrix<double> reduced_density_matrix<double>(
    const Bipartition &, const Eigen::Ref<const Vector<double>> &, KeptHalf);
template ReducedDensityMatrix<std::complex<double>> reduced_density_matrix<std::complex<double>>(
    const Bipartition &, const Eigen::Ref<const Vector<std::complex<double>>> &, KeptHalf);
template double entropy<double>(const ReducedDensityMatrix<double> &);
template double entropy<std::complex<double>>(const ReducedDensityMatrix<std::complex<double>> &);
template double entanglement_entropy<double>(const Bipartition &, const Eigen::Ref<const Vector<double>> &);
template double entanglement_entropy<std::complex<double>>(
    const Bipartition &, const Eigen::Ref<const Vector<std::complex<double>>> &);

PageEstimate page_value(const Bipartition &cut, Index samples, RandomStream &stream) {
  if (samples < 100) throw DomainError(fmt::format("page_value needs >= 100 samples (got {})", samples));
  const Index dim = cut.basis().size();
  PageEstimate est;
  est.samples = samples;
  if (dim == 1) return est;
  std::vector<double> values(static_cast<std::size_t>(samples));
  Vector<std::complex<double>> psi(dim);
  for (Index k = 0; k < samples; ++k) {
    for (Index i = 0; i < dim; ++i) {
      const double re = stream.normal();
      const double im = stream.normal();
      psi[i] = {re, im};
    }
    psi /= psi.norm();
    values[static_cast<std::size_t>(k)] = entanglement_entropy<std::complex<double>>(cut, psi);
  }
  const double n = static_cast<double>(samples);
  est.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - est.mean) * (v - est.mean);
  est.standard_error = std::sqrt(ss / (n - 1.0) / n);
  return est;
}

std::vector<double> eigenstate_entropies(const Bipartition &cut, const SpectralDecomposition &spec,
                                         const SpectralWindow &window) {
  if (!spec.has_vectors()) throw DomainError("eigenstate entropies need eigenvectors");
  if (window.size() <= 0) throw DomainError("empty spectral window");
  if (window.begin < 0 || window.end > spec.count()) throw DomainError("window outside the spectrum");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(window.size()));
  for (Index n = window.begin; n < window.end; ++n)
    out.push_back(entanglement_entropy<double>(cut, spec.eigenvectors.col(n)));
  return out;
}

EntropyStatistics entropy_statistics(std::span<const double> per_realization_means, const PageEstimate &page) {
  if (per_realization_means.empty()) throw DomainError("entropy statistics need at least one realization");
  EntropyStatistics st;
  st.per_realization.assign(per_realization_means.begin(), per_realization_means.end());
  st.page = page;
  const double n = static_cast<double>(st.per_realization.size());
  st.mean = std::accumulate(st.per_realization.begin(), st.per_realization.end(), 0.0) / n;
  if (st.per_realization.size() < 2) {
    st.deviation = std::numeric_limits<double>::quiet_NaN();
  } else {
    double ss = 0.0;
    for (double v : st.per_realization) ss += (v - st.mean) * (v - st.mean);
    st.deviation = std::sqrt(ss / (n - 1.0));
  }
  return st;
}

}  // namespace jch
