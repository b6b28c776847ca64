// Dense complex linear algebra for bipartite states, plus seeded sampling of
// states and unitaries. All sampling routines take the random stream
// explicitly; nothing here touches global state.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace entrosteer {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

namespace tol {
inline constexpr double structural = 1e-10;
inline constexpr double spectral = 1e-8;
}  // namespace tol

enum class Subsystem { A, B };

struct Dims {
  int a = 0;
  int b = 0;

  constexpr int total() const { return a * b; }
  friend constexpr bool operator==(const Dims&, const Dims&) = default;
};

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

/// Ascending eigenvalues of a Hermitian matrix. Only the lower triangle is read.
inline RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian eigensolver failed to converge");
  return solver.eigenvalues();
}

/// Eigenvalues of a validated density operator, clamped to [0, 1].
inline RealVector clamped_spectrum(const ComplexMatrix& m) {
  return hermitian_eigenvalues(m).cwiseMax(0.0).cwiseMin(1.0);
}

inline ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y) {
  ComplexMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return out;
}

inline ComplexVector kron(const ComplexVector& x, const ComplexVector& y) {
  ComplexVector out(x.size() * y.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out.segment(i * y.size(), y.size()) = x(i) * y;
  return out;
}

/// Throws std::invalid_argument unless `m` is a valid density operator of size `dim`.
inline void check_density_operator(const ComplexMatrix& m, Eigen::Index dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim)
    throw std::invalid_argument(std::string(what) + ": matrix size does not match declared dimensions");
  if (!all_finite(m)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
  if (max_abs(m - m.adjoint()) > tol::structural)
    throw std::invalid_argument(std::string(what) + ": not Hermitian");
  if (std::abs(m.trace() - Complex(1.0, 0.0)) > tol::structural)
    throw std::invalid_argument(std::string(what) + ": trace is not 1");
  if (hermitian_eigenvalues(m).minCoeff() < -tol::structural)
    throw std::invalid_argument(std::string(what) + ": not positive semidefinite");
}

/// A validated bipartite density operator on C^{d_A} ⊗ C^{d_B}, row index
/// ordering a * d_B + b.
class DensityMatrix {
 public:
  DensityMatrix(Dims dims, ComplexMatrix mat) : dims_(dims), mat_(std::move(mat)) {
    if (dims_.a < 1 || dims_.b < 1) throw std::invalid_argument("DensityMatrix: dimensions must be >= 1");
    check_density_operator(mat_, dims_.total(), "DensityMatrix");
  }

  const Dims& dims() const { return dims_; }
  int dim() const { return dims_.total(); }
  const ComplexMatrix& matrix() const { return mat_; }

 private:
  Dims dims_;
  ComplexMatrix mat_;
};

class PureState {
 public:
  PureState(Dims dims, ComplexVector vec) : dims_(dims), vec_(std::move(vec)) {
    if (dims_.a < 1 || dims_.b < 1) throw std::invalid_argument("PureState: dimensions must be >= 1");
    if (vec_.size() != dims_.total()) throw std::invalid_argument("PureState: vector length does not match dims");
    if (std::abs(vec_.norm() - 1.0) > tol::structural) throw std::invalid_argument("PureState: not unit norm");
  }

  const Dims& dims() const { return dims_; }
  const ComplexVector& vector() const { return vec_; }

  DensityMatrix projector() const {
    ComplexMatrix p = vec_ * vec_.adjoint();
    // Exact Hermiticity; the outer product is only Hermitian up to rounding.
    p = (0.5 * (p + p.adjoint())).eval();
    return DensityMatrix(dims_, p);
  }

 private:
  Dims dims_;
  ComplexVector vec_;
};

/// Reduced operator on the kept subsystem. Works for any square operator whose
/// size is dims.a * dims.b.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, Dims dims, Subsystem keep) {
  if (dims.a < 1 || dims.b < 1 || m.rows() != dims.total() || m.cols() != dims.total())
    throw std::invalid_argument("partial_trace: dimension mismatch between declared dims and matrix size");
  const int da = dims.a;
  const int db = dims.b;
  if (keep == Subsystem::A) {
    ComplexMatrix out = ComplexMatrix::Zero(da, da);
    for (int i = 0; i < da; ++i)
      for (int j = 0; j < da; ++j)
        for (int k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (int i = 0; i < db; ++i)
    for (int j = 0; j < db; ++j)
      for (int k = 0; k < da; ++k) out(i, j) += m(k * db + i, k * db + j);
  return out;
}

inline ComplexMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
  return partial_trace(rho.matrix(), rho.dims(), keep);
}

/// Transpose on subsystem B only.
inline ComplexMatrix partial_transpose_b(const ComplexMatrix& m, Dims dims) {
  if (m.rows() != dims.total() || m.cols() != dims.total())
    throw std::invalid_argument("partial_transpose_b: dimension mismatch");
  ComplexMatrix out(m.rows(), m.cols());
  for (int a1 = 0; a1 < dims.a; ++a1)
    for (int b1 = 0; b1 < dims.b; ++b1)
      for (int a2 = 0; a2 < dims.a; ++a2)
        for (int b2 = 0; b2 < dims.b; ++b2)
          out(a1 * dims.b + b1, a2 * dims.b + b2) = m(a1 * dims.b + b2, a2 * dims.b + b1);
  return out;
}

inline double purity(const DensityMatrix& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

inline DensityMatrix product_state(const ComplexMatrix& rho_a, const ComplexMatrix& rho_b) {
  return DensityMatrix({static_cast<int>(rho_a.rows()), static_cast<int>(rho_b.rows())}, kron(rho_a, rho_b));
}

inline DensityMatrix maximally_mixed(Dims dims) {
  return DensityMatrix(dims, ComplexMatrix::Identity(dims.total(), dims.total()) / double(dims.total()));
}

/// (|01> - |10>) / sqrt(2)
inline PureState singlet() {
  ComplexVector v = ComplexVector::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -1.0 / std::sqrt(2.0);
  return PureState({2, 2}, v);
}

/// p |singlet><singlet| + (1 - p) I/4
inline DensityMatrix werner_state(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("werner_state: p must lie in [0, 1]");
  const ComplexVector s = singlet().vector();
  ComplexMatrix m = p * (s * s.adjoint()) + (1.0 - p) * ComplexMatrix::Identity(4, 4) / 4.0;
  return DensityMatrix({2, 2}, m);
}

// ---------------------------------------------------------------------------
// Random sampling

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

/// Independent stream for work item `index` under a run seed. Results of a
/// survey depend only on (seed, index), never on scheduling.
inline Rng stream_for(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t mixed = detail::splitmix64(detail::splitmix64(seed) ^ detail::splitmix64(~index));
  std::seed_seq seq{static_cast<std::uint32_t>(mixed), static_cast<std::uint32_t>(mixed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

inline ComplexMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

/// Haar-distributed d×d unitary: QR of a Ginibre matrix with the phases of
/// R's diagonal folded back into Q.
inline ComplexMatrix random_unitary(int d, Rng& rng) {
  if (d < 1) throw std::invalid_argument("random_unitary: d must be >= 1");
  const ComplexMatrix z = ginibre(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= mag > 0.0 ? rjj / mag : Complex(1.0, 0.0);
  }
  return q;
}

inline PureState random_pure_state(int d_a, int d_b, Rng& rng) {
  if (d_a < 1 || d_b < 1) throw std::invalid_argument("random_pure_state: dimensions must be >= 1");
  ComplexVector v = ginibre(d_a * d_b, 1, rng).col(0);
  v /= v.norm();
  return PureState({d_a, d_b}, v);
}

/// Hilbert-Schmidt-induced ensemble: rho = G G^† / Tr(G G^†) with G a
/// (d_A d_B)×rank Ginibre matrix. rank = d_A d_B is the flat HS measure.
inline DensityMatrix random_mixed_state(int d_a, int d_b, int rank, Rng& rng) {
  if (d_a < 1 || d_b < 1) throw std::invalid_argument("random_mixed_state: dimensions must be >= 1");
  const int n = d_a * d_b;
  if (rank < 1 || rank > n) throw std::invalid_argument("random_mixed_state: rank must lie in [1, d_A*d_B]");
  const ComplexMatrix g = ginibre(n, rank, rng);
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  m = (0.5 * (m + m.adjoint())).eval();
  return DensityMatrix({d_a, d_b}, m);
}

inline DensityMatrix random_mixed_state(int d_a, int d_b, Rng& rng) {
  return random_mixed_state(d_a, d_b, d_a * d_b, rng);
}

/// Bures-measure mixed state: rho ∝ (I + U) G G^† (I + U)^† with U Haar and
/// G a square Ginibre matrix.
inline DensityMatrix random_bures_state(int d_a, int d_b, Rng& rng) {
  if (d_a < 1 || d_b < 1) throw std::invalid_argument("random_bures_state: dimensions must be >= 1");
  const int n = d_a * d_b;
  const ComplexMatrix u = random_unitary(n, rng);
  const ComplexMatrix a = (ComplexMatrix::Identity(n, n) + u) * ginibre(n, n, rng);
  ComplexMatrix m = a * a.adjoint();
  m /= m.trace().real();
  m = (0.5 * (m + m.adjoint())).eval();
  return DensityMatrix({d_a, d_b}, m);
}

}  // namespace entrosteer
