// Measurement models: projective bases, complete MUB sets, POVMs, joint
// outcome distributions, and the uncertainty constants Omega / Omega_POVM.

#pragma once

#include "entrosteer/qmat.hpp"

#include <limits>
#include <numbers>
#include <span>

namespace entrosteer {

/// Orthonormal measurement basis; vector i is column i of `unitary()` and
/// corresponds to outcome label i.
class ProjectiveBasis {
 public:
  explicit ProjectiveBasis(ComplexMatrix columns) : u_(std::move(columns)) {
    if (u_.rows() < 1 || u_.rows() != u_.cols())
      throw std::invalid_argument("ProjectiveBasis: need dim vectors of length dim");
    if (!all_finite(u_)) throw std::invalid_argument("ProjectiveBasis: non-finite entry");
    const ComplexMatrix gram = u_.adjoint() * u_;
    if (max_abs(gram - ComplexMatrix::Identity(u_.cols(), u_.cols())) > tol::structural)
      throw std::invalid_argument("ProjectiveBasis: vectors are not orthonormal");
  }

  int dim() const { return static_cast<int>(u_.rows()); }
  auto vector(int i) const { return u_.col(i); }
  const ComplexMatrix& unitary() const { return u_; }

  /// Basis {U|v_i>}; orthonormality is preserved for unitary U.
  ProjectiveBasis rotated(const ComplexMatrix& u) const { return ProjectiveBasis(u * u_); }

 private:
  ComplexMatrix u_;
};

/// Positive-operator-valued measure. Implicitly constructible from a
/// projective basis (rank-1 projectors), which is how every witness consumes
/// projective measurements.
class Povm {
 public:
  explicit Povm(std::vector<ComplexMatrix> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw std::invalid_argument("Povm: no elements");
    const Eigen::Index d = elements_.front().rows();
    if (d < 1) throw std::invalid_argument("Povm: empty element");
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (const auto& e : elements_) {
      if (e.rows() != d || e.cols() != d) throw std::invalid_argument("Povm: element size mismatch");
      if (!all_finite(e)) throw std::invalid_argument("Povm: non-finite entry");
      if (max_abs(e - e.adjoint()) > tol::structural) throw std::invalid_argument("Povm: element not Hermitian");
      if (hermitian_eigenvalues(e).minCoeff() < -tol::structural)
        throw std::invalid_argument("Povm: element not positive semidefinite");
      sum += e;
    }
    if (max_abs(sum - ComplexMatrix::Identity(d, d)) > tol::structural)
      throw std::invalid_argument("Povm: elements do not sum to identity");
  }

  Povm(const ProjectiveBasis& basis) {  // NOLINT(google-explicit-constructor)
    elements_.reserve(basis.dim());
    for (int i = 0; i < basis.dim(); ++i) {
      const ComplexVector v = basis.vector(i);
      elements_.push_back(v * v.adjoint());
    }
  }

  int dim() const { return static_cast<int>(elements_.front().rows()); }
  int outcomes() const { return static_cast<int>(elements_.size()); }
  const ComplexMatrix& element(int i) const { return elements_[i]; }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }

 private:
  std::vector<ComplexMatrix> elements_;
};

/// P(a, b) over outcome labels of the two parties.
class JointDistribution {
 public:
  explicit JointDistribution(Eigen::MatrixXd probs) : p_(std::move(probs)) {
    if (p_.rows() < 1 || p_.cols() < 1) throw std::invalid_argument("JointDistribution: empty");
    for (Eigen::Index i = 0; i < p_.size(); ++i) {
      double& x = p_.data()[i];
      if (!std::isfinite(x)) throw std::invalid_argument("JointDistribution: non-finite entry");
      if (x < -1e-12) throw std::invalid_argument("JointDistribution: negative probability");
      if (x < 0.0) x = 0.0;
    }
    if (std::abs(p_.sum() - 1.0) > tol::structural)
      throw std::invalid_argument("JointDistribution: probabilities do not sum to 1");
  }

  int n_a() const { return static_cast<int>(p_.rows()); }
  int n_b() const { return static_cast<int>(p_.cols()); }
  double operator()(int a, int b) const { return p_(a, b); }
  const Eigen::MatrixXd& probs() const { return p_; }

  std::vector<double> marginal_a() const {
    std::vector<double> m(n_a());
    for (int a = 0; a < n_a(); ++a) m[a] = p_.row(a).sum();
    return m;
  }
  std::vector<double> marginal_b() const {
    std::vector<double> m(n_b());
    for (int b = 0; b < n_b(); ++b) m[b] = p_.col(b).sum();
    return m;
  }

  JointDistribution transposed() const { return JointDistribution(p_.transpose()); }

 private:
  Eigen::MatrixXd p_;
};

// ---------------------------------------------------------------------------
// Standard bases

/// Eigenbases of sigma_x, sigma_y, sigma_z in that order. Outcome 0 is the
/// +1 eigenvector: X = {(1,1), (1,-1)}/sqrt2, Y = {(1,i), (1,-i)}/sqrt2,
/// Z = {(1,0), (0,1)}.
inline std::vector<ProjectiveBasis> pauli_bases() {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  ComplexMatrix x(2, 2), y(2, 2);
  x << s, s, s, -s;
  y << s, s, i * s, -i * s;
  return {ProjectiveBasis(x), ProjectiveBasis(y), ProjectiveBasis(ComplexMatrix::Identity(2, 2))};
}

inline bool is_prime(int n) {
  if (n < 2) return false;
  for (int k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

/// Complete set of d+1 mutually unbiased bases for prime d. Element 0 is
/// always the computational basis. For d = 2 the set is (Z, X, Y); for odd
/// prime d, basis a+1 has vectors v_m[n] = w^(a n^2 + m n) / sqrt(d), with
/// w = exp(2 pi i / d). Prime powers are not supported.
inline std::vector<ProjectiveBasis> mub_set(int d) {
  if (!is_prime(d)) throw std::invalid_argument("mub_set: only prime dimensions are supported");
  if (d == 2) {
    auto p = pauli_bases();
    return {p[2], p[0], p[1]};
  }
  std::vector<ProjectiveBasis> out;
  out.emplace_back(ComplexMatrix::Identity(d, d));
  const double norm = 1.0 / std::sqrt(double(d));
  for (int a = 0; a < d; ++a) {
    ComplexMatrix u(d, d);
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n) {
        // Reduce the exponent mod d before forming the angle to keep phases exact.
        const long e = (static_cast<long>(a) * n * n + static_cast<long>(m) * n) % d;
        u(n, m) = std::polar(norm, 2.0 * std::numbers::pi * double(e) / double(d));
      }
    out.emplace_back(u);
  }
  return out;
}

/// Largest deviation of |<e_i|f_j>|^2 from 1/d over all cross-basis pairs.
inline double mub_defect(std::span<const ProjectiveBasis> bases) {
  double worst = 0.0;
  for (std::size_t s = 0; s < bases.size(); ++s)
    for (std::size_t t = s + 1; t < bases.size(); ++t) {
      const int d = bases[s].dim();
      if (bases[t].dim() != d) return std::numeric_limits<double>::infinity();
      const Eigen::MatrixXd ov = (bases[s].unitary().adjoint() * bases[t].unitary()).cwiseAbs2();
      worst = std::max(worst, (ov.array() - 1.0 / d).abs().maxCoeff());
    }
  return worst;
}

inline bool is_complete_mub_set(std::span<const ProjectiveBasis> bases, double tolerance = tol::spectral) {
  if (bases.empty()) return false;
  const int d = bases.front().dim();
  return static_cast<int>(bases.size()) == d + 1 && mub_defect(bases) <= tolerance;
}

// ---------------------------------------------------------------------------
// Distributions

/// P(a, b) = Tr[(E_a ⊗ F_b) rho].
inline JointDistribution joint_distribution(const DensityMatrix& rho, const Povm& meas_a, const Povm& meas_b) {
  const int da = rho.dims().a;
  const int db = rho.dims().b;
  if (meas_a.dim() != da || meas_b.dim() != db)
    throw std::invalid_argument("joint_distribution: measurement dimension does not match state");
  const ComplexMatrix& m = rho.matrix();
  Eigen::MatrixXd p(meas_a.outcomes(), meas_b.outcomes());
  ComplexMatrix reduced(da, da);
  for (int b = 0; b < meas_b.outcomes(); ++b) {
    // reduced = Tr_B[(I ⊗ F_b) rho]
    const ComplexMatrix& f = meas_b.element(b);
    reduced.setZero();
    for (int i = 0; i < da; ++i)
      for (int j = 0; j < da; ++j) {
        Complex acc = 0.0;
        for (int k = 0; k < db; ++k)
          for (int l = 0; l < db; ++l) acc += f(k, l) * m(i * db + l, j * db + k);
        reduced(i, j) = acc;
      }
    for (int a = 0; a < meas_a.outcomes(); ++a)
      p(a, b) = (meas_a.element(a).cwiseProduct(reduced.transpose())).sum().real();
  }
  return JointDistribution(p);
}

/// Outcome distribution of a single-system measurement on operator `state`.
inline std::vector<double> outcome_distribution(const ComplexMatrix& state, const Povm& meas) {
  if (state.rows() != meas.dim() || state.cols() != meas.dim())
    throw std::invalid_argument("outcome_distribution: dimension mismatch");
  std::vector<double> p(meas.outcomes());
  for (int i = 0; i < meas.outcomes(); ++i) {
    const double x = (meas.element(i).cwiseProduct(state.transpose())).sum().real();
    if (x < -1e-12) throw std::invalid_argument("outcome_distribution: negative probability");
    p[i] = std::max(0.0, x);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Uncertainty constants

/// Omega = min_{i,j} 1 / |<R_i|S_j>|^2.
inline double overlap_omega(const ProjectiveBasis& r, const ProjectiveBasis& s) {
  if (r.dim() != s.dim()) throw std::invalid_argument("overlap_omega: dimension mismatch");
  const double max_overlap = (r.unitary().adjoint() * s.unitary()).cwiseAbs2().maxCoeff();
  return 1.0 / max_overlap;
}

inline double operator_norm(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

/// Omega_POVM = min_{i,j} 1 / ||F_i G_j||^2 with ||.|| the operator norm.
inline double povm_omega(const Povm& f, const Povm& g) {
  if (f.dim() != g.dim()) throw std::invalid_argument("povm_omega: dimension mismatch");
  double max_norm = 0.0;
  for (const auto& fi : f.elements())
    for (const auto& gj : g.elements()) max_norm = std::max(max_norm, operator_norm(fi * gj));
  return 1.0 / (max_norm * max_norm);
}

/// Square root of a positive semidefinite operator.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  const RealVector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

/// min_{i,j} 1 / ||sqrt(F_i) sqrt(G_j)||^2, the constant for which
/// H(F) + H(G) >= log2 Omega holds for arbitrary POVMs. It coincides with
/// povm_omega when both POVMs consist of projectors; for noisy elements
/// povm_omega overstates it (F = G = {I/2, I/2} gives 16 against a true 4).
inline double povm_omega_sqrt(const Povm& f, const Povm& g) {
  if (f.dim() != g.dim()) throw std::invalid_argument("povm_omega_sqrt: dimension mismatch");
  std::vector<ComplexMatrix> gs;
  for (const auto& gj : g.elements()) gs.push_back(psd_sqrt(gj));
  double max_norm = 0.0;
  for (const auto& fi : f.elements()) {
    const ComplexMatrix fs = psd_sqrt(fi);
    for (const auto& gj : gs) max_norm = std::max(max_norm, operator_norm(fs * gj));
  }
  return 1.0 / (max_norm * max_norm);
}

}  // namespace entrosteer
