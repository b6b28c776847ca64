// Classical and quantum entropy functionals. Every logarithm is base 2.

#pragma once

#include "entrosteer/measure.hpp"

#include <span>

namespace entrosteer {

namespace detail {
inline constexpr double negligible_probability = 1e-15;

inline double plogp_sum(std::span<const double> p) {
  double h = 0.0;
  for (double x : p)
    if (x > negligible_probability) h -= x * std::log2(x);
  return h;
}
}  // namespace detail

/// Validated probability vector: entries in [0, 1], sum 1 within 1e-10.
class ProbVector {
 public:
  explicit ProbVector(std::vector<double> probs) : p_(std::move(probs)) {
    if (p_.empty()) throw std::invalid_argument("ProbVector: empty");
    double total = 0.0;
    for (double& x : p_) {
      if (!std::isfinite(x) || x < -1e-12 || x > 1.0 + 1e-12)
        throw std::invalid_argument("ProbVector: entry outside [0, 1]");
      x = std::clamp(x, 0.0, 1.0);
      total += x;
    }
    if (std::abs(total - 1.0) > tol::structural) throw std::invalid_argument("ProbVector: does not sum to 1");
  }
  ProbVector(std::initializer_list<double> probs) : ProbVector(std::vector<double>(probs)) {}

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> values() const { return p_; }

 private:
  std::vector<double> p_;
};

inline double shannon_entropy(const ProbVector& p) { return detail::plogp_sum(p.values()); }

inline double joint_entropy(const JointDistribution& j) {
  const auto& m = j.probs();
  return detail::plogp_sum(std::span<const double>(m.data(), static_cast<std::size_t>(m.size())));
}

inline double marginal_entropy(const JointDistribution& j, Subsystem which) {
  return detail::plogp_sum(which == Subsystem::A ? j.marginal_a() : j.marginal_b());
}

enum class Conditioning { BGivenA, AGivenB };

/// H(B|A) = H(A,B) - H(A), or H(A|B) = H(A,B) - H(B). Clamped at 0 against
/// rounding.
inline double conditional_entropy(const JointDistribution& j, Conditioning direction) {
  const double hab = joint_entropy(j);
  const double hcond = direction == Conditioning::BGivenA ? marginal_entropy(j, Subsystem::A)
                                                          : marginal_entropy(j, Subsystem::B);
  return std::max(0.0, hab - hcond);
}

inline double mutual_information(const JointDistribution& j) {
  return std::max(0.0, marginal_entropy(j, Subsystem::A) + marginal_entropy(j, Subsystem::B) - joint_entropy(j));
}

enum class Sign { Plus, Minus };

inline Sign flipped(Sign s) { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }

/// Distribution of (a + b) mod N or (a - b) mod N over outcome labels 0..N-1.
inline std::vector<double> modular_sum_distribution(const JointDistribution& j, Sign sign) {
  const int n = j.n_a();
  if (j.n_b() != n) throw std::invalid_argument("modular_sum_entropy: joint distribution is not square");
  std::vector<double> q(n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int s = sign == Sign::Plus ? (a + b) % n : ((a - b) % n + n) % n;
      q[s] += j(a, b);
    }
  return q;
}

inline double modular_sum_entropy(const JointDistribution& j, Sign sign) {
  return detail::plogp_sum(modular_sum_distribution(j, sign));
}

/// S(m) = -sum lambda log2 lambda over the clamped spectrum of a density operator.
inline double von_neumann_entropy(const ComplexMatrix& m) {
  check_density_operator(m, m.rows(), "von_neumann_entropy");
  const RealVector ev = clamped_spectrum(m);
  return detail::plogp_sum(std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size())));
}

inline double von_neumann_entropy(const DensityMatrix& rho) { return von_neumann_entropy(rho.matrix()); }

/// Binary entropy h(x) in bits.
inline double binary_entropy(double x) {
  const double p[2] = {x, 1.0 - x};
  return detail::plogp_sum(p);
}

/// Wootters concurrence of a two-qubit state: max(0, l1 - l2 - l3 - l4) with
/// l_i the descending square roots of the spectrum of
/// sqrt(rho) (sy⊗sy) rho* (sy⊗sy) sqrt(rho).
inline double concurrence(const DensityMatrix& rho) {
  if (rho.dims() != Dims{2, 2}) throw std::invalid_argument("concurrence: requires a 2x2 (two-qubit) state");
  ComplexMatrix flip = ComplexMatrix::Zero(4, 4);
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;
  const ComplexMatrix tilde = flip * rho.matrix().conjugate() * flip;

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix());
  const RealVector root_ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix sqrt_rho = es.eigenvectors() * root_ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  ComplexMatrix r = sqrt_rho * tilde * sqrt_rho;
  r = (0.5 * (r + r.adjoint())).eval();

  RealVector l = hermitian_eigenvalues(r).cwiseMax(0.0).cwiseSqrt();
  std::sort(l.data(), l.data() + l.size(), std::greater<>());
  return std::max(0.0, l(0) - l(1) - l(2) - l(3));
}

/// Entanglement of formation (bits) of a two-qubit state, Wootters closed form.
inline double entanglement_of_formation(const DensityMatrix& rho) {
  const double c = std::min(1.0, concurrence(rho));
  return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - c * c)));
}

}  // namespace entrosteer
