// Continuous-variable steering witnesses on two-mode Gaussian states.
//
// Convention: quadratures are ordered (x_A, k_A, x_B, k_B) with [x, k] = i,
// so the vacuum has variance 1/2 in every quadrature. With this convention
// the Heisenberg product bound is 1/4 and the entropic position-momentum
// bound is log2(pi e) bits, and both are consistent.

#pragma once

#include "entrosteer/witness.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace entrosteer {

enum class Quadrature { XA = 0, KA = 1, XB = 2, KB = 3 };

class GaussianState {
 public:
  explicit GaussianState(const Eigen::Matrix4d& cov) : cov_(cov) {
    if (!cov_.allFinite()) throw std::invalid_argument("GaussianState: non-finite covariance");
    if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw std::invalid_argument("GaussianState: covariance is not symmetric");
    if (uncertainty_margin() < -1e-12)
      throw std::invalid_argument("GaussianState: covariance violates the uncertainty principle");
  }

  const Eigen::Matrix4d& cov() const { return cov_; }
  double var(Quadrature q) const { return cov_(int(q), int(q)); }
  double covariance(Quadrature p, Quadrature q) const { return cov_(int(p), int(q)); }

  /// Smallest eigenvalue of cov + (i/2) Sigma; nonnegative iff physical.
  double uncertainty_margin() const {
    Eigen::Matrix4cd m = cov_.cast<Complex>();
    const Complex half_i(0.0, 0.5);
    for (int mode = 0; mode < 2; ++mode) {
      m(2 * mode, 2 * mode + 1) += half_i;
      m(2 * mode + 1, 2 * mode) -= half_i;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  /// Symplectic eigenvalues (ascending). Physical states have both >= 1/2.
  /// Computed as the positive eigenvalues of the Hermitian matrix
  /// sqrt(V) (i Sigma) sqrt(V) in extended precision: entries grow like
  /// cosh 2r while the eigenvalues stay near 1/2, so double rounding alone
  /// costs ~1e-12 by r = 5.
  std::array<double, 2> symplectic_eigenvalues() const {
    using Real = long double;
    using RMat = Eigen::Matrix<Real, 4, 4>;
    using CMat = Eigen::Matrix<std::complex<Real>, 4, 4>;
    Eigen::SelfAdjointEigenSolver<RMat> ev(cov_.cast<Real>());
    const RMat root =
        ev.eigenvectors() * ev.eigenvalues().cwiseMax(Real(0)).cwiseSqrt().asDiagonal() * ev.eigenvectors().transpose();
    CMat sigma = CMat::Zero();
    const std::complex<Real> i(0, 1);
    sigma(0, 1) = sigma(2, 3) = i;
    sigma(1, 0) = sigma(3, 2) = -i;
    const CMat m = root.cast<std::complex<Real>>() * sigma * root.cast<std::complex<Real>>();
    Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
    // Eigenvalues come in pairs +-nu, ascending.
    return {static_cast<double>(es.eigenvalues()(2)), static_cast<double>(es.eigenvalues()(3))};
  }

 private:
  Eigen::Matrix4d cov_;
};

/// Two-mode squeezed vacuum with squeezing r.
inline GaussianState tmsv(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("tmsv: r must be >= 0");
  const double c = std::cosh(2.0 * r) / 2.0;
  // Taking s from c and rounding it toward zero keeps c^2 - s^2 >= 1/4 for the
  // stored doubles; independent cosh/sinh roundings can land below it by
  // ~eps cosh^2 2r.
  const long double s_exact = std::sqrt(static_cast<long double>(c) * c - 0.25L);
  double s = static_cast<double>(s_exact);
  if (static_cast<long double>(s) > s_exact) s = std::nextafter(s, 0.0);
  Eigen::Matrix4d m;
  m << c, 0, s, 0,
       0, c, 0, -s,
       s, 0, c, 0,
       0, -s, 0, c;
  return GaussianState(m);
}

/// var(target) - cov(target, given)^2 / var(given).
inline double conditional_variance(const GaussianState& g, Quadrature target, Quadrature given) {
  const double vg = g.var(given);
  if (!(vg > 0.0)) throw std::invalid_argument("conditional_variance: conditioning quadrature has zero variance");
  const double c = g.covariance(target, given);
  return g.var(target) - c * c / vg;
}

/// var(q_A ± q_B).
inline double combined_variance(const GaussianState& g, Quadrature qa, Quadrature qb, Sign sign) {
  const double s = sign == Sign::Plus ? 1.0 : -1.0;
  return g.var(qa) + g.var(qb) + 2.0 * s * g.covariance(qa, qb);
}

/// Differential entropy of a normal variable with variance v, in bits.
inline double gaussian_entropy_bits(double variance) {
  return 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e * variance);
}

inline double log2_pi_e() { return std::log2(std::numbers::pi * std::numbers::e); }

/// h(x_B|x_A) + h(k_B|k_A) >= log2(pi e) for AtoB; parties swap for BtoA.
inline WitnessReport walborn_cv(const GaussianState& g, Direction direction) {
  detail::conditioning_for(direction);
  const bool a_to_b = direction == Direction::AtoB;
  const Quadrature xt = a_to_b ? Quadrature::XB : Quadrature::XA;
  const Quadrature xg = a_to_b ? Quadrature::XA : Quadrature::XB;
  const Quadrature kt = a_to_b ? Quadrature::KB : Quadrature::KA;
  const Quadrature kg = a_to_b ? Quadrature::KA : Quadrature::KB;
  const double vx = conditional_variance(g, xt, xg);
  const double vk = conditional_variance(g, kt, kg);
  if (!(vx > 0.0) || !(vk > 0.0)) throw std::invalid_argument("walborn_cv: singular conditional variance");
  const double lhs = gaussian_entropy_bits(vx) + gaussian_entropy_bits(vk);
  return WitnessReport::lower_bounded("walborn-cv", direction, lhs, log2_pi_e());
}

/// var(x_A ± x_B) var(k_A ∓ k_B) >= 1/4; `sign` applies to the x pair.
/// Reported in variance-product units, not bits.
inline WitnessReport reid_sumdiff_cv(const GaussianState& g, Sign sign) {
  const double lhs = combined_variance(g, Quadrature::XA, Quadrature::XB, sign) *
                     combined_variance(g, Quadrature::KA, Quadrature::KB, flipped(sign));
  return WitnessReport::lower_bounded("reid-sumdiff-cv", Direction::Symmetric, lhs, 0.25, Units::VarianceProduct);
}

/// h(x_A ± x_B) + h(k_A ∓ k_B) >= log2(pi e).
inline WitnessReport entropic_sumdiff_cv(const GaussianState& g, Sign sign) {
  const double vx = combined_variance(g, Quadrature::XA, Quadrature::XB, sign);
  const double vk = combined_variance(g, Quadrature::KA, Quadrature::KB, flipped(sign));
  const double lhs = gaussian_entropy_bits(vx) + gaussian_entropy_bits(vk);
  return WitnessReport::lower_bounded("entropic-sumdiff-cv", Direction::Symmetric, lhs, log2_pi_e());
}

}  // namespace entrosteer
