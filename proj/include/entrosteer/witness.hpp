// Entropic steering witnesses evaluated on finite-dimensional bipartite
// states. Every report carries a signed violation: positive means the
// inequality is violated and steering is witnessed.

#pragma once

#include "entrosteer/infotheory.hpp"

#include <array>
#include <span>
#include <string>
#include <string_view>

namespace entrosteer {

/// AtoB: Alice steers Bob. Conditional entropies are of Bob's outcomes given
/// Alice's and the bound uses Bob's uncertainty constant.
enum class Direction { AtoB, BtoA, Symmetric };

enum class Units { Bits, VarianceProduct };

inline std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::AtoB: return "AtoB";
    case Direction::BtoA: return "BtoA";
    case Direction::Symmetric: return "symmetric";
  }
  return "?";
}

inline Direction direction_from_string(std::string_view s) {
  if (s == "AtoB") return Direction::AtoB;
  if (s == "BtoA") return Direction::BtoA;
  if (s == "symmetric") return Direction::Symmetric;
  throw std::invalid_argument("unknown direction: " + std::string(s));
}

inline std::string_view to_string(Units u) { return u == Units::Bits ? "bits" : "variance-product"; }

struct WitnessReport {
  std::string name;
  Direction direction = Direction::Symmetric;
  double lhs = 0.0;
  double bound = 0.0;
  double violation = 0.0;
  Units units = Units::Bits;

  /// Inequalities of the form lhs >= bound (conditional entropies, entropy of sums).
  static WitnessReport lower_bounded(std::string name, Direction d, double lhs, double bound,
                                     Units units = Units::Bits) {
    return {std::move(name), d, lhs, bound, bound - lhs, units};
  }
  /// Inequalities of the form lhs <= bound (mutual informations).
  static WitnessReport upper_bounded(std::string name, Direction d, double lhs, double bound) {
    return {std::move(name), d, lhs, bound, lhs - bound, Units::Bits};
  }

  bool witnessed(double margin = 0.0) const { return violation > margin; }
};

/// Sanchez-Ruiz lower bound on the entropy sum over a complete MUB set in
/// dimension N (G_even / G_odd).
inline double bound_g(int n) {
  if (n < 2) throw std::invalid_argument("bound_g: N must be >= 2");
  if (n % 2 == 0) {
    const double h = n / 2.0;
    return h * std::log2(h) + (h + 1.0) * std::log2(h + 1.0);
  }
  return (n + 1.0) * std::log2((n + 1.0) / 2.0);
}

namespace detail {

inline Conditioning conditioning_for(Direction d) {
  if (d == Direction::Symmetric) throw std::invalid_argument("conditional witness needs a direction AtoB or BtoA");
  return d == Direction::AtoB ? Conditioning::BGivenA : Conditioning::AGivenB;
}

inline WitnessReport pair_conditional_with_omega(const DensityMatrix& rho, const Povm& r_a, const Povm& s_a,
                                                 const Povm& r_b, const Povm& s_b, Direction direction,
                                                 double omega_steered, std::string name) {
  const Conditioning c = conditioning_for(direction);
  const double lhs = conditional_entropy(joint_distribution(rho, r_a, r_b), c) +
                     conditional_entropy(joint_distribution(rho, s_a, s_b), c);
  return WitnessReport::lower_bounded(std::move(name), direction, lhs, std::log2(omega_steered));
}

inline void require_equal_local_dims(const DensityMatrix& rho, const char* what) {
  if (rho.dims().a != rho.dims().b)
    throw std::invalid_argument(std::string(what) + ": requires equal local dimensions");
}

}  // namespace detail

/// H(R^B|R^A) + H(S^B|S^A) >= log2 Omega^B (AtoB; roles swap for BtoA).
inline WitnessReport pair_conditional(const DensityMatrix& rho, const ProjectiveBasis& r_a, const ProjectiveBasis& s_a,
                                      const ProjectiveBasis& r_b, const ProjectiveBasis& s_b, Direction direction) {
  detail::conditioning_for(direction);
  const double omega = direction == Direction::AtoB ? overlap_omega(r_b, s_b) : overlap_omega(r_a, s_a);
  return detail::pair_conditional_with_omega(rho, r_a, s_a, r_b, s_b, direction, omega, "pair-conditional");
}

/// POVM form: the bound is log2 of the steered party's POVM constant. Uses
/// the square-root form, which stays sound for non-projective elements.
inline WitnessReport pair_conditional(const DensityMatrix& rho, const Povm& f_a, const Povm& g_a, const Povm& f_b,
                                      const Povm& g_b, Direction direction) {
  detail::conditioning_for(direction);
  const double omega = direction == Direction::AtoB ? povm_omega_sqrt(f_b, g_b) : povm_omega_sqrt(f_a, g_a);
  return detail::pair_conditional_with_omega(rho, f_a, g_a, f_b, g_b, direction, omega, "pair-conditional-povm");
}

/// I(R^A:R^B) + I(S^A:S^B) <= log2(N^2 / min(Omega^A, Omega^B)).
inline WitnessReport pair_symmetric_mi(const DensityMatrix& rho, const ProjectiveBasis& r_a,
                                       const ProjectiveBasis& s_a, const ProjectiveBasis& r_b,
                                       const ProjectiveBasis& s_b) {
  detail::require_equal_local_dims(rho, "pair_symmetric_mi");
  const double n = rho.dims().a;
  const double lhs = mutual_information(joint_distribution(rho, r_a, r_b)) +
                     mutual_information(joint_distribution(rho, s_a, s_b));
  const double omega = std::min(overlap_omega(r_a, s_a), overlap_omega(r_b, s_b));
  return WitnessReport::upper_bounded("pair-symmetric-mi", Direction::Symmetric, lhs, std::log2(n * n / omega));
}

/// sum_i H(R_i^B|R_i^A) >= G(N) over a complete MUB set on the steered side.
/// The steering party's bases are unconstrained apart from their count.
inline WitnessReport mub_conditional(const DensityMatrix& rho, std::span<const ProjectiveBasis> bases_a,
                                     std::span<const ProjectiveBasis> bases_b, Direction direction) {
  const Conditioning c = detail::conditioning_for(direction);
  const auto steered = direction == Direction::AtoB ? bases_b : bases_a;
  const auto other = direction == Direction::AtoB ? bases_a : bases_b;
  const int n = direction == Direction::AtoB ? rho.dims().b : rho.dims().a;
  if (static_cast<int>(steered.size()) != n + 1 || other.size() != steered.size())
    throw std::invalid_argument("mub_conditional: need N+1 bases on each side");
  if (!is_complete_mub_set(steered)) throw std::invalid_argument("mub_conditional: steered-side bases are not mutually unbiased");
  double lhs = 0.0;
  for (std::size_t i = 0; i < bases_a.size(); ++i)
    lhs += conditional_entropy(joint_distribution(rho, bases_a[i], bases_b[i]), c);
  return WitnessReport::lower_bounded("mub-conditional", direction, lhs, bound_g(n));
}

/// sum_i I(R_i^A:R_i^B) <= (N+1) log2 N - G(N), complete MUB sets on both sides.
inline WitnessReport mub_mi(const DensityMatrix& rho, std::span<const ProjectiveBasis> bases_a,
                            std::span<const ProjectiveBasis> bases_b) {
  detail::require_equal_local_dims(rho, "mub_mi");
  const int n = rho.dims().a;
  if (static_cast<int>(bases_a.size()) != n + 1 || bases_b.size() != bases_a.size())
    throw std::invalid_argument("mub_mi: need N+1 bases on each side");
  if (!is_complete_mub_set(bases_a) || !is_complete_mub_set(bases_b))
    throw std::invalid_argument("mub_mi: bases are not mutually unbiased");
  double lhs = 0.0;
  for (std::size_t i = 0; i < bases_a.size(); ++i)
    lhs += mutual_information(joint_distribution(rho, bases_a[i], bases_b[i]));
  return WitnessReport::upper_bounded("mub-mi", Direction::Symmetric, lhs, (n + 1) * std::log2(double(n)) - bound_g(n));
}

/// H((R^A ± R^B) mod N) + H((S^A ∓ S^B) mod N) >= log2 min(Omega^A, Omega^B).
/// `sign` applies to the R pair; the S pair uses the opposite sign.
inline WitnessReport sumdiff_discrete(const DensityMatrix& rho, const ProjectiveBasis& r_a, const ProjectiveBasis& s_a,
                                      const ProjectiveBasis& r_b, const ProjectiveBasis& s_b, Sign sign) {
  detail::require_equal_local_dims(rho, "sumdiff_discrete");
  const double lhs = modular_sum_entropy(joint_distribution(rho, r_a, r_b), sign) +
                     modular_sum_entropy(joint_distribution(rho, s_a, s_b), flipped(sign));
  const double omega = std::min(overlap_omega(r_a, s_a), overlap_omega(r_b, s_b));
  return WitnessReport::lower_bounded("sumdiff-discrete", Direction::Symmetric, lhs, std::log2(omega));
}

/// 2 log2 N - (H(R^B) + H(S^B)). Equals the conditional minus the symmetric
/// pair violation whenever Omega^A = Omega^B.
inline double violation_gap(const DensityMatrix& rho, const ProjectiveBasis& r_b, const ProjectiveBasis& s_b) {
  const ComplexMatrix rho_b = partial_trace(rho, Subsystem::B);
  const double n = rho.dims().b;
  return 2.0 * std::log2(n) - detail::plogp_sum(outcome_distribution(rho_b, r_b)) -
         detail::plogp_sum(outcome_distribution(rho_b, s_b));
}

}  // namespace entrosteer
