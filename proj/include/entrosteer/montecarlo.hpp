// Monte Carlo surveys over random two-qubit states: conditional vs symmetric
// violation scatter, random-search basis optimization per direction, basis
// sweeps for a fixed state, threshold bisection and separable ensembles.
//
// Every work item draws from stream_for(seed, item_index), so outputs depend
// only on the seed and never on the thread count.

#pragma once

#include "entrosteer/witness.hpp"

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>

namespace entrosteer {

/// Mixed is the Hilbert-Schmidt (full-rank Ginibre) ensemble.
enum class Ensemble { Pure, Mixed, Bures, Separable };

inline std::string_view to_string(Ensemble e) {
  switch (e) {
    case Ensemble::Pure: return "pure";
    case Ensemble::Mixed: return "mixed";
    case Ensemble::Bures: return "bures";
    case Ensemble::Separable: return "separable";
  }
  return "?";
}

inline Ensemble ensemble_from_string(std::string_view s) {
  if (s == "pure") return Ensemble::Pure;
  if (s == "mixed") return Ensemble::Mixed;
  if (s == "bures") return Ensemble::Bures;
  if (s == "separable") return Ensemble::Separable;
  throw std::invalid_argument("unknown ensemble: " + std::string(s));
}

/// Runs f(i) for i in [0, n) on up to `threads` workers and returns results in
/// index order.
template <class F>
auto parallel_map(std::size_t n, unsigned threads, F&& f) -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// 1 - S(rho) / log2(d): 0 for maximally mixed, 1 for pure.
inline double scaled_purity(const DensityMatrix& rho) {
  return 1.0 - von_neumann_entropy(rho) / std::log2(double(rho.dim()));
}

// ---------------------------------------------------------------------------
// Separable ensembles

/// sum_j w_j rho_j^A ⊗ rho_j^B with k uniform in [1, k_max] terms, exponential
/// (flat Dirichlet) weights and Hilbert-Schmidt random single-qubit factors.
inline DensityMatrix separable_state(int k_max, Rng& rng) {
  if (k_max < 1) throw std::invalid_argument("separable_state: k_max must be >= 1");
  std::uniform_int_distribution<int> pick_k(1, k_max);
  std::exponential_distribution<double> weight(1.0);
  const int k = pick_k(rng);
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  double total = 0.0;
  for (int j = 0; j < k; ++j) {
    const double w = weight(rng);
    const ComplexMatrix ra = random_mixed_state(2, 1, rng).matrix();
    const ComplexMatrix rb = random_mixed_state(2, 1, rng).matrix();
    m += w * kron(ra, rb);
    total += w;
  }
  m /= total;
  m = (0.5 * (m + m.adjoint())).eval();
  return DensityMatrix({2, 2}, m);
}

inline std::vector<DensityMatrix> separable_sample(int n, int k_max, Rng& rng) {
  if (n < 1) throw std::invalid_argument("separable_sample: n must be >= 1");
  std::vector<DensityMatrix> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(separable_state(k_max, rng));
  return out;
}

inline constexpr int default_separable_terms = 8;

inline DensityMatrix sample_two_qubit_state(Ensemble e, Rng& rng) {
  switch (e) {
    case Ensemble::Pure: return random_pure_state(2, 2, rng).projector();
    case Ensemble::Mixed: return random_mixed_state(2, 2, rng);
    case Ensemble::Bures: return random_bures_state(2, 2, rng);
    case Ensemble::Separable: return separable_state(default_separable_terms, rng);
  }
  throw std::invalid_argument("sample_two_qubit_state: bad ensemble");
}

/// The state a survey with this seed draws as item `state_id`.
inline DensityMatrix survey_state(Ensemble e, std::uint64_t seed, std::uint64_t state_id) {
  Rng rng = stream_for(seed, state_id);
  return sample_two_qubit_state(e, rng);
}

// ---------------------------------------------------------------------------
// Conditional vs symmetric survey

struct SurveyRecord {
  std::uint64_t state_id = 0;
  double v_conditional_AtoB = 0.0;
  double v_conditional_BtoA = 0.0;
  double v_symmetric = 0.0;
  double purity_scaled = 0.0;
};

/// Complete-MUB conditional (both directions) and mutual-information
/// violations with the same MUB set on both sides.
inline SurveyRecord evaluate_survey_record(const DensityMatrix& rho, std::uint64_t state_id = 0) {
  if (rho.dims().a != rho.dims().b) throw std::invalid_argument("evaluate_survey_record: unequal local dimensions");
  const auto bases = mub_set(rho.dims().a);
  SurveyRecord r;
  r.state_id = state_id;
  r.v_conditional_AtoB = mub_conditional(rho, bases, bases, Direction::AtoB).violation;
  r.v_conditional_BtoA = mub_conditional(rho, bases, bases, Direction::BtoA).violation;
  r.v_symmetric = mub_mi(rho, bases, bases).violation;
  r.purity_scaled = scaled_purity(rho);
  return r;
}

inline std::vector<SurveyRecord> survey_fig1(int n, Ensemble ensemble, std::uint64_t seed, unsigned threads = 1) {
  if (n < 1) throw std::invalid_argument("survey_fig1: n must be >= 1");
  return parallel_map(static_cast<std::size_t>(n), threads,
                      [&](std::size_t i) { return evaluate_survey_record(survey_state(ensemble, seed, i), i); });
}

// ---------------------------------------------------------------------------
// Basis optimization

struct DirectionalViolation {
  double v_AtoB = 0.0;
  double v_BtoA = 0.0;
};

/// Both directional complete-MUB conditional violations after rotating the
/// reference MUB set by u_a on Alice's side and u_b on Bob's side.
inline DirectionalViolation rotated_mub_violations(const DensityMatrix& rho, std::span<const ProjectiveBasis> reference,
                                                   const ComplexMatrix& u_a, const ComplexMatrix& u_b) {
  std::vector<ProjectiveBasis> ba, bb;
  ba.reserve(reference.size());
  bb.reserve(reference.size());
  for (const auto& b : reference) {
    ba.push_back(b.rotated(u_a));
    bb.push_back(b.rotated(u_b));
  }
  return {mub_conditional(rho, ba, bb, Direction::AtoB).violation,
          mub_conditional(rho, ba, bb, Direction::BtoA).violation};
}

/// Trial t of a basis search rotates by Haar unitaries drawn from
/// stream_for(seed, t); longer searches extend shorter ones.
inline DirectionalViolation basis_trial(const DensityMatrix& rho, std::span<const ProjectiveBasis> reference,
                                        std::uint64_t seed, std::uint64_t trial) {
  Rng rng = stream_for(seed, trial);
  const ComplexMatrix u_a = random_unitary(rho.dims().a, rng);
  const ComplexMatrix u_b = random_unitary(rho.dims().b, rng);
  return rotated_mub_violations(rho, reference, u_a, u_b);
}

struct OptimizationResult {
  std::uint64_t state_id = 0;
  double best_v_AtoB = -std::numeric_limits<double>::infinity();
  double best_v_BtoA = -std::numeric_limits<double>::infinity();
  /// Violations of the single trial that maximizes min(v_AtoB, v_BtoA).
  DirectionalViolation balanced{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  int trials = 0;
  std::uint64_t seed = 0;
};

inline OptimizationResult optimize_bases(const DensityMatrix& rho, int trials, std::uint64_t seed,
                                         std::uint64_t state_id = 0) {
  if (trials < 1) throw std::invalid_argument("optimize_bases: trials must be >= 1");
  if (rho.dims().a != rho.dims().b) throw std::invalid_argument("optimize_bases: unequal local dimensions");
  const auto reference = mub_set(rho.dims().a);
  OptimizationResult res;
  res.state_id = state_id;
  res.trials = trials;
  res.seed = seed;
  for (int t = 0; t < trials; ++t) {
    const DirectionalViolation v = basis_trial(rho, reference, seed, t);
    res.best_v_AtoB = std::max(res.best_v_AtoB, v.v_AtoB);
    res.best_v_BtoA = std::max(res.best_v_BtoA, v.v_BtoA);
    if (std::min(v.v_AtoB, v.v_BtoA) > std::min(res.balanced.v_AtoB, res.balanced.v_BtoA)) res.balanced = v;
  }
  return res;
}

/// n independent random basis-set pairs for a fixed state, no maximization.
inline std::vector<DirectionalViolation> basis_sweep(const DensityMatrix& rho, int n, std::uint64_t seed,
                                                     unsigned threads = 1) {
  if (n < 1) throw std::invalid_argument("basis_sweep: n must be >= 1");
  if (rho.dims().a != rho.dims().b) throw std::invalid_argument("basis_sweep: unequal local dimensions");
  const auto reference = mub_set(rho.dims().a);
  return parallel_map(static_cast<std::size_t>(n), threads,
                      [&](std::size_t t) { return basis_trial(rho, reference, seed, t); });
}

struct Fig2Record {
  OptimizationResult result;
  double purity_scaled = 0.0;
};

/// Optimized directional violations for n random states. The basis search of
/// state i is seeded from that state's own stream.
inline std::vector<Fig2Record> survey_fig2(int n, Ensemble ensemble, int trials, std::uint64_t seed,
                                           unsigned threads = 1) {
  if (n < 1) throw std::invalid_argument("survey_fig2: n must be >= 1");
  return parallel_map(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
    Rng rng = stream_for(seed, i);
    const DensityMatrix rho = sample_two_qubit_state(ensemble, rng);
    const std::uint64_t trial_seed = rng();
    return Fig2Record{optimize_bases(rho, trials, trial_seed, i), scaled_purity(rho)};
  });
}

/// Index of the record with the largest directional asymmetry among those
/// violating in at least one direction.
inline std::optional<std::size_t> most_asymmetric(std::span<const Fig2Record> records) {
  std::optional<std::size_t> best;
  double best_gap = -1.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i].result;
    if (std::max(r.best_v_AtoB, r.best_v_BtoA) <= 0.0) continue;
    const double gap = std::abs(r.best_v_AtoB - r.best_v_BtoA);
    if (gap > best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Thresholds

class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Root of a monotone function on [lo, hi] by bisection, to width `tol`.
inline double threshold_bisect(const std::function<double(double)>& violation, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("threshold_bisect: tol must be > 0");
  if (!(lo < hi)) throw std::invalid_argument("threshold_bisect: need lo < hi");
  double flo = violation(lo);
  const double fhi = violation(hi);
  if (!(flo < 0.0 && fhi > 0.0) && !(flo > 0.0 && fhi < 0.0))
    throw BracketError("threshold_bisect: no sign change on bracket");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = violation(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Conditional violation (AtoB) of the Werner state W_p: two settings use the
/// X/Z pair with bound log2 Omega = 1; three settings use the Pauli triple with
/// bound G(2) = 2.
inline double werner_violation(double p, int settings) {
  const DensityMatrix w = werner_state(p);
  const auto pauli = pauli_bases();
  if (settings == 2) return pair_conditional(w, pauli[0], pauli[2], pauli[0], pauli[2], Direction::AtoB).violation;
  if (settings == 3) return mub_conditional(w, pauli, pauli, Direction::AtoB).violation;
  throw std::invalid_argument("werner_violation: settings must be 2 or 3");
}

inline double werner_threshold(int settings, double tol = 1e-6, double lo = 0.5, double hi = 0.95) {
  return threshold_bisect([settings](double p) { return werner_violation(p, settings); }, lo, hi, tol);
}

}  // namespace entrosteer
