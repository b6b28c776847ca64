// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Seeds are fixed up front and not tuned.

#include "cli.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

using namespace entrosteer;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::vector<ProjectiveBasis> rotate_all(std::span<const ProjectiveBasis> set, const ComplexMatrix& u) {
  std::vector<ProjectiveBasis> out;
  for (const auto& b : set) out.push_back(b.rotated(u));
  return out;
}

Outcome werner_cli(int settings, double expected, const std::filesystem::path& dir) {
  cli::RunConfig c;
  c.command = "werner-threshold";
  c.settings = settings;
  c.tol = 1e-6;
  c.out_path = (dir / ("werner" + std::to_string(settings) + ".json")).string();
  const auto t0 = std::chrono::steady_clock::now();
  cli::run(c);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double p = io::json::parse(slurp(c.out_path)).at("p_star").get<double>();
  return {std::abs(p - expected) <= 5e-4 && secs < 1.0,
          fmt("p* = %.7f, target %.4f +/- 5e-4, runtime %.4f s < 1 s", p, expected, secs)};
}

struct QuadrantCount {
  int n = 0, dominance_failures = 0, entangled_side = 0, conditional_only = 0;
};

QuadrantCount fig1_quadrants(Ensemble e, std::uint64_t seed) {
  QuadrantCount q;
  for (const auto& r : survey_fig1(10000, e, seed, workers())) {
    ++q.n;
    if (r.v_symmetric > r.v_conditional_AtoB + 1e-9) ++q.dominance_failures;
    if (r.v_conditional_AtoB > 0) {
      ++q.entangled_side;
      if (r.v_symmetric <= 0) ++q.conditional_only;
    }
  }
  return q;
}

}  // namespace

int main() {
  const auto tmp = std::filesystem::temp_directory_path() / ("entrosteer-acceptance-" + std::to_string(::getpid()));
  std::filesystem::create_directories(tmp);
  std::printf("entrosteer acceptance suite (%u worker threads)\n", workers());

  report(1, "Werner two-setting threshold", [&] { return werner_cli(2, 0.7799, tmp); });
  report(2, "Werner three-setting threshold", [&] { return werner_cli(3, 0.6517, tmp); });

  report(3, "qubit symmetric bound and singlet", [] {
    const auto p = pauli_bases();
    const auto s = singlet().projector();
    const auto mi = mub_mi(s, p, p);
    const auto mc = mub_conditional(s, p, p, Direction::AtoB);
    const bool ok = std::abs(mi.bound - 1.0) <= 1e-10 && std::abs(mi.lhs - 3.0) <= 1e-10 &&
                    std::abs(mi.violation - 2.0) <= 1e-10 && std::abs(mc.violation - 2.0) <= 1e-10;
    return Outcome{ok, fmt("mub-mi bound %.12f lhs %.12f violation %.12f; mub-conditional violation %.12f", mi.bound,
                           mi.lhs, mi.violation, mc.violation)};
  });

  report(4, "conditional dominates symmetric over random mixed states", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto hs = fig1_quadrants(Ensemble::Mixed, 7);
    const auto bures = fig1_quadrants(Ensemble::Bures, 7);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto frac = [](const QuadrantCount& q) {
      return q.entangled_side ? double(q.conditional_only) / q.entangled_side : 0.0;
    };
    const bool ok = hs.dominance_failures == 0 && bures.dominance_failures == 0 && frac(hs) >= 0.01 &&
                    frac(bures) >= 0.01 && secs < 120;
    return Outcome{ok, fmt("Hilbert-Schmidt: %d/%d dominance failures, conditional-only %d of %d violating (%.1f%%); "
                           "Bures: %d/%d failures, %d of %d (%.1f%%)",
                           hs.dominance_failures, hs.n, hs.conditional_only, hs.entangled_side, 100 * frac(hs),
                           bures.dominance_failures, bures.n, bures.conditional_only, bures.entangled_side,
                           100 * frac(bures))};
  });

  report(5, "violation gap identity and entanglement chain", [] {
    const auto p = pauli_bases();
    double worst_identity = 0.0, worst_chain1 = -1e9, worst_chain2 = -1e9;
    for (int i = 0; i < 1000; ++i) {
      Rng rng = stream_for(505, i);
      const auto rho = i % 4 == 0 ? random_pure_state(2, 2, rng).projector() : random_mixed_state(2, 2, rng);
      const auto a = rotate_all(p, random_unitary(2, rng));
      const auto b = rotate_all(p, random_unitary(2, rng));
      const int r = i % 3, s = (i + 1 + (i / 3) % 2) % 3;
      const double gap = violation_gap(rho, b[r], b[s]);
      const double vc = pair_conditional(rho, a[r], a[s], b[r], b[s], Direction::AtoB).violation;
      const double vm = pair_symmetric_mi(rho, a[r], a[s], b[r], b[s]).violation;
      worst_identity = std::max(worst_identity, std::abs(vc - vm - gap));
      const double sb = von_neumann_entropy(ComplexMatrix(partial_trace(rho, Subsystem::B)));
      worst_chain1 = std::max(worst_chain1, gap - 2 * (1 - sb));
      worst_chain2 = std::max(worst_chain2, 2 * (1 - sb) - 2 * (1 - entanglement_of_formation(rho)));
    }
    const bool ok = worst_identity <= 1e-9 && worst_chain1 <= 1e-9 && worst_chain2 <= 1e-9;
    return Outcome{ok, fmt("1000 states: max |V_C - V_M - gap| = %.2e; max(gap - 2(1-S_B)) = %.2e; "
                           "max(2(1-S_B) - 2(1-E)) = %.2e",
                           worst_identity, worst_chain1, worst_chain2)};
  });

  report(6, "separable soundness", [] {
    Rng rng = stream_for(606, 0);
    const auto states = separable_sample(10000, default_separable_terms, rng);
    const auto p = pauli_bases();
    double min_pt = 1e9, worst = -1e9;
    int evaluations = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
      const auto& rho = states[i];
      min_pt = std::min(min_pt, oracle::min_eigenvalue(oracle::partial_transpose_by_sum(rho.matrix(), 2, 2)));
      Rng brng = stream_for(607, i);
      const auto a = rotate_all(p, random_unitary(2, brng));
      const auto b = rotate_all(p, random_unitary(2, brng));
      const double v[] = {pair_conditional(rho, a[0], a[1], b[0], b[1], Direction::AtoB).violation,
                          pair_conditional(rho, a[0], a[1], b[0], b[1], Direction::BtoA).violation,
                          pair_conditional(rho, Povm(a[0]), Povm(a[2]), Povm(b[0]), Povm(b[2]), Direction::AtoB).violation,
                          pair_symmetric_mi(rho, a[0], a[1], b[0], b[1]).violation,
                          mub_conditional(rho, a, b, Direction::AtoB).violation,
                          mub_conditional(rho, a, b, Direction::BtoA).violation,
                          mub_mi(rho, a, b).violation,
                          sumdiff_discrete(rho, a[0], a[1], b[0], b[1], Sign::Plus).violation,
                          sumdiff_discrete(rho, a[0], a[1], b[0], b[1], Sign::Minus).violation};
      for (double x : v) {
        worst = std::max(worst, x);
        ++evaluations;
      }
    }
    const bool ok = min_pt >= -1e-12 && worst <= 1e-9;
    return Outcome{ok, fmt("%zu states, min partial-transpose eigenvalue %.3e, max violation %.3e over %d evaluations",
                           states.size(), min_pt, worst, evaluations)};
  });

  report(7, "entropic uncertainty relations", [] {
    double worst_pair = -1e9, worst_triple = -1e9;
    for (int i = 0; i < 10000; ++i) {
      Rng rng = stream_for(707, i);
      const int d = std::array{2, 3, 5}[i % 3];
      const auto rho = random_mixed_state(d, 1, 1 + i % d, rng);
      const ProjectiveBasis r(random_unitary(d, rng)), s(random_unitary(d, rng));
      const double h = oracle::entropy(outcome_distribution(rho.matrix(), r)) +
                       oracle::entropy(outcome_distribution(rho.matrix(), s));
      worst_pair = std::max(worst_pair, std::log2(overlap_omega(r, s)) - h);
    }
    const auto p = pauli_bases();
    for (int i = 0; i < 1000; ++i) {
      Rng rng = stream_for(708, i);
      const auto rho = i % 2 ? random_mixed_state(2, 1, rng) : random_mixed_state(2, 1, 1, rng);
      const auto triple = i % 3 ? rotate_all(p, random_unitary(2, rng)) : p;
      double h = 0.0;
      for (const auto& b : triple) h += oracle::entropy(outcome_distribution(rho.matrix(), b));
      worst_triple = std::max(worst_triple, 2.0 - h);
    }
    const bool ok = worst_pair <= 1e-9 && worst_triple <= 1e-9;
    return Outcome{ok, fmt("max(log2 Omega - H(R) - H(S)) = %.3e over 10^4 draws; max(2 - sum H) = %.3e over 10^3 "
                           "Pauli triples",
                           worst_pair, worst_triple)};
  });

  report(8, "POVM uncertainty constant reduces to overlap constant", [] {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      Rng rng = stream_for(808, i);
      const int d = 2 + i % 3;
      const ProjectiveBasis r(random_unitary(d, rng)), s(random_unitary(d, rng));
      worst = std::max(worst, std::abs(povm_omega(Povm(r), Povm(s)) - overlap_omega(r, s)));
    }
    return Outcome{worst <= 1e-10, fmt("max |Omega_POVM - Omega| = %.3e over 1000 pairs", worst)};
  });

  report(9, "continuous-variable closed forms", [] {
    double worst = 0.0;
    for (double r : {0.0, 0.5, 1.0, 2.0})
      for (auto d : {Direction::AtoB, Direction::BtoA})
        worst = std::max(worst, std::abs(walborn_cv(tmsv(r), d).violation - std::log2(std::cosh(2 * r))));
    const double re = threshold_bisect([](double r) { return entropic_sumdiff_cv(tmsv(r), Sign::Minus).violation; },
                                       0.0, 1.0, 1e-9);
    const double rv =
        threshold_bisect([](double r) { return reid_sumdiff_cv(tmsv(r), Sign::Minus).violation; }, 0.0, 1.0, 1e-9);
    const bool ok = worst <= 1e-9 && std::abs(re - 0.3466) <= 1e-4 && std::abs(rv - 0.3466) <= 1e-4;
    return Outcome{ok, fmt("max |walborn - log2 cosh 2r| = %.3e; entropic sign change r = %.6f, variance r = %.6f",
                           worst, re, rv)};
  });

  report(10, "pure-state steering symmetry and one-way quadrant", [] {
    const auto t0 = std::chrono::steady_clock::now();
    auto mean_gap = [](int trials) {
      const auto gaps = parallel_map(200, workers(), [&](std::size_t i) {
        Rng rng = stream_for(1010, i);
        const auto rho = random_pure_state(2, 2, rng).projector();
        const auto r = optimize_bases(rho, trials, rng(), i);
        return std::abs(r.best_v_AtoB - r.best_v_BtoA);
      });
      double s = 0.0;
      for (double g : gaps) s += g;
      return s / gaps.size();
    };
    const double g500 = mean_gap(500);
    const double g2000 = mean_gap(2000);
    auto one_way = [](Ensemble e, int n) {
      int count = 0, violating = 0;
      for (const auto& rec : survey_fig2(n, e, 500, 1011, workers())) {
        const bool a = rec.result.best_v_AtoB > 0, b = rec.result.best_v_BtoA > 0;
        violating += a || b;
        count += a != b;
      }
      return std::pair{count, violating};
    };
    const auto [hs_one_way, hs_violating] = one_way(Ensemble::Mixed, 2000);
    const auto [bu_one_way, bu_violating] = one_way(Ensemble::Bures, 500);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = g500 < 0.1 && g2000 < g500 && hs_one_way >= 1 && bu_one_way >= 1 && secs < 600;
    return Outcome{ok, fmt("mean |best_AtoB - best_BtoA| = %.5f (500 trials), %.5f (2000 trials); one-way states: "
                           "%d of %d violating (Hilbert-Schmidt, 2000 states), %d of %d (Bures, 500 states)",
                           g500, g2000, hs_one_way, hs_violating, bu_one_way, bu_violating)};
  });

  report(11, "determinism of fig1.csv", [&] {
    auto run = [&](const std::string& name, unsigned threads) {
      cli::RunConfig c;
      c.command = "fig1";
      c.n_states = 10000;
      c.seed = 7;
      c.threads = threads;
      c.out_path = (tmp / name).string();
      cli::run(c);
      return slurp(c.out_path);
    };
    const auto a = run("fig1_a.csv", 1);
    const auto b = run("fig1_b.csv", 1);
    const auto c = run("fig1_c.csv", 4);
    const auto d = run("fig1_d.csv", 7);
    const bool ok = !a.empty() && a == b && a == c && a == d;
    return Outcome{ok, fmt("%zu bytes; repeat run %s, 4 threads %s, 7 threads %s", a.size(),
                           a == b ? "identical" : "DIFFERS", a == c ? "identical" : "DIFFERS",
                           a == d ? "identical" : "DIFFERS")};
  });

  std::filesystem::remove_all(tmp);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
