// Command dispatch for the entrosteer CLI. Kept separate from flag parsing
// so tests can drive commands in-process.

#pragma once

#include "entrosteer/cvgauss.hpp"
#include "entrosteer/io.hpp"
#include "entrosteer/montecarlo.hpp"

#include <Eigen/Core>

#include <array>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>

namespace entrosteer::cli {

inline constexpr const char* version = "1.0.0";

enum class ExitCode : int { Ok = 0, NumericalFailure = 1, ConfigError = 2 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { Csv, Json };

struct RunConfig {
  std::string command;
  std::uint64_t seed = 1;
  int n_states = 10000;
  int n_trials = 500;
  Ensemble ensemble = Ensemble::Mixed;
  double tol = 1e-6;
  std::string out_path;  // empty: data to stdout
  Format format = Format::Csv;
  unsigned threads = 1;

  // werner-threshold
  int settings = 2;
  double lo = 0.5;
  double hi = 0.95;

  // eval / sweep
  std::string state_file;
  std::string witness = "all";
  Direction direction = Direction::AtoB;
  Sign sign = Sign::Minus;

  // sweep candidate selection when no state file is given
  int select_states = 200;

  // cv-scan
  double r_min = 0.0;
  double r_max = 2.0;
  int r_steps = 41;

  // separable-audit
  int k_max = default_separable_terms;
};

inline void validate(const RunConfig& c) {
  static const std::vector<std::string> commands = {"fig1", "fig2", "sweep", "werner-threshold",
                                                    "cv-scan", "eval", "separable-audit"};
  if (std::find(commands.begin(), commands.end(), c.command) == commands.end())
    throw ConfigError("unknown command '" + c.command + "'");
  if (c.n_states < 1 || c.n_trials < 1 || c.select_states < 1 || c.r_steps < 1 || c.k_max < 1 || c.threads < 1)
    throw ConfigError("counts must be >= 1");
  if (!(c.tol > 0.0)) throw ConfigError("tol must be > 0");
  if (c.command == "werner-threshold" && c.settings != 2 && c.settings != 3)
    throw ConfigError("--settings must be 2 or 3");
  if (c.command == "werner-threshold" && !(0.0 <= c.lo && c.lo < c.hi && c.hi <= 1.0))
    throw ConfigError("bracket must satisfy 0 <= lo < hi <= 1");
  if (c.command == "eval" && c.state_file.empty()) throw ConfigError("eval requires --state-file");
  if (c.command == "cv-scan" && !(c.r_min >= 0.0 && c.r_max >= c.r_min))
    throw ConfigError("cv-scan needs 0 <= r-min <= r-max");
}

namespace detail {

inline void log(const std::string& msg) { std::cerr << "[entrosteer] " << msg << '\n'; }

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

inline void emit_text(const RunConfig& c, const std::string& text) {
  if (c.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.out_path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + c.out_path);
  out << text;
}

inline void emit_table(const RunConfig& c, const io::CsvTable& t) {
  emit_text(c, c.format == Format::Csv ? io::to_csv(t) : io::table_to_json(t).dump(2) + "\n");
}

inline io::json parameters(const RunConfig& c) {
  return {{"seed", c.seed},
          {"n_states", c.n_states},
          {"n_trials", c.n_trials},
          {"ensemble", std::string(to_string(c.ensemble))},
          {"tol", c.tol},
          {"format", c.format == Format::Csv ? "csv" : "json"},
          {"threads", c.threads},
          {"settings", c.settings},
          {"bracket", {c.lo, c.hi}},
          {"state_file", c.state_file},
          {"witness", c.witness},
          {"direction", std::string(to_string(c.direction))},
          {"sign", c.sign == Sign::Plus ? "plus" : "minus"},
          {"select_states", c.select_states},
          {"r_grid", {c.r_min, c.r_max, c.r_steps}},
          {"k_max", c.k_max}};
}

inline io::CsvTable fig1_table(std::span<const SurveyRecord> recs) {
  io::CsvTable t{{"state_id", "v_conditional_AtoB", "v_symmetric", "purity"}, {}};
  for (const auto& r : recs)
    t.rows.push_back({double(r.state_id), r.v_conditional_AtoB, r.v_symmetric, r.purity_scaled});
  return t;
}

inline io::CsvTable fig2_table(std::span<const Fig2Record> recs) {
  io::CsvTable t{{"state_id", "best_v_AtoB", "best_v_BtoA", "purity"}, {}};
  for (const auto& r : recs)
    t.rows.push_back({double(r.result.state_id), r.result.best_v_AtoB, r.result.best_v_BtoA, r.purity_scaled});
  return t;
}

inline io::CsvTable sweep_table(std::span<const DirectionalViolation> pts) {
  io::CsvTable t{{"trial_id", "v_AtoB", "v_BtoA"}, {}};
  for (std::size_t i = 0; i < pts.size(); ++i) t.rows.push_back({double(i), pts[i].v_AtoB, pts[i].v_BtoA});
  return t;
}

inline std::vector<WitnessReport> evaluate_witnesses(const DensityMatrix& rho, const RunConfig& c) {
  if (rho.dims().a != rho.dims().b) throw ConfigError("eval supports equal local dimensions only");
  std::vector<ProjectiveBasis> bases;
  try {
    bases = mub_set(rho.dims().a);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto& r = bases[0];
  const auto& s = bases[1];
  const bool all = c.witness == "all";
  std::vector<WitnessReport> out;
  if (all || c.witness == "pair-conditional") out.push_back(pair_conditional(rho, r, s, r, s, c.direction));
  if (all || c.witness == "pair-symmetric-mi") out.push_back(pair_symmetric_mi(rho, r, s, r, s));
  if (all || c.witness == "mub-conditional") out.push_back(mub_conditional(rho, bases, bases, c.direction));
  if (all || c.witness == "mub-mi") out.push_back(mub_mi(rho, bases, bases));
  if (all || c.witness == "sumdiff") out.push_back(sumdiff_discrete(rho, r, s, r, s, c.sign));
  if (out.empty()) throw ConfigError("unknown witness '" + c.witness + "'");
  return out;
}

}  // namespace detail

/// Runs one command. Returns the manifest describing the run; data go to
/// `out_path` (or stdout) and the manifest to `<out_path>.manifest.json`.
inline io::json run(const RunConfig& c) {
  validate(c);
  const auto start = std::chrono::steady_clock::now();
  io::json result = io::json::object();

  if (c.command == "fig1") {
    const auto recs = survey_fig1(c.n_states, c.ensemble, c.seed, c.threads);
    detail::emit_table(c, detail::fig1_table(recs));
    std::size_t cond_only = 0;
    for (const auto& r : recs) cond_only += (r.v_conditional_AtoB > 0.0 && r.v_symmetric <= 0.0);
    result = {{"records", recs.size()}, {"conditional_only", cond_only}};
  } else if (c.command == "fig2") {
    const auto recs = survey_fig2(c.n_states, c.ensemble, c.n_trials, c.seed, c.threads);
    detail::emit_table(c, detail::fig2_table(recs));
    result = {{"records", recs.size()}};
  } else if (c.command == "sweep") {
    DensityMatrix rho = maximally_mixed({2, 2});
    io::json candidate;
    if (!c.state_file.empty()) {
      rho = io::read_state_file(c.state_file);
      candidate = {{"source", c.state_file}};
    } else {
      detail::log("selecting candidate from " + std::to_string(c.select_states) + " optimized mixed states");
      const auto recs = survey_fig2(c.select_states, c.ensemble, c.n_trials, c.seed, c.threads);
      const auto pick = most_asymmetric(recs);
      if (!pick) throw std::runtime_error("no candidate state violates in either direction");
      const auto& best = recs[*pick].result;
      rho = survey_state(c.ensemble, c.seed, best.state_id);
      candidate = {{"source", "survey"},
                   {"state_id", best.state_id},
                   {"best_v_AtoB", best.best_v_AtoB},
                   {"best_v_BtoA", best.best_v_BtoA}};
    }
    candidate["state"] = io::state_to_json(rho);
    const auto pts = basis_sweep(rho, c.n_states, c.seed, c.threads);
    detail::emit_table(c, detail::sweep_table(pts));
    result = {{"points", pts.size()}, {"candidate", candidate}};
  } else if (c.command == "werner-threshold") {
    const double p = werner_threshold(c.settings, c.tol, c.lo, c.hi);
    result = {{"p_star", p}, {"settings", c.settings}, {"tol", c.tol}, {"bracket", {c.lo, c.hi}}};
    detail::emit_text(c, result.dump(2) + "\n");
  } else if (c.command == "cv-scan") {
    io::CsvTable t{{"r", "walborn_AtoB", "walborn_BtoA", "reid_sumdiff", "entropic_sumdiff"}, {}};
    for (int i = 0; i < c.r_steps; ++i) {
      const double r = c.r_steps == 1 ? c.r_min : c.r_min + (c.r_max - c.r_min) * i / (c.r_steps - 1);
      const GaussianState g = tmsv(r);
      t.rows.push_back({r, walborn_cv(g, Direction::AtoB).violation, walborn_cv(g, Direction::BtoA).violation,
                        reid_sumdiff_cv(g, c.sign).violation, entropic_sumdiff_cv(g, c.sign).violation});
    }
    detail::emit_table(c, t);
    result = {{"points", t.rows.size()}};
  } else if (c.command == "eval") {
    DensityMatrix rho = io::read_state_file(c.state_file);
    const auto reports = detail::evaluate_witnesses(rho, c);
    io::json j = reports.size() == 1 ? io::report_to_json(reports.front()) : io::json::array();
    if (reports.size() > 1)
      for (const auto& r : reports) j.push_back(io::report_to_json(r));
    detail::emit_text(c, j.dump(2) + "\n");
    result = {{"reports", reports.size()}};
  } else if (c.command == "separable-audit") {
    Rng rng = stream_for(c.seed, 0);
    const auto states = separable_sample(c.n_states, c.k_max, rng);
    const auto pauli = mub_set(2);
    double worst = -std::numeric_limits<double>::infinity();
    double min_pt_eigenvalue = std::numeric_limits<double>::infinity();
    std::map<std::string, double> per_witness;
    std::size_t i = 0;
    for (const auto& rho : states) {
      min_pt_eigenvalue = std::min(min_pt_eigenvalue, hermitian_eigenvalues(partial_transpose_b(rho.matrix(), rho.dims())).minCoeff());
      Rng brng = stream_for(c.seed, ++i);
      std::vector<ProjectiveBasis> ba, bb;
      const ComplexMatrix ua = random_unitary(2, brng), ub = random_unitary(2, brng);
      for (const auto& b : pauli) {
        ba.push_back(b.rotated(ua));
        bb.push_back(b.rotated(ub));
      }
      const std::vector<WitnessReport> reps = {
          pair_conditional(rho, ba[0], ba[1], bb[0], bb[1], Direction::AtoB),
          pair_conditional(rho, ba[0], ba[1], bb[0], bb[1], Direction::BtoA),
          pair_symmetric_mi(rho, ba[0], ba[1], bb[0], bb[1]),
          mub_conditional(rho, ba, bb, Direction::AtoB),
          mub_conditional(rho, ba, bb, Direction::BtoA),
          mub_mi(rho, ba, bb),
          sumdiff_discrete(rho, ba[0], ba[1], bb[0], bb[1], Sign::Plus),
          sumdiff_discrete(rho, ba[0], ba[1], bb[0], bb[1], Sign::Minus)};
      static const std::array<const char*, 8> keys = {
          "pair-conditional/AtoB", "pair-conditional/BtoA", "pair-symmetric-mi", "mub-conditional/AtoB",
          "mub-conditional/BtoA",  "mub-mi",                "sumdiff-discrete/plus", "sumdiff-discrete/minus"};
      for (std::size_t k = 0; k < reps.size(); ++k) {
        const auto& r = reps[k];
        auto [it, fresh] = per_witness.try_emplace(keys[k], r.violation);
        if (!fresh) it->second = std::max(it->second, r.violation);
        worst = std::max(worst, r.violation);
      }
    }
    const bool sound = worst <= 1e-9 && min_pt_eigenvalue >= -1e-10;
    result = {{"n", states.size()},
              {"k_max", c.k_max},
              {"min_partial_transpose_eigenvalue", min_pt_eigenvalue},
              {"max_violation", worst},
              {"max_violation_by_witness", per_witness},
              {"sound", sound}};
    detail::emit_text(c, result.dump(2) + "\n");
    if (!sound) throw std::runtime_error("separable-audit: positive violation on a separable state");
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  io::json manifest = {{"command", c.command},
                       {"seed", c.seed},
                       {"parameters", detail::parameters(c)},
                       {"versions",
                        {{"entrosteer", version},
                         {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                       "." + std::to_string(EIGEN_MINOR_VERSION)},
                         {"compiler", __VERSION__}}},
                       {"result", result},
                       {"output", c.out_path.empty() ? "stdout" : c.out_path},
                       {"wall_time_s", wall},
                       {"timestamp", detail::utc_timestamp()}};
  if (!c.out_path.empty()) {
    std::ofstream m(c.out_path + ".manifest.json");
    if (!m) throw ConfigError("cannot write manifest for " + c.out_path);
    m << manifest.dump(2) << '\n';
  }
  detail::log(c.command + " finished in " + io::format_number(wall) + " s");
  return manifest;
}

/// Maps failures onto exit codes: 2 for configuration problems, 1 for
/// numerical failures. Diagnostics are one line on stderr.
inline int dispatch(const RunConfig& c) {
  try {
    run(c);
    return int(ExitCode::Ok);
  } catch (const ConfigError& e) {
    std::cerr << "entrosteer: config error: " << e.what() << '\n';
    return int(ExitCode::ConfigError);
  } catch (const io::FormatError& e) {
    std::cerr << "entrosteer: config error: " << e.what() << '\n';
    return int(ExitCode::ConfigError);
  } catch (const std::exception& e) {
    std::cerr << "entrosteer: numerical failure: " << e.what() << '\n';
    return int(ExitCode::NumericalFailure);
  }
}

}  // namespace entrosteer::cli
