#include "cli.hpp"

#include "CLI11.hpp"

#include <map>

using entrosteer::cli::Format;
using entrosteer::cli::RunConfig;

int main(int argc, char** argv) {
  CLI::App app{"Entropic steering witnesses: surveys, thresholds and state evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", entrosteer::cli::version);

  RunConfig cfg;
  std::string ensemble = "mixed", format = "csv", direction = "AtoB", sign = "minus";

  const std::map<std::string, std::string> commands = {
      {"fig1", "conditional vs symmetric violation survey over random two-qubit states"},
      {"fig2", "directional violations after random-search basis optimization"},
      {"sweep", "directional violations of one state over many random basis sets"},
      {"werner-threshold", "bisect the Werner-state violation threshold"},
      {"cv-scan", "continuous-variable witnesses on two-mode squeezed vacuum over an r grid"},
      {"eval", "evaluate witnesses on a state file"},
      {"separable-audit", "check that no witness fires on sampled separable states"}};

  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--seed", cfg.seed, "random seed")->envname("ENTROSTEER_SEED");
    sub->add_option("--out", cfg.out_path, "output data file (default: stdout)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", cfg.threads, "worker threads (results do not depend on it)");
    sub->add_option("--tol", cfg.tol, "tolerance");
    if (name == "fig1" || name == "fig2" || name == "sweep" || name == "separable-audit")
      sub->add_option("--n", cfg.n_states, "number of states (sweep: number of basis sets)");
    if (name == "fig1" || name == "fig2" || name == "sweep")
      sub->add_option("--ensemble", ensemble, "pure, mixed (Hilbert-Schmidt), bures or separable")
          ->check(CLI::IsMember({"pure", "mixed", "bures", "separable"}));
    if (name == "fig2" || name == "sweep") sub->add_option("--trials", cfg.n_trials, "basis sets per state");
    if (name == "sweep") {
      sub->add_option("--state-file", cfg.state_file, "state to sweep (default: most asymmetric surveyed state)");
      sub->add_option("--select-n", cfg.select_states, "states surveyed when selecting a candidate");
    }
    if (name == "werner-threshold") {
      sub->add_option("--settings", cfg.settings, "2 (X/Z pair) or 3 (Pauli triple)");
      sub->add_option("--lo", cfg.lo, "bracket lower end");
      sub->add_option("--hi", cfg.hi, "bracket upper end");
    }
    if (name == "eval") {
      sub->add_option("--state-file", cfg.state_file, "JSON state file")->required();
      sub->add_option("--witness", cfg.witness,
                      "pair-conditional, pair-symmetric-mi, mub-conditional, mub-mi, sumdiff or all");
      sub->add_option("--direction", direction, "AtoB or BtoA")->check(CLI::IsMember({"AtoB", "BtoA"}));
    }
    if (name == "eval" || name == "cv-scan")
      sub->add_option("--sign", sign, "sum/difference sign on the first pair")->check(CLI::IsMember({"plus", "minus"}));
    if (name == "cv-scan") {
      sub->add_option("--r-min", cfg.r_min, "smallest squeezing");
      sub->add_option("--r-max", cfg.r_max, "largest squeezing");
      sub->add_option("--steps", cfg.r_steps, "grid points");
    }
    if (name == "separable-audit") sub->add_option("--k-max", cfg.k_max, "max product terms per state");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "entrosteer: config error: " << e.what() << '\n';
    return static_cast<int>(entrosteer::cli::ExitCode::ConfigError);
  }

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.ensemble = entrosteer::ensemble_from_string(ensemble);
  cfg.format = format == "json" ? Format::Json : Format::Csv;
  cfg.direction = entrosteer::direction_from_string(direction);
  cfg.sign = sign == "plus" ? entrosteer::Sign::Plus : entrosteer::Sign::Minus;
  return entrosteer::cli::dispatch(cfg);
}
