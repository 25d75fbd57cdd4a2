// Command-line front end: validate scenarios, check graph robustness, run a
// single scenario, or sweep the admissible initial frequency spread.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pco/graph.hpp"
#include "pco/runner.hpp"
#include "pco/scenario.hpp"
#include "pco/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitViolation = 3;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> horizon;
  std::optional<std::string> algorithm;
  std::optional<std::string> trace;

  void attach(CLI::App& cmd, bool with_trace) {
    cmd.add_option("--seed", seed, "Override the scenario seed");
    cmd.add_option("--horizon", horizon, "Override the simulated time horizon");
    cmd.add_option("--algorithm", algorithm, "absolute or relative")
        ->check(CLI::IsMember({"absolute", "relative"}));
    if (with_trace) cmd.add_option("--trace", trace, "Write the per-event trace CSV here");
  }

  void apply(pco::ScenarioConfig& cfg) const {
    if (seed) cfg.seed = *seed;
    if (horizon) cfg.horizon = *horizon;
    if (algorithm) cfg.algorithm = pco::parse_algorithm(*algorithm);
    if (trace) cfg.trace_path = *trace;
  }
};

void print_findings(const std::vector<pco::Finding>& findings) {
  for (const auto& f : findings) {
    const bool err = f.severity == pco::Finding::Severity::Error;
    (err ? std::cerr : std::cout) << (err ? "error: " : "info: ") << f.message << '\n';
  }
}

pco::DirectedGraph load_graph_arg(const std::string& arg) {
  if (arg == "demo8") return pco::demo_graph();
  if (arg.rfind("complete:", 0) == 0) return pco::complete_digraph(std::stoul(arg.substr(9)));
  if (arg.rfind("ring:", 0) == 0) return pco::directed_ring(std::stoul(arg.substr(5)));
  return pco::load_graph_file(arg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulse-coupled oscillator synchronization simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  Overrides overrides;

  auto* validate_cmd = app.add_subcommand("validate-config", "Check a scenario file");
  validate_cmd->add_option("scenario", scenario_path, "Scenario JSON")->required();
  overrides.attach(*validate_cmd, false);

  std::string graph_arg;
  std::size_t f = 1;
  std::optional<std::size_t> r_override;
  std::size_t guard = pco::kDefaultRobustnessGuard;
  auto* robust_cmd = app.add_subcommand("check-robustness", "Exhaustive r-robustness check");
  robust_cmd->add_option("graph", graph_arg, "Graph file, demo8, complete:N or ring:N")
      ->required();
  robust_cmd->add_option("--f", f, "Fault bound; checks r = 2f+1");
  robust_cmd->add_option("-r", r_override, "Check this r instead of 2f+1");
  robust_cmd->add_option("--guard", guard, "Largest N enumerated");

  bool force = false;
  bool strict_checks = false;
  std::optional<std::string> summary_path;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario");
  run_cmd->add_option("scenario", scenario_path, "Scenario JSON")->required();
  overrides.attach(*run_cmd, true);
  run_cmd->add_flag("--force", force, "Run even if validation reports errors");
  run_cmd->add_flag("--strict-checks", strict_checks,
                    "Exit 3 when any per-event diagnostic check is violated");
  run_cmd->add_option("--summary", summary_path, "Write the summary JSON here");

  pco::SweepSettings sweep_settings;
  bool full_trials = false;
  std::optional<std::string> frontier_path;
  auto* sweep_cmd = app.add_subcommand("sweep", "Frontier of admissible delta(0) per Delta(0)");
  sweep_cmd->add_option("scenario", scenario_path, "Base scenario JSON")->required();
  overrides.attach(*sweep_cmd, false);
  sweep_cmd->add_option("--trials", sweep_settings.trials, "Trials per evaluation")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_flag("--full", full_trials, "Use 1000 trials per evaluation");
  sweep_cmd->add_option("--parallelism", sweep_settings.parallelism, "Worker threads")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--grid", sweep_settings.arc_grid, "Delta(0) values")->delimiter(',');
  sweep_cmd->add_option("--spread-hi", sweep_settings.spread_hi, "Upper end of the bisection");
  sweep_cmd->add_option("--tolerance", sweep_settings.tolerance, "Bisection tolerance");
  sweep_cmd->add_option("--threshold", sweep_settings.success_threshold,
                        "Required fraction of successful trials");
  sweep_cmd->add_flag("--synchronized-only", sweep_settings.synchronized_only,
                      "Do not count detection as success");
  sweep_cmd->add_option("--out", frontier_path, "Write the frontier CSV here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*robust_cmd) {
      const auto g = load_graph_arg(graph_arg);
      const std::size_t r = r_override.value_or(2 * f + 1);
      const bool ok = pco::is_r_robust(g, r, guard);
      std::cout << "N=" << g.node_count() << " edges=" << g.edge_count() << '\n'
                << r << "-robust: " << (ok ? "yes" : "no") << '\n'
                << "max robustness: " << pco::max_robustness(g, guard) << '\n';
      return ok ? kExitOk : kExitInvalid;
    }

    auto cfg = pco::load_scenario(scenario_path);
    overrides.apply(cfg);

    if (*validate_cmd) {
      const auto findings = pco::validate(cfg);
      print_findings(findings);
      return pco::has_errors(findings) ? kExitInvalid : kExitOk;
    }

    if (*run_cmd) {
      const auto findings = pco::validate(cfg);
      if (pco::has_errors(findings)) {
        print_findings(findings);
        if (!force) return kExitInvalid;
      }
      std::ofstream trace_file;
      pco::RunOptions opts;
      if (cfg.trace_path) {
        trace_file.open(*cfg.trace_path, std::ios::binary);
        if (!trace_file) {
          std::cerr << "error: cannot write trace " << *cfg.trace_path << '\n';
          return kExitInvalid;
        }
        opts.trace = &trace_file;
      }
      const auto summary = pco::run(cfg, opts);
      const auto text = pco::summary_json(summary) + '\n';
      if (summary_path) {
        std::ofstream(*summary_path, std::ios::binary) << text;
      } else {
        std::cout << text;
      }
      if (summary.outcome == pco::RunOutcome::Fault) {
        std::cerr << "error: " << summary.fault << " at event " << summary.event_count << '\n';
        return kExitViolation;
      }
      if (strict_checks && summary.total_violations() > 0) return kExitViolation;
      return kExitOk;
    }

    if (*sweep_cmd) {
      if (full_trials) sweep_settings.trials = 1000;
      const auto rows = pco::sweep(cfg, sweep_settings);
      if (frontier_path) {
        std::ofstream out(*frontier_path, std::ios::binary);
        pco::write_frontier_csv(out, rows);
      } else {
        pco::write_frontier_csv(std::cout, rows);
      }
      return kExitOk;
    }
  } catch (const pco::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const pco::GraphError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const pco::EngineError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitViolation;
  }
  return kExitOk;
}
