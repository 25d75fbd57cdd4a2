#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "pco/scenario.hpp"

namespace pco {

struct SweepSettings {
  std::vector<double> arc_grid{0.05, 0.15, 0.25, 0.35, 0.45};
  double spread_hi = 1.0;       // upper end of the delta(0) bisection
  double tolerance = 0.01;      // bisection stops below this bracket width
  std::size_t trials = 100;
  std::size_t parallelism = 1;
  double success_threshold = 0.95;
  bool synchronized_only = false;  // otherwise detection also counts as success
};

struct FrontierRow {
  double arc0 = 0.0;
  double spread0_max = 0.0;
  double success_rate = 0.0;  // at spread0_max
};

/// The scenario a single trial runs: the base scenario with normal phases
/// spread over [0, arc0] and normal frequencies over [1, 1 + spread0], both
/// extremes attained. Draws depend only on (base seed, grid index, trial).
ScenarioConfig trial_config(const ScenarioConfig& base, double arc0, double spread0,
                            std::size_t grid_index, std::size_t trial);

bool trial_succeeds(const ScenarioConfig& trial, bool synchronized_only);

/// Fraction of `settings.trials` trials that succeed, run on
/// `settings.parallelism` threads.
double success_rate(const ScenarioConfig& base, const SweepSettings& settings,
                    double arc0, double spread0, std::size_t grid_index);

std::vector<FrontierRow> sweep(const ScenarioConfig& base, const SweepSettings& settings);

void write_frontier_csv(std::ostream& out, const std::vector<FrontierRow>& rows);

}  // namespace pco
