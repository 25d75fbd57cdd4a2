#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pco/engine.hpp"
#include "pco/metrics.hpp"
#include "pco/scenario.hpp"

namespace pco {

enum class RunOutcome { Converged, Detected, Horizon, Fault };

std::string_view to_string(RunOutcome o) noexcept;

struct DetectionEvent {
  NodeId node = 0;
  double time = 0.0;
  std::uint64_t k = 0;
  std::size_t count = 0;      // pulses counted in the offending round
  std::size_t in_degree = 0;
};

struct RunSummary {
  RunOutcome outcome = RunOutcome::Horizon;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::size_t f = 0;
  Algorithm algorithm = Algorithm::Absolute;
  std::size_t normal_count = 0;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  std::size_t kbar = 0;
  EventMetrics initial;
  EventMetrics final_metrics;
  double final_time = 0.0;
  std::uint64_t event_count = 0;
  std::uint64_t measured_kbar = 0;
  std::vector<DetectionEvent> detections;
  std::array<CheckStat, static_cast<std::size_t>(Check::Count)> checks{};
  std::string fault;  // set when outcome == Fault
  std::vector<UpdateRecord> updates;  // only with RunOptions::keep_updates

  [[nodiscard]] bool converged() const noexcept { return outcome == RunOutcome::Converged; }
  [[nodiscard]] std::uint64_t total_violations() const;
};

struct RunOptions {
  bool keep_updates = false;
  std::ostream* trace = nullptr;
  /// Called after every processed event with the post-event state.
  std::function<void(const StepResult&, const WorldState&, const EventMetrics&)> observer;
};

/// Materializes the scenario and runs it until the horizon, convergence or
/// detection (subject to the halt flags), or until a protocol fault.
RunSummary run(const ScenarioConfig& config, const RunOptions& options = {});

/// Same, for an already materialized world.
RunSummary run_world(const ScenarioConfig& config, Materialized initial,
                     const RunOptions& options = {});

void write_trace_header(std::ostream& out, std::size_t node_count);
void write_trace_row(std::ostream& out, std::uint64_t k, double t, std::string_view kind,
                     long node, const WorldState& world, const EventMetrics& m);

/// Summary record as pretty-printed JSON.
std::string summary_json(const RunSummary& s);

/// Shortest round-trip decimal form; "nan" for NaN.
std::string format_double(double v);

}  // namespace pco
