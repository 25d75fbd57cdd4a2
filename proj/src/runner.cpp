#include "pco/runner.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>

#include "json.hpp"
#include "pco/protocol_msr.hpp"

namespace pco {

std::string_view to_string(RunOutcome o) noexcept {
  switch (o) {
    case RunOutcome::Converged: return "converged";
    case RunOutcome::Detected: return "detected";
    case RunOutcome::Horizon: return "horizon";
    case RunOutcome::Fault: return "fault";
  }
  return "?";
}

std::uint64_t RunSummary::total_violations() const {
  std::uint64_t total = 0;
  for (const auto& c : checks) total += c.violations;
  return total;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

void write_trace_header(std::ostream& out, std::size_t node_count) {
  out << "k,t,event_kind,node";
  for (std::size_t i = 0; i < node_count; ++i) out << ",phi_" << i;
  for (std::size_t i = 0; i < node_count; ++i) out << ",omega_" << i;
  out << ",Delta,delta_windowed,V,detected_mask\n";
}

void write_trace_row(std::ostream& out, std::uint64_t k, double t, std::string_view kind,
                     long node, const WorldState& world, const EventMetrics& m) {
  std::string line = std::to_string(k) + ',' + format_double(t) + ',' +
                     std::string(kind) + ',' + std::to_string(node);
  std::uint64_t mask = 0;
  for (NodeId i = 0; i < world.size(); ++i) {
    line += ',';
    line += world.faulty[i] ? std::string("nan") : format_double(world.oscillators[i].phase);
    if (world.oscillators[i].detected) mask |= std::uint64_t{1} << i;
  }
  for (const auto& osc : world.oscillators) {
    line += ',';
    line += format_double(osc.omega);
  }
  line += ',' + format_double(m.arc) + ',' + format_double(m.spread_windowed) + ',' +
          format_double(m.V) + ',' + std::to_string(mask) + '\n';
  out << line;
}

RunSummary run(const ScenarioConfig& config, const RunOptions& options) {
  return run_world(config, materialize(config), options);
}

RunSummary run_world(const ScenarioConfig& config, Materialized initial,
                     const RunOptions& options) {
  const WorldState& w0 = initial.world;
  if (options.trace && w0.size() > 64) {
    throw ConfigError("trace detected_mask supports at most 64 nodes");
  }
  const auto protocol = make_protocol(config);

  std::size_t d_max = 0;
  for (NodeId i : w0.normal_ids) d_max = std::max(d_max, in_degree(w0.graph, i));

  RunSummary s;
  s.node_count = w0.size();
  s.edge_count = w0.graph.edge_count();
  s.f = config.f;
  s.algorithm = config.algorithm;
  s.normal_count = w0.normal_ids.size();
  s.seed = config.seed;
  s.alpha = effective_alpha(config.weights, d_max);

  MonitorConfig mc;
  mc.kbar = config.kbar;
  mc.alpha = s.alpha;
  mc.arc_limit = config.algorithm == Algorithm::Relative ? 0.5 - config.zeta : 0.5;
  mc.phase_tolerance = config.phase_tolerance;
  mc.frequency_tolerance = config.frequency_tolerance;
  RunMonitor monitor(w0, mc);
  s.kbar = monitor.kbar();
  s.initial = monitor.initial();
  s.final_metrics = s.initial;

  if (options.trace) {
    write_trace_header(*options.trace, w0.size());
    write_trace_row(*options.trace, 0, 0.0, "Init", -1, w0, s.initial);
  }

  const auto budget = event_budget(w0, initial.scripts, config.horizon);
  Simulator sim(std::move(initial.world), *protocol, std::move(initial.scripts), budget);
  try {
    while (true) {
      auto step = sim.step(config.horizon);
      if (!step) {
        s.outcome = RunOutcome::Horizon;
        break;
      }
      const auto& world = sim.world();
      const std::uint64_t k = world.event_count;
      const auto m = monitor.observe(world, step->dt, k);
      s.final_metrics = m;
      bool detected_now = false;
      if (step->update) {
        const auto& u = *step->update;
        monitor.note_update(u.node, k);
        if (u.outcome == UpdateOutcome::Detected) {
          s.detections.push_back({u.node, u.time, k, u.count, u.in_degree});
          detected_now = true;
        }
        if (options.keep_updates) s.updates.push_back(u);
      }
      if (options.trace) {
        write_trace_row(*options.trace, k, world.clock, to_string(step->event.kind),
                        static_cast<long>(step->event.node), world, m);
      }
      if (options.observer) options.observer(*step, world, m);
      if (detected_now && config.halt_on_detection) {
        s.outcome = RunOutcome::Detected;
        break;
      }
      if (config.halt_on_convergence && monitor.converged()) {
        s.outcome = RunOutcome::Converged;
        break;
      }
    }
  } catch (const ProtocolFault& e) {
    s.outcome = RunOutcome::Fault;
    s.fault = e.what();
  } catch (const EngineError& e) {
    s.outcome = RunOutcome::Fault;
    s.fault = e.what();
  }
  if (s.outcome == RunOutcome::Horizon && !s.detections.empty()) {
    s.outcome = RunOutcome::Detected;
  } else if (s.outcome == RunOutcome::Horizon && monitor.converged()) {
    s.outcome = RunOutcome::Converged;
  }
  s.final_time = sim.world().clock;
  s.event_count = sim.world().event_count;
  s.measured_kbar = monitor.measured_kbar();
  for (std::size_t c = 0; c < s.checks.size(); ++c) {
    s.checks[c] = monitor.stat(static_cast<Check>(c));
  }
  return s;
}

std::string summary_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["outcome"] = std::string(to_string(s.outcome));
  j["converged"] = s.converged();
  j["N"] = s.node_count;
  j["edges"] = s.edge_count;
  j["f"] = s.f;
  j["algorithm"] = std::string(to_string(s.algorithm));
  j["normal_count"] = s.normal_count;
  j["seed"] = s.seed;
  j["alpha"] = s.alpha;
  j["initial_Delta"] = s.initial.arc;
  j["initial_delta"] = s.initial.spread_windowed;
  j["final_Delta"] = s.final_metrics.arc;
  j["final_delta"] = s.final_metrics.spread_windowed;
  j["final_time"] = s.final_time;
  j["event_count"] = s.event_count;
  j["kbar"] = s.kbar;
  j["measured_kbar"] = s.measured_kbar;
  auto det = nlohmann::ordered_json::array();
  for (const auto& d : s.detections) {
    det.push_back({{"node", d.node}, {"time", d.time}, {"k", d.k},
                   {"count", d.count}, {"in_degree", d.in_degree}});
  }
  j["detections"] = det;
  nlohmann::ordered_json checks;
  for (std::size_t c = 0; c < s.checks.size(); ++c) {
    const auto& st = s.checks[c];
    nlohmann::ordered_json e{{"violations", st.violations}};
    if (st.violations > 0) {
      e["first_k"] = st.first_k;
      e["worst"] = st.worst;
    }
    checks[std::string(to_string(static_cast<Check>(c)))] = e;
  }
  j["checks"] = checks;
  if (!s.fault.empty()) j["fault"] = s.fault;
  return j.dump(2);
}

}  // namespace pco
