#include "pco/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "pco/phase.hpp"

namespace pco {

namespace {

struct Candidate {
  double time;
  EventKind kind;
  NodeId node;
};

}  // namespace

Event next_event(const WorldState& world, std::span<const AttackScript> scripts,
                 std::span<const ScriptCursor> cursors,
                 std::optional<double> start_phase) {
  std::vector<Candidate> pending;
  pending.reserve(world.size() * 3 + scripts.size() * 2);
  const double now = world.clock;

  for (NodeId i : world.normal_ids) {
    const auto& osc = world.oscillators[i];
    pending.push_back({now + time_to_phase(osc.phase, osc.omega, 1.0),
                       EventKind::Fire, i});
    if (osc.gamma && osc.phase <= 0.5 + kThresholdSlack) {
      pending.push_back({now + std::max(0.0, 0.5 - osc.phase) / osc.omega,
                         EventKind::UpdateTrigger, i});
    }
    if (start_phase && !osc.start_sent && osc.phase <= *start_phase + kThresholdSlack) {
      pending.push_back({now + std::max(0.0, *start_phase - osc.phase) / osc.omega,
                         EventKind::StartPulse, i});
    }
  }
  for (std::size_t s = 0; s < scripts.size(); ++s) {
    const auto& script = scripts[s];
    if (cursors[s].pulse < script.pulse_times.size()) {
      pending.push_back({std::max(now, script.pulse_times[cursors[s].pulse]),
                         EventKind::AdversaryPulse, script.node});
    }
    if (cursors[s].start < script.start_pulse_times.size()) {
      pending.push_back(
          {std::max(now, script.start_pulse_times[cursors[s].start]),
           EventKind::AdversaryStartPulse, script.node});
    }
  }
  if (pending.empty()) throw EngineError("no pending events");

  double earliest = std::numeric_limits<double>::infinity();
  for (const auto& c : pending) earliest = std::min(earliest, c.time);
  const Candidate* chosen = nullptr;
  for (const auto& c : pending) {
    if (c.time > earliest + kSimultaneityTolerance) continue;
    if (chosen == nullptr || std::tie(c.kind, c.node) <
                                 std::tie(chosen->kind, chosen->node)) {
      chosen = &c;
    }
  }
  return Event{earliest, chosen->kind, chosen->node, world.event_count + 1};
}

Simulator::Simulator(WorldState world, const Protocol& protocol,
                     std::vector<AttackScript> scripts, std::uint64_t max_events)
    : world_(std::move(world)),
      protocol_(protocol),
      scripts_(std::move(scripts)),
      cursors_(scripts_.size()),
      max_events_(max_events) {
  for (const auto& script : scripts_) {
    check_script(script);
    if (script.node >= world_.size() || world_.is_normal(script.node)) {
      throw std::invalid_argument("attack script on node " +
                                  std::to_string(script.node) +
                                  ", which is not a faulty node");
    }
  }
}

std::optional<StepResult> Simulator::step(double horizon) {
  const auto start_phase = protocol_.start_pulse_phase();
  Event event = next_event(world_, scripts_, cursors_, start_phase);
  if (event.time > horizon) return std::nullopt;
  if (event.time < world_.clock) {
    throw EngineError("event time went backwards at k=" +
                      std::to_string(event.index));
  }

  StepResult result;
  result.dt = event.time - world_.clock;
  advance_all(world_, result.dt);
  world_.clock = event.time;
  world_.event_count = event.index;
  if (world_.event_count > max_events_) {
    throw EngineError("event budget of " + std::to_string(max_events_) +
                      " exceeded at t=" + std::to_string(event.time));
  }

  auto& osc = world_.oscillators[event.node];
  switch (event.kind) {
    case EventKind::Fire:
      osc.phase = 1.0;
      osc.start_sent = false;
      protocol_.fire(world_, event.node);
      break;
    case EventKind::StartPulse:
      osc.phase = *start_phase;
      osc.start_sent = true;
      protocol_.start_pulse(world_, event.node);
      break;
    case EventKind::UpdateTrigger:
      osc.phase = 0.5;
      result.update = protocol_.update(world_, event.node);
      result.update->time = event.time;
      break;
    case EventKind::AdversaryPulse: {
      for (std::size_t s = 0; s < scripts_.size(); ++s) {
        auto& cursor = cursors_[s];
        const auto& script = scripts_[s];
        if (script.node != event.node || cursor.pulse >= script.pulse_times.size()) {
          continue;
        }
        if (script.pulse_times[cursor.pulse] > event.time + kSimultaneityTolerance) {
          continue;
        }
        result.claim = script.claim_at(cursor.pulse, osc.omega);
        ++cursor.pulse;
        protocol_.adversary_pulse(world_, event.node, result.claim);
        break;
      }
      break;
    }
    case EventKind::AdversaryStartPulse: {
      for (std::size_t s = 0; s < scripts_.size(); ++s) {
        auto& cursor = cursors_[s];
        const auto& script = scripts_[s];
        if (script.node != event.node ||
            cursor.start >= script.start_pulse_times.size()) {
          continue;
        }
        if (script.start_pulse_times[cursor.start] >
            event.time + kSimultaneityTolerance) {
          continue;
        }
        ++cursor.start;
        protocol_.adversary_start_pulse(world_, event.node);
        break;
      }
      break;
    }
  }
  result.event = event;
  return result;
}

std::uint64_t event_budget(const WorldState& world,
                           std::span<const AttackScript> scripts, double horizon) {
  double omega_max = 1.0;
  for (NodeId i : world.normal_ids) {
    omega_max = std::max(omega_max, world.oscillators[i].omega);
  }
  double scripted = 0.0;
  for (const auto& s : scripts) {
    scripted += static_cast<double>(s.pulse_times.size() + s.start_pulse_times.size());
  }
  const double per_unit = 3.0 * static_cast<double>(world.normal_ids.size()) *
                          std::ceil(omega_max);
  const double budget = 4.0 * (per_unit * (std::max(horizon, 0.0) + 1.0) + scripted);
  return static_cast<std::uint64_t>(std::min(budget, 1e15));
}

}  // namespace pco
