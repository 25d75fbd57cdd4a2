#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pco/adversary.hpp"
#include "pco/world.hpp"

namespace pco {

/// Two event times closer than this are treated as simultaneous.
inline constexpr double kSimultaneityTolerance = 1e-12;
/// A node advanced to a shared event time may land a few ulps past its own
/// threshold; thresholds are still considered pending within this slack.
inline constexpr double kThresholdSlack = 1e-9;

struct RelativeEstimate {
  NodeId source = 0;
  double eta = 0.0;
  bool valid = false;
};

enum class UpdateOutcome { Updated, Detected, Frozen };

/// What a normal node did when its update trigger fired.
struct UpdateRecord {
  NodeId node = 0;
  double time = 0.0;
  UpdateOutcome outcome = UpdateOutcome::Updated;
  std::size_t count = 0;      // c_i at the update instant
  std::size_t in_degree = 0;  // d_i
  std::size_t trim = 0;       // f_i
  double phase_before = 0.5;
  double phase_after = 0.5;
  double omega_before = 1.0;
  double omega_after = 1.0;
  std::vector<RelativeEstimate> estimates;  // relative protocol only
};

/// State transitions a synchronization protocol performs at each event. The
/// engine advances time, snaps the acting node onto its threshold and then
/// hands control to one of these.
class Protocol {
 public:
  virtual ~Protocol() = default;

  /// Phase at which normal nodes emit a start pulse, if the protocol has one.
  [[nodiscard]] virtual std::optional<double> start_pulse_phase() const {
    return std::nullopt;
  }
  virtual void fire(WorldState& world, NodeId i) const = 0;
  virtual void start_pulse(WorldState& /*world*/, NodeId /*i*/) const {}
  virtual UpdateRecord update(WorldState& world, NodeId i) const = 0;
  virtual void adversary_pulse(WorldState& world, NodeId attacker,
                               double claim) const = 0;
  virtual void adversary_start_pulse(WorldState& /*world*/,
                                     NodeId /*attacker*/) const {}
};

/// Position of the next unplayed pulse in each attack script.
struct ScriptCursor {
  std::size_t pulse = 0;
  std::size_t start = 0;
};

/// Earliest pending occurrence. Normal nodes contribute their firing
/// threshold, their update trigger (phase 0.5 with gamma set) and, when
/// `start_phase` is given, their start-pulse threshold; scripts contribute
/// their next pulses. Occurrences within kSimultaneityTolerance of the
/// earliest one are ordered by EventKind and then node id; the returned
/// event carries the earliest time of that group.
Event next_event(const WorldState& world, std::span<const AttackScript> scripts,
                 std::span<const ScriptCursor> cursors,
                 std::optional<double> start_phase);

struct StepResult {
  Event event;
  std::optional<UpdateRecord> update;
  double dt = 0.0;
  double claim = 0.0;  // payload of an adversary pulse
};

class Simulator {
 public:
  Simulator(WorldState world, const Protocol& protocol,
            std::vector<AttackScript> scripts, std::uint64_t max_events);

  /// Processes the next event unless it lies beyond `horizon`.
  std::optional<StepResult> step(double horizon);

  [[nodiscard]] const WorldState& world() const noexcept { return world_; }
  [[nodiscard]] std::span<const AttackScript> scripts() const noexcept {
    return scripts_;
  }

 private:
  WorldState world_;
  const Protocol& protocol_;
  std::vector<AttackScript> scripts_;
  std::vector<ScriptCursor> cursors_;
  std::uint64_t max_events_;
};

/// Event budget for a run: every normal node produces at most three events per
/// cycle, at most ceil(omega_max) cycles per time unit, plus every scripted
/// pulse; multiplied by a safety factor of 4.
std::uint64_t event_budget(const WorldState& world,
                           std::span<const AttackScript> scripts, double horizon);

}  // namespace pco
