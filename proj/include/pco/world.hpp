#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "pco/graph.hpp"

namespace pco {

/// Thrown when the engine detects a broken internal contract (threshold
/// overshoot, non-monotone event times, runaway event counts).
class EngineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Declaration order is the tie-break priority for simultaneous events: every
// pulse emitted at time t is delivered before any update at time t.
enum class EventKind : std::uint8_t {
  AdversaryStartPulse,
  AdversaryPulse,
  Fire,
  StartPulse,
  UpdateTrigger,
};

std::string_view to_string(EventKind kind) noexcept;

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::Fire;
  NodeId node = 0;
  std::uint64_t index = 0;  // k in the global event sequence
};

/// Reception phases of the two pulses of one incoming channel in the current
/// round (relative-frequency protocol).
struct EdgeStamps {
  std::optional<double> start;
  std::optional<double> end;
};

struct OscillatorState {
  double phase = 0.0;
  double omega = 1.0;
  bool gamma = false;           // fired since the last update
  std::size_t counter = 0;      // pulses counted this round
  std::vector<double> freq_buffer;
  std::optional<double> zbar;   // set when the counter reaches f+1
  std::optional<double> zunder; // set when the counter reaches d_i-f
  std::vector<EdgeStamps> stamps;  // indexed by in-neighbor slot
  bool detected = false;
  bool start_sent = false;      // start pulse emitted in the current cycle
};

struct WorldState {
  DirectedGraph graph;
  std::vector<OscillatorState> oscillators;
  std::vector<bool> faulty;
  std::vector<NodeId> normal_ids;
  std::vector<NodeId> faulty_ids;
  double clock = 0.0;
  std::uint64_t event_count = 0;
  std::uint64_t rng_seed = 0;

  [[nodiscard]] bool is_normal(NodeId i) const { return !faulty.at(i); }
  [[nodiscard]] std::size_t size() const noexcept { return oscillators.size(); }
};

/// Builds a world at t = 0 with every protocol variable at its initial value
/// (gamma = 0, counter = 0, empty buffers). Phases of faulty nodes are ignored.
WorldState make_world(DirectedGraph graph, std::span<const NodeId> faulty,
                      std::span<const double> phases,
                      std::span<const double> omegas,
                      std::uint64_t seed = 0);

/// Largest number of faulty in-neighbors of any normal node; the attack is
/// f-local iff this is at most f.
std::size_t max_faulty_in_neighbors(const WorldState& world);

/// Normal-node phases, in normal_ids order.
std::vector<double> normal_phases(const WorldState& world);
std::vector<double> normal_omegas(const WorldState& world);

/// Free flow: every normal phase advances by omega * dt. The caller must not
/// carry a node past a threshold; an overshoot beyond rounding throws.
void advance_all(WorldState& world, double dt);

}  // namespace pco
