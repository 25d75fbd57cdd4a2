#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pco/world.hpp"

namespace pco {

enum class AttackKind { Stealthy, Flooding, Silent, Custom };

std::string_view to_string(AttackKind kind) noexcept;

/// Frequency value a misbehaving node puts on its pulses under the
/// absolute-frequency protocol.
class FrequencyClaim {
 public:
  /// Claims the node's own nominal frequency (timing-only misbehavior).
  static FrequencyClaim true_omega() { return FrequencyClaim(Kind::TrueOmega, 0.0); }
  /// 1 + |sin t|
  static FrequencyClaim one_plus_abs_sin() { return FrequencyClaim(Kind::AbsSin, 0.0); }
  /// 1 + t - floor(t)
  static FrequencyClaim sawtooth() { return FrequencyClaim(Kind::Sawtooth, 0.0); }
  static FrequencyClaim constant(double value);

  /// Accepts `one_plus_abs_sin`, `sawtooth`, `true_omega` and `constant:x`.
  static FrequencyClaim parse(std::string_view name);

  [[nodiscard]] double operator()(double t, double true_omega) const;
  [[nodiscard]] std::string name() const;

 private:
  enum class Kind { TrueOmega, AbsSin, Sawtooth, Constant };
  FrequencyClaim(Kind kind, double value) : kind_(kind), value_(value) {}

  Kind kind_;
  double value_;
};

/// Fixed pulse schedule of one misbehaving node. Immutable once a run starts.
struct AttackScript {
  NodeId node = 0;
  AttackKind kind = AttackKind::Silent;
  std::vector<double> pulse_times;        // strictly increasing
  std::vector<double> explicit_claims;    // per pulse; overrides `claim`
  FrequencyClaim claim = FrequencyClaim::true_omega();
  std::vector<double> start_pulse_times;  // forged start pulses (relative protocol)

  [[nodiscard]] double claim_at(std::size_t pulse_index, double true_omega) const;
  [[nodiscard]] double first_time() const;
};

/// One pulse per nominal round of length `period`; pulse n is emitted at
/// (n + offsets[n % offsets.size()]) * period, up to `horizon`.
AttackScript stealthy_script(NodeId node, double period,
                             std::vector<double> offsets, FrequencyClaim claim,
                             double horizon);

/// `burst_count` pulses spaced `burst_interval` apart starting at `start`.
AttackScript flooding_script(NodeId node, double start, std::size_t burst_count,
                             double burst_interval,
                             FrequencyClaim claim = FrequencyClaim::true_omega());

AttackScript silent_script(NodeId node);

/// Explicit (time, claimed frequency) pulses.
AttackScript custom_script(NodeId node,
                           const std::vector<std::pair<double, double>>& pulses,
                           std::vector<double> start_pulse_times = {});

/// Adds a forged start pulse ahead of every pulse, spaced as an honest node
/// running at the claimed frequency would space them for offset `zeta`.
void add_start_pulses(AttackScript& script, double zeta, double true_omega);

/// Throws std::invalid_argument if pulse times are negative or not strictly
/// increasing.
void check_script(const AttackScript& script);

/// Conservative dry run of the schedule against the round structure of every
/// normal out-neighbor of the script's node: a receiver round never lasts
/// longer than (1.5 - phase) / omega_min at the start and 1.25 / omega_min
/// afterwards, so a schedule whose consecutive pulses are at least that far
/// apart can add at most one pulse to any round.
bool is_stealthy(const AttackScript& script, const WorldState& world,
                 double horizon);

}  // namespace pco
