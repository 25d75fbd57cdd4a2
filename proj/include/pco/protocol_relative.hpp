#pragma once

#include <optional>

#include "pco/protocol_msr.hpp"

namespace pco {

struct RelativeParams {
  double zeta = 0.1;  // start pulse at phase 1 - zeta
  std::size_t f = 1;
  WeightPolicy weights;
  bool eager_detection = false;
};

void check_params(const RelativeParams& params);

/// eta_ij = zeta / (end stamp - start stamp); empty when the pair is
/// incomplete or the receiver's phase did not advance between the pulses.
std::optional<double> compute_eta(const EdgeStamps& stamps, double zeta);

// Receivers tell incoming channels apart (one slot per in-edge) but pulses
// carry no payload.
void on_start_pulse(OscillatorState& state, std::size_t slot);
void on_end_pulse(OscillatorState& state, std::size_t slot, std::size_t in_degree,
                  const RelativeParams& params);

/// Phase thresholds of a normal node: the start pulse at 1 - zeta and the end
/// pulse (firing) at 1.
void emit_start_pulse(WorldState& world, const RelativeParams& params, NodeId i);
void emit_end_pulse(WorldState& world, const RelativeParams& params, NodeId i);

UpdateRecord on_update_relative(WorldState& world, const RelativeParams& params,
                                NodeId i);

class RelativeProtocol final : public Protocol {
 public:
  explicit RelativeProtocol(RelativeParams params);

  [[nodiscard]] std::optional<double> start_pulse_phase() const override {
    return 1.0 - params_.zeta;
  }
  void fire(WorldState& world, NodeId i) const override;
  void start_pulse(WorldState& world, NodeId i) const override;
  UpdateRecord update(WorldState& world, NodeId i) const override;
  void adversary_pulse(WorldState& world, NodeId attacker,
                       double claim) const override;
  void adversary_start_pulse(WorldState& world, NodeId attacker) const override;

  [[nodiscard]] const RelativeParams& params() const noexcept { return params_; }

 private:
  RelativeParams params_;
};

}  // namespace pco
