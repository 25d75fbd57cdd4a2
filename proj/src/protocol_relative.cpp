#include "pco/protocol_relative.hpp"

#include <string>

namespace pco {

void check_params(const RelativeParams& params) {
  if (!(params.zeta > 0.0 && params.zeta < 0.5)) {
    throw std::invalid_argument("zeta must lie in (0, 0.5)");
  }
}

std::optional<double> compute_eta(const EdgeStamps& stamps, double zeta) {
  if (!stamps.start || !stamps.end) return std::nullopt;
  const double gap = *stamps.end - *stamps.start;
  if (!(gap > 0.0)) return std::nullopt;
  return zeta / gap;
}

void on_start_pulse(OscillatorState& state, std::size_t slot) {
  state.stamps.at(slot).start = state.phase;
}

void on_end_pulse(OscillatorState& state, std::size_t slot, std::size_t in_degree,
                  const RelativeParams& params) {
  state.stamps.at(slot).end = state.phase;
  count_pulse(state, in_degree, params.f, params.eager_detection);
}

namespace {

template <typename Handler>
void broadcast(WorldState& world, NodeId sender, Handler&& handle) {
  for (NodeId r : world.graph.out_neighbors(sender)) {
    if (!world.is_normal(r)) continue;
    handle(world.oscillators[r], world.graph.in_slot(r, sender),
           world.graph.in_neighbors(r).size());
  }
}

}  // namespace

void emit_start_pulse(WorldState& world, const RelativeParams& /*params*/,
                      NodeId i) {
  broadcast(world, i, [](OscillatorState& rx, std::size_t slot, std::size_t) {
    on_start_pulse(rx, slot);
  });
}

void emit_end_pulse(WorldState& world, const RelativeParams& params, NodeId i) {
  auto& osc = world.oscillators[i];
  osc.gamma = true;
  osc.phase = 0.0;
  // the wrap to 0 is not a jump; keep open stamp pairs on one unwrapped scale
  for (auto& stamps : osc.stamps) {
    if (stamps.start && !stamps.end) *stamps.start -= 1.0;
  }
  broadcast(world, i, [&](OscillatorState& rx, std::size_t slot, std::size_t d) {
    on_end_pulse(rx, slot, d, params);
  });
}

UpdateRecord on_update_relative(WorldState& world, const RelativeParams& params,
                                NodeId i) {
  auto& osc = world.oscillators[i];
  const auto in = world.graph.in_neighbors(i);
  UpdateRecord rec;
  rec.node = i;
  rec.count = osc.counter;
  rec.in_degree = in.size();
  rec.phase_before = rec.phase_after = osc.phase;
  rec.omega_before = rec.omega_after = osc.omega;

  if (rec.count > rec.in_degree) {
    osc.detected = true;
    rec.outcome = UpdateOutcome::Detected;
  } else if (osc.detected) {
    rec.outcome = UpdateOutcome::Frozen;
  } else {
    rec.trim = local_trim(params.f, rec.in_degree, rec.count, i);
    osc.phase += (osc.zbar.value_or(0.0) + osc.zunder.value_or(0.0)) / 2.0;

    std::vector<double> etas;
    for (std::size_t slot = 0; slot < in.size(); ++slot) {
      const auto& stamps = osc.stamps[slot];
      if (!stamps.start && !stamps.end) continue;
      const auto eta = compute_eta(stamps, params.zeta);
      rec.estimates.push_back({in[slot], eta.value_or(0.0), eta.has_value()});
      if (eta) etas.push_back(*eta);
    }
    if (etas.size() < 2 * rec.trim) {
      throw ProtocolFault("node " + std::to_string(i) + " has " +
                          std::to_string(etas.size()) +
                          " valid relative-frequency estimates, too few to trim " +
                          std::to_string(rec.trim) + " from each side");
    }
    const auto kept = msr_trim(etas, rec.trim);
    const double eta_i = convex_update(params.weights, 1.0, kept);
    osc.omega *= eta_i;
    rec.phase_after = osc.phase;
    rec.omega_after = osc.omega;
  }
  detail::reset_round(osc);
  return rec;
}

RelativeProtocol::RelativeProtocol(RelativeParams params) : params_(params) {
  check_params(params_);
}

void RelativeProtocol::fire(WorldState& world, NodeId i) const {
  emit_end_pulse(world, params_, i);
}

void RelativeProtocol::start_pulse(WorldState& world, NodeId i) const {
  emit_start_pulse(world, params_, i);
}

UpdateRecord RelativeProtocol::update(WorldState& world, NodeId i) const {
  return on_update_relative(world, params_, i);
}

void RelativeProtocol::adversary_pulse(WorldState& world, NodeId attacker,
                                       double /*claim*/) const {
  broadcast(world, attacker, [&](OscillatorState& rx, std::size_t slot, std::size_t d) {
    on_end_pulse(rx, slot, d, params_);
  });
}

void RelativeProtocol::adversary_start_pulse(WorldState& world,
                                             NodeId attacker) const {
  broadcast(world, attacker, [](OscillatorState& rx, std::size_t slot, std::size_t) {
    on_start_pulse(rx, slot);
  });
}

}  // namespace pco
