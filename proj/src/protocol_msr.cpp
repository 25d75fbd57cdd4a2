#include "pco/protocol_msr.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace pco {

WeightPolicy WeightPolicy::configured(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1]");
  }
  return {Kind::ConfiguredAlpha, alpha};
}

std::vector<double> make_weights(const WeightPolicy& policy, std::size_t j_count) {
  const double n = static_cast<double>(j_count + 1);
  if (policy.kind == WeightPolicy::Kind::Equal) {
    return std::vector<double>(j_count + 1, 1.0 / n);
  }
  if (policy.alpha * n > 1.0 + 1e-12) {
    throw std::invalid_argument("alpha too large for " + std::to_string(j_count) +
                                " kept values");
  }
  std::vector<double> w(j_count + 1, policy.alpha);
  w[0] = 1.0 - policy.alpha * static_cast<double>(j_count);
  return w;
}

double effective_alpha(const WeightPolicy& policy, std::size_t max_in_degree) {
  if (policy.kind == WeightPolicy::Kind::Equal) {
    return 1.0 / static_cast<double>(max_in_degree + 1);
  }
  return policy.alpha;
}

double convex_update(const WeightPolicy& policy, double self,
                     std::span<const double> kept) {
  if (policy.kind == WeightPolicy::Kind::Equal) {
    const double sum = std::accumulate(kept.begin(), kept.end(), self);
    return sum / static_cast<double>(kept.size() + 1);
  }
  const auto w = make_weights(policy, kept.size());
  double out = w[0] * self;
  for (std::size_t j = 0; j < kept.size(); ++j) out += w[j + 1] * kept[j];
  return out;
}

std::vector<double> msr_trim(std::span<const double> values, std::size_t trim) {
  if (values.size() < 2 * trim) {
    throw ProtocolFault("cannot trim " + std::to_string(trim) +
                        " values from each side of " +
                        std::to_string(values.size()));
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return {sorted.begin() + static_cast<std::ptrdiff_t>(trim),
          sorted.end() - static_cast<std::ptrdiff_t>(trim)};
}

std::size_t local_trim(std::size_t f, std::size_t in_degree, std::size_t count,
                       NodeId node) {
  const auto fi = static_cast<long long>(f) -
                  (static_cast<long long>(in_degree) - static_cast<long long>(count));
  if (fi < 0) {
    throw ProtocolFault("node " + std::to_string(node) + " counted " +
                        std::to_string(count) + " pulses with in-degree " +
                        std::to_string(in_degree) +
                        ": fewer than d_i - f, so some normal in-neighbor "
                        "did not fire this round");
  }
  return static_cast<std::size_t>(fi);
}

void count_pulse(OscillatorState& state, std::size_t in_degree, std::size_t f,
                 bool eager_detection) {
  ++state.counter;
  const double phase = state.phase;
  if (state.counter == f + 1) {
    state.zbar = (phase >= 0.5 && phase < 1.0) ? 1.0 - phase : 0.0;
  }
  if (in_degree >= f && state.counter == in_degree - f) {
    state.zunder = (phase >= 0.0 && phase < 0.5) ? -phase : 0.0;
  }
  if (eager_detection && state.counter > in_degree) state.detected = true;
}

void on_pulse(OscillatorState& state, std::size_t in_degree, const MsrParams& params,
              double freq_value) {
  state.freq_buffer.push_back(freq_value);
  count_pulse(state, in_degree, params.f, params.eager_detection);
}

namespace {

void deliver(WorldState& world, const MsrParams& params, NodeId sender,
             double value) {
  for (NodeId r : world.graph.out_neighbors(sender)) {
    if (!world.is_normal(r)) continue;
    on_pulse(world.oscillators[r], world.graph.in_neighbors(r).size(), params, value);
  }
}

}  // namespace

void on_fire(WorldState& world, const MsrParams& params, NodeId i) {
  auto& osc = world.oscillators[i];
  osc.gamma = true;
  osc.phase = 0.0;
  deliver(world, params, i, osc.omega);
}

namespace detail {

void reset_round(OscillatorState& state) {
  state.gamma = false;
  state.counter = 0;
  state.freq_buffer.clear();
  state.zbar.reset();
  state.zunder.reset();
  for (auto& s : state.stamps) s = EdgeStamps{};
}

}  // namespace detail

UpdateRecord on_update(WorldState& world, const MsrParams& params, NodeId i) {
  auto& osc = world.oscillators[i];
  UpdateRecord rec;
  rec.node = i;
  rec.count = osc.counter;
  rec.in_degree = world.graph.in_neighbors(i).size();
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
    const auto kept = msr_trim(osc.freq_buffer, rec.trim);
    osc.omega = convex_update(params.weights, osc.omega, kept);
    rec.phase_after = osc.phase;
    rec.omega_after = osc.omega;
  }
  detail::reset_round(osc);
  return rec;
}

void MsrProtocol::fire(WorldState& world, NodeId i) const {
  on_fire(world, params_, i);
}

UpdateRecord MsrProtocol::update(WorldState& world, NodeId i) const {
  return on_update(world, params_, i);
}

void MsrProtocol::adversary_pulse(WorldState& world, NodeId attacker,
                                  double claim) const {
  deliver(world, params_, attacker, claim);
}

}  // namespace pco
