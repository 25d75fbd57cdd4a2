#include "pco/world.hpp"

#include <algorithm>
#include <string>

namespace pco {

std::string_view to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::AdversaryStartPulse: return "AdversaryStartPulse";
    case EventKind::AdversaryPulse: return "AdversaryPulse";
    case EventKind::Fire: return "Fire";
    case EventKind::StartPulse: return "StartPulse";
    case EventKind::UpdateTrigger: return "UpdateTrigger";
  }
  return "Unknown";
}

WorldState make_world(DirectedGraph graph, std::span<const NodeId> faulty,
                      std::span<const double> phases,
                      std::span<const double> omegas, std::uint64_t seed) {
  const std::size_t n = graph.node_count();
  if (phases.size() != n || omegas.size() != n) {
    throw std::invalid_argument("expected " + std::to_string(n) +
                                " phases and frequencies");
  }
  WorldState world;
  world.faulty.assign(n, false);
  for (NodeId j : faulty) {
    if (j >= n) throw std::invalid_argument("faulty node id out of range");
    world.faulty[j] = true;
  }
  world.oscillators.resize(n);
  for (NodeId i = 0; i < n; ++i) {
    auto& osc = world.oscillators[i];
    if (!(omegas[i] > 0.0)) {
      throw std::invalid_argument("frequency of node " + std::to_string(i) +
                                  " must be positive");
    }
    osc.omega = omegas[i];
    if (world.faulty[i]) {
      world.faulty_ids.push_back(i);
      continue;
    }
    if (!(phases[i] >= 0.0 && phases[i] < 1.0)) {
      throw std::invalid_argument("phase of node " + std::to_string(i) +
                                  " outside [0, 1)");
    }
    osc.phase = phases[i];
    osc.stamps.resize(graph.in_neighbors(i).size());
    world.normal_ids.push_back(i);
  }
  world.graph = std::move(graph);
  world.rng_seed = seed;
  return world;
}

std::size_t max_faulty_in_neighbors(const WorldState& world) {
  std::size_t worst = 0;
  for (NodeId i : world.normal_ids) {
    const auto in = world.graph.in_neighbors(i);
    const auto bad = static_cast<std::size_t>(std::count_if(
        in.begin(), in.end(), [&](NodeId j) { return world.faulty[j]; }));
    worst = std::max(worst, bad);
  }
  return worst;
}

std::vector<double> normal_phases(const WorldState& world) {
  std::vector<double> out;
  out.reserve(world.normal_ids.size());
  for (NodeId i : world.normal_ids) out.push_back(world.oscillators[i].phase);
  return out;
}

std::vector<double> normal_omegas(const WorldState& world) {
  std::vector<double> out;
  out.reserve(world.normal_ids.size());
  for (NodeId i : world.normal_ids) out.push_back(world.oscillators[i].omega);
  return out;
}

void advance_all(WorldState& world, double dt) {
  if (dt < 0.0) throw EngineError("advance_all with negative dt");
  if (dt == 0.0) return;
  for (NodeId i : world.normal_ids) {
    auto& osc = world.oscillators[i];
    const double next = osc.phase + osc.omega * dt;
    if (next > 1.0 + 1e-9) {
      throw EngineError("node " + std::to_string(i) +
                        " advanced past its firing threshold");
    }
    osc.phase = std::min(next, 1.0);
  }
  world.clock += dt;
}

}  // namespace pco
