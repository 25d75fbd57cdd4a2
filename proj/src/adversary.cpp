#include "pco/adversary.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace pco {

std::string_view to_string(AttackKind kind) noexcept {
  switch (kind) {
    case AttackKind::Stealthy: return "stealthy";
    case AttackKind::Flooding: return "flooding";
    case AttackKind::Silent: return "silent";
    case AttackKind::Custom: return "custom";
  }
  return "unknown";
}

FrequencyClaim FrequencyClaim::constant(double value) {
  if (!(value > 0.0)) {
    throw std::invalid_argument("claimed frequency must be positive");
  }
  return FrequencyClaim(Kind::Constant, value);
}

FrequencyClaim FrequencyClaim::parse(std::string_view name) {
  if (name == "one_plus_abs_sin") return one_plus_abs_sin();
  if (name == "sawtooth") return sawtooth();
  if (name == "true_omega") return true_omega();
  constexpr std::string_view prefix = "constant:";
  if (name.starts_with(prefix)) {
    const auto body = name.substr(prefix.size());
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (ec == std::errc{} && ptr == body.data() + body.size()) {
      return constant(value);
    }
  }
  throw std::invalid_argument("unknown claim function '" + std::string(name) + "'");
}

double FrequencyClaim::operator()(double t, double true_omega) const {
  switch (kind_) {
    case Kind::TrueOmega: return true_omega;
    case Kind::AbsSin: return 1.0 + std::abs(std::sin(t));
    case Kind::Sawtooth: return 1.0 + t - std::floor(t);
    case Kind::Constant: return value_;
  }
  return true_omega;
}

std::string FrequencyClaim::name() const {
  switch (kind_) {
    case Kind::TrueOmega: return "true_omega";
    case Kind::AbsSin: return "one_plus_abs_sin";
    case Kind::Sawtooth: return "sawtooth";
    case Kind::Constant: {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof buf, value_);
      return "constant:" + std::string(buf, res.ptr);
    }
  }
  return "true_omega";
}

double AttackScript::claim_at(std::size_t pulse_index, double true_omega) const {
  if (!explicit_claims.empty()) return explicit_claims.at(pulse_index);
  return claim(pulse_times.at(pulse_index), true_omega);
}

double AttackScript::first_time() const {
  double t = pulse_times.empty() ? INFINITY : pulse_times.front();
  if (!start_pulse_times.empty()) t = std::min(t, start_pulse_times.front());
  return t;
}

namespace {

void check_increasing(const std::vector<double>& times, const char* what) {
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] >= 0.0) || !std::isfinite(times[k])) {
      throw std::invalid_argument(std::string(what) + " must be finite and nonnegative");
    }
    if (k > 0 && !(times[k] > times[k - 1])) {
      throw std::invalid_argument(std::string(what) + " must be strictly increasing");
    }
  }
}

}  // namespace

void check_script(const AttackScript& script) {
  check_increasing(script.pulse_times, "pulse times");
  check_increasing(script.start_pulse_times, "start pulse times");
  if (!script.explicit_claims.empty() &&
      script.explicit_claims.size() != script.pulse_times.size()) {
    throw std::invalid_argument("one explicit claim per pulse is required");
  }
}

AttackScript stealthy_script(NodeId node, double period,
                             std::vector<double> offsets, FrequencyClaim claim,
                             double horizon) {
  if (!(period > 0.0)) throw std::invalid_argument("period must be positive");
  if (offsets.empty()) offsets.push_back(0.0);
  AttackScript script;
  script.node = node;
  script.kind = AttackKind::Stealthy;
  script.claim = claim;
  for (std::size_t n = 0;; ++n) {
    const double t =
        (static_cast<double>(n) + offsets[n % offsets.size()]) * period;
    if (t > horizon) break;
    if (t < 0.0) continue;
    if (!script.pulse_times.empty() && t <= script.pulse_times.back()) continue;
    script.pulse_times.push_back(t);
  }
  return script;
}

AttackScript flooding_script(NodeId node, double start, std::size_t burst_count,
                             double burst_interval, FrequencyClaim claim) {
  if (burst_count == 0) throw std::invalid_argument("burst_count must be >= 1");
  if (!(burst_interval > 0.0)) {
    throw std::invalid_argument("burst_interval must be positive");
  }
  AttackScript script;
  script.node = node;
  script.kind = AttackKind::Flooding;
  script.claim = claim;
  for (std::size_t k = 0; k < burst_count; ++k) {
    script.pulse_times.push_back(start + static_cast<double>(k) * burst_interval);
  }
  check_script(script);
  return script;
}

AttackScript silent_script(NodeId node) {
  AttackScript script;
  script.node = node;
  script.kind = AttackKind::Silent;
  return script;
}

AttackScript custom_script(NodeId node,
                           const std::vector<std::pair<double, double>>& pulses,
                           std::vector<double> start_pulse_times) {
  AttackScript script;
  script.node = node;
  script.kind = AttackKind::Custom;
  for (const auto& [t, claim] : pulses) {
    if (!(claim > 0.0)) throw std::invalid_argument("claimed frequency must be positive");
    script.pulse_times.push_back(t);
    script.explicit_claims.push_back(claim);
  }
  script.start_pulse_times = std::move(start_pulse_times);
  check_script(script);
  return script;
}

void add_start_pulses(AttackScript& script, double zeta, double true_omega) {
  script.start_pulse_times.clear();
  double previous = -1.0;
  for (std::size_t k = 0; k < script.pulse_times.size(); ++k) {
    const double end = script.pulse_times[k];
    const double start = end - zeta / script.claim_at(k, true_omega);
    if (start >= 0.0 && start > previous) script.start_pulse_times.push_back(start);
    previous = end;
  }
}

bool is_stealthy(const AttackScript& script, const WorldState& world,
                 double horizon) {
  const auto omegas = normal_omegas(world);
  if (omegas.empty()) return true;
  const double omega_min = *std::min_element(omegas.begin(), omegas.end());

  double window = 0.0;
  bool has_receiver = false;
  for (NodeId i : world.graph.out_neighbors(script.node)) {
    if (!world.is_normal(i)) continue;
    has_receiver = true;
    const double phase = world.oscillators[i].phase;
    window = std::max(window, std::max(1.5 - phase, 1.25) / omega_min);
  }
  if (!has_receiver) return true;

  const double from = world.clock;
  double previous = -INFINITY;
  for (double t : script.pulse_times) {
    if (t < from) continue;
    if (t > horizon) break;
    if (t - previous < window) return false;
    previous = t;
  }
  return true;
}

}  // namespace pco
