#include "pco/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pco/phase.hpp"

namespace pco {

double delta_arc(const WorldState& world) {
  if (world.normal_ids.empty()) {
    throw std::invalid_argument("delta_arc needs at least one normal node");
  }
  const auto phases = normal_phases(world);
  return containing_arc(phases).length;
}

SpreadWindow::SpreadWindow(std::size_t window_len) : len_(window_len) {
  if (len_ == 0) throw std::invalid_argument("window length must be >= 1");
}

WindowSample SpreadWindow::push(double min_value, double max_value) {
  if (ring_.empty()) {
    ring_.assign(len_, {min_value, max_value});
  } else {
    ring_.pop_front();
    ring_.emplace_back(min_value, max_value);
  }
  WindowSample out{ring_.front().first, ring_.front().second};
  for (const auto& [lo, hi] : ring_) {
    out.min = std::min(out.min, lo);
    out.max = std::max(out.max, hi);
  }
  return out;
}

WindowSample push_spread(SpreadWindow& window, const WorldState& world) {
  const auto omegas = normal_omegas(world);
  if (omegas.empty()) throw std::invalid_argument("no normal nodes");
  const auto [lo, hi] = std::minmax_element(omegas.begin(), omegas.end());
  return window.push(*lo, *hi);
}

RelativePhases virtual_step(VirtualNode& vnode, double dt, const WorldState& world,
                            double m_omega) {
  vnode.phase += vnode.omega * dt;
  vnode.phase -= std::floor(vnode.phase);
  vnode.omega = m_omega;

  RelativePhases out;
  out.r.reserve(world.normal_ids.size());
  std::vector<double> all;
  all.reserve(world.normal_ids.size() + 1);
  for (NodeId i : world.normal_ids) {
    double phase = world.oscillators[i].phase;
    if (phase >= 1.0) phase -= 1.0;  // a node sitting on its firing threshold
    double r = dist(phase, vnode.phase);
    if (r > 1.0 - 1e-9) r = 0.0;
    out.r.push_back(r);
    all.push_back(phase);
  }
  all.push_back(vnode.phase);
  const auto [lo, hi] = std::minmax_element(out.r.begin(), out.r.end());
  out.r_min = *lo;
  out.r_max = *hi;
  out.virtual_arc = containing_arc(all).length;
  return out;
}

namespace {

// log(c) - e*log(alpha), i.e. log of c / alpha^e.
double log_coefficient(double c, double exponent, double alpha) {
  return std::log(c) - exponent * std::log(alpha);
}

}  // namespace

BoundCheck check_initial_bound(const BoundInputs& in, BoundVariant variant) {
  if (!(in.alpha > 0.0 && in.alpha < 1.0)) {
    throw std::invalid_argument("weight lower bound alpha must lie in (0, 1)");
  }
  if (in.node_count == 0 || in.normal_count == 0) {
    throw std::invalid_argument("bound needs N >= 1 and R >= 1");
  }
  const double n = static_cast<double>(in.node_count);
  const double r = static_cast<double>(in.normal_count);
  const double kbar =
      static_cast<double>(in.kbar == 0 ? 2 * in.node_count : in.kbar);

  double log_coef = 0.0;
  BoundCheck out;
  switch (variant) {
    case BoundVariant::Strict:
      log_coef = log_coefficient(4.0 * n * r, 2.0 * n * r, in.alpha);
      out.rhs = 0.5;
      break;
    case BoundVariant::Relaxed:
      log_coef = log_coefficient(2.0 * kbar * r, kbar * r, in.alpha);
      out.rhs = 0.5;
      break;
    case BoundVariant::Relative:
      if (!(in.zeta > 0.0 && in.zeta < 0.5)) {
        throw std::invalid_argument("zeta must lie in (0, 0.5)");
      }
      log_coef = log_coefficient(2.0 * kbar * r, kbar * r, in.alpha);
      out.rhs = 0.5 - in.zeta;
      break;
  }
  const double term =
      in.spread0 > 0.0 ? std::exp(log_coef + std::log(in.spread0)) : 0.0;
  out.lhs = in.arc0 + term;
  out.satisfied = out.lhs < out.rhs;
  return out;
}

double decay_envelope(double delta0, double alpha, std::size_t kbar, std::size_t R,
                      std::uint64_t k) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1]");
  }
  if (delta0 == 0.0) return 0.0;
  const double block = static_cast<double>(kbar) * static_cast<double>(R);
  const double steps = std::floor(static_cast<double>(k) / block);
  const double ratio = 1.0 - std::pow(alpha, block) / 2.0;
  return std::pow(ratio, steps) * delta0;
}

std::string_view to_string(Check check) noexcept {
  switch (check) {
    case Check::OmegaRange: return "omega_range";
    case Check::ArcSafety: return "arc_safety";
    case Check::HullMin: return "hull_min";
    case Check::HullMax: return "hull_max";
    case Check::Envelope: return "envelope";
    case Check::Tail: return "tail";
    case Check::ArcWithinV: return "arc_within_V";
    case Check::Count: break;
  }
  return "unknown";
}

RunMonitor::RunMonitor(const WorldState& initial, MonitorConfig config)
    : config_(config),
      kbar_(config.kbar == 0 ? 2 * initial.size() : config.kbar),
      normal_count_(initial.normal_ids.size()),
      omega_window_(kbar_),
      r_window_(kbar_),
      last_update_k_(initial.size(), 0),
      max_gap_(initial.size(), 0),
      updated_(initial.size(), false) {
  const auto omegas = normal_omegas(initial);
  if (omegas.empty()) throw std::invalid_argument("no normal nodes");
  const auto [lo, hi] = std::minmax_element(omegas.begin(), omegas.end());
  omega_lo_ = *lo;
  omega_hi_ = *hi;
  vnode_.phase = containing_arc(normal_phases(initial)).tail;
  vnode_.omega = omega_lo_;
  initial_ = observe(initial, 0.0, 0);
}

void RunMonitor::record(Check c, std::uint64_t k, double excess) {
  auto& s = stats_[static_cast<std::size_t>(c)];
  if (s.violations == 0) s.first_k = k;
  ++s.violations;
  s.worst = std::max(s.worst, excess);
}

EventMetrics RunMonitor::observe(const WorldState& world, double dt,
                                 std::uint64_t k) {
  const double tol = config_.tolerance;
  EventMetrics m;
  m.arc = delta_arc(world);
  const auto omegas = normal_omegas(world);
  const auto [lo, hi] = std::minmax_element(omegas.begin(), omegas.end());
  m.spread_now = *hi - *lo;
  const auto window = omega_window_.push(*lo, *hi);
  m.m_omega = window.min;
  m.M_omega = window.max;
  m.spread_windowed = window.spread();

  const auto rel = virtual_step(vnode_, dt, world, m.m_omega);
  m.V = r_window_.push(rel.r_min, rel.r_max).spread();

  const double spread0 = k == 0 ? m.spread_windowed : initial_.spread_windowed;
  m.envelope = decay_envelope(spread0, config_.alpha, kbar_, normal_count_, k);

  if (*lo < omega_lo_ - tol) record(Check::OmegaRange, k, omega_lo_ - *lo);
  if (*hi > omega_hi_ + tol) record(Check::OmegaRange, k, *hi - omega_hi_);
  if (!(m.arc < config_.arc_limit)) {
    record(Check::ArcSafety, k, m.arc - config_.arc_limit);
  }
  if (k > 0) {
    if (m.m_omega < last_.m_omega - tol) {
      record(Check::HullMin, k, last_.m_omega - m.m_omega);
    }
    if (m.M_omega > last_.M_omega + tol) {
      record(Check::HullMax, k, m.M_omega - last_.M_omega);
    }
  }
  if (m.spread_windowed > m.envelope + tol) {
    record(Check::Envelope, k, m.spread_windowed - m.envelope);
  }
  if (std::abs(rel.virtual_arc - rel.r_max) > tol) {
    record(Check::Tail, k, std::abs(rel.virtual_arc - rel.r_max));
  }
  if (m.arc > m.V + tol) record(Check::ArcWithinV, k, m.arc - m.V);

  if (m.arc < config_.phase_tolerance && m.spread_now < config_.frequency_tolerance) {
    ++streak_;
  } else {
    streak_ = 0;
  }
  last_ = m;
  return m;
}

void RunMonitor::note_update(NodeId node, std::uint64_t k) {
  if (updated_[node]) max_gap_[node] = std::max(max_gap_[node], k - last_update_k_[node]);
  updated_[node] = true;
  last_update_k_[node] = k;
}

std::uint64_t RunMonitor::measured_kbar() const {
  return *std::max_element(max_gap_.begin(), max_gap_.end());
}

std::uint64_t RunMonitor::total_violations() const {
  std::uint64_t total = 0;
  for (const auto& s : stats_) total += s.violations;
  return total;
}

}  // namespace pco
