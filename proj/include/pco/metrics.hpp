#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <string_view>
#include <vector>

#include "pco/world.hpp"

namespace pco {

/// Length of the shortest arc containing every normal phase.
double delta_arc(const WorldState& world);

struct WindowSample {
  double min = 0.0;  // windowed minimum of the pushed minima
  double max = 0.0;  // windowed maximum of the pushed maxima
  [[nodiscard]] double spread() const noexcept { return max - min; }
};

/// Sliding extrema over the last `window_len` events. Before `window_len`
/// events have been pushed the window is padded with the first sample.
class SpreadWindow {
 public:
  explicit SpreadWindow(std::size_t window_len);

  WindowSample push(double min_value, double max_value);
  [[nodiscard]] std::size_t window_len() const noexcept { return len_; }

 private:
  std::size_t len_;
  std::deque<std::pair<double, double>> ring_;
};

/// Pushes the current normal-frequency extrema; returns (m_omega, M_omega)
/// whose spread is delta(k).
WindowSample push_spread(SpreadWindow& window, const WorldState& world);

/// Analysis-only oscillator that runs at the windowed minimum frequency and
/// never jumps.
struct VirtualNode {
  double phase = 0.0;
  double omega = 1.0;
};

struct RelativePhases {
  std::vector<double> r;      // clockwise distance from the virtual node
  double r_min = 0.0;
  double r_max = 0.0;
  double virtual_arc = 0.0;   // shortest arc over normals and the virtual node
};

/// Advances the virtual node by omega*dt (wrapping), refreshes its frequency
/// to `m_omega` and returns r_i = dist(phi_i, phi_s) for every normal node.
/// Distances within 1e-9 of a full turn count as zero.
RelativePhases virtual_step(VirtualNode& vnode, double dt, const WorldState& world,
                            double m_omega);

enum class BoundVariant { Strict, Relaxed, Relative };

struct BoundInputs {
  std::size_t node_count = 0;    // N
  std::size_t normal_count = 0;  // R
  double alpha = 0.0;
  double arc0 = 0.0;             // Delta(0)
  double spread0 = 0.0;          // delta(0)
  double zeta = 0.0;
  std::size_t kbar = 0;          // 0 selects the universal bound 2N
};

struct BoundCheck {
  bool satisfied = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Sufficient initial conditions for safety:
///   Strict:   Delta(0) + 4NR / alpha^(2NR) * delta(0) < 0.5
///   Relaxed:  Delta(0) + 2kR / alpha^(kR)  * delta(0) < 0.5
///   Relative: Delta(0) + 2kR / alpha^(kR)  * delta(0) < 0.5 - zeta
/// with k = kbar. The coefficient is evaluated in log space and may be +inf.
BoundCheck check_initial_bound(const BoundInputs& in, BoundVariant variant);

/// Upper envelope (1 - alpha^(kbar R) / 2)^floor(k / (kbar R)) * delta0.
double decay_envelope(double delta0, double alpha, std::size_t kbar, std::size_t R,
                      std::uint64_t k);

enum class Check : std::size_t {
  OmegaRange,   // omega_i within the initial frequency hull
  ArcSafety,    // Delta(t) below the safety limit
  HullMin,      // m_omega nondecreasing
  HullMax,      // M_omega nonincreasing
  Envelope,     // delta(k) under decay_envelope
  Tail,         // virtual node is the tail of the virtual containing arc
  ArcWithinV,   // Delta(k) <= V(k)
  Count
};

std::string_view to_string(Check check) noexcept;

struct CheckStat {
  std::uint64_t violations = 0;
  std::uint64_t first_k = 0;
  double worst = 0.0;  // largest excess over the allowed value
};

struct MonitorConfig {
  std::size_t kbar = 0;         // 0 selects 2N
  double alpha = 1.0;
  double arc_limit = 0.5;
  double tolerance = 1e-9;
  double phase_tolerance = 1e-6;
  double frequency_tolerance = 1e-6;
};

struct EventMetrics {
  double arc = 0.0;             // Delta(k)
  double m_omega = 0.0;
  double M_omega = 0.0;
  double spread_windowed = 0.0; // delta(k)
  double spread_now = 0.0;      // max - min normal frequency at k
  double V = 0.0;
  double envelope = 0.0;
};

/// Per-event bookkeeping of every quantity the convergence analysis
/// constrains. Violations are counted, never thrown.
class RunMonitor {
 public:
  RunMonitor(const WorldState& initial, MonitorConfig config);

  EventMetrics observe(const WorldState& world, double dt, std::uint64_t k);
  void note_update(NodeId node, std::uint64_t k);

  [[nodiscard]] const EventMetrics& initial() const noexcept { return initial_; }
  [[nodiscard]] const CheckStat& stat(Check c) const {
    return stats_[static_cast<std::size_t>(c)];
  }
  [[nodiscard]] std::uint64_t total_violations() const;
  [[nodiscard]] std::size_t kbar() const noexcept { return kbar_; }
  /// Largest number of events between two consecutive updates of any node.
  /// The stretch before a node's first update is not counted.
  [[nodiscard]] std::uint64_t measured_kbar() const;
  /// Events since both Delta and the instantaneous frequency spread fell
  /// below tolerance.
  [[nodiscard]] std::uint64_t converged_streak() const noexcept { return streak_; }
  [[nodiscard]] bool converged() const noexcept { return streak_ >= kbar_; }

 private:
  void record(Check c, std::uint64_t k, double excess);

  MonitorConfig config_;
  std::size_t kbar_;
  std::size_t normal_count_;
  double omega_lo_ = 0.0;
  double omega_hi_ = 0.0;
  SpreadWindow omega_window_;
  SpreadWindow r_window_;
  VirtualNode vnode_;
  EventMetrics initial_;
  EventMetrics last_;
  std::array<CheckStat, static_cast<std::size_t>(Check::Count)> stats_{};
  std::vector<std::uint64_t> last_update_k_;
  std::vector<std::uint64_t> max_gap_;
  std::vector<bool> updated_;
  std::uint64_t streak_ = 0;
};

}  // namespace pco
