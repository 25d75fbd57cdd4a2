#pragma once

#include <span>

namespace pco {

// Phases are doubles in [0, 1), measured in oscillation periods. Increasing
// phase is the clockwise direction.

/// Clockwise distance from b to a.
double dist(double a, double b) noexcept;

struct Arc {
  double length = 0.0;
  double tail = 0.0;  // clockwise start
  double head = 0.0;  // clockwise end
};

/// Shortest circular arc covering every phase: one minus the largest circular
/// gap between sorted phases. Ties between equal gaps go to the arc with the
/// smallest tail phase. Throws std::invalid_argument on empty input.
Arc containing_arc(std::span<const double> phases);

/// Time for a free-running oscillator at `phase` with frequency `omega` to
/// reach `target`. A target of 1.0 is the firing threshold; any other target
/// not strictly ahead is reached on the next cycle.
double time_to_phase(double phase, double omega, double target);

}  // namespace pco
