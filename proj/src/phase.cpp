#include "pco/phase.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace pco {

double dist(double a, double b) noexcept {
  return a >= b ? a - b : 1.0 - b + a;
}

Arc containing_arc(std::span<const double> phases) {
  if (phases.empty()) {
    throw std::invalid_argument("containing_arc of an empty phase set");
  }
  std::vector<double> sorted(phases.begin(), phases.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();

  // Gap k runs clockwise from sorted[k] to sorted[k+1] (wrapping at n-1);
  // removing it leaves an arc whose tail is sorted[k+1].
  double best_gap = -1.0;
  std::size_t best = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double gap = (k + 1 < n) ? sorted[k + 1] - sorted[k]
                                   : 1.0 - (sorted[k] - sorted[0]);
    const std::size_t tail = (k + 1) % n;
    if (gap > best_gap ||
        (gap == best_gap && sorted[tail] < sorted[(best + 1) % n])) {
      best_gap = gap;
      best = k;
    }
  }
  Arc arc;
  arc.tail = sorted[(best + 1) % n];
  arc.head = sorted[best];
  // The wrap-around gap leaves the arc from the smallest to the largest phase;
  // computing it directly keeps equal phases at exactly zero length.
  arc.length = (best == n - 1) ? sorted[n - 1] - sorted[0]
                               : std::max(0.0, 1.0 - best_gap);
  return arc;
}

double time_to_phase(double phase, double omega, double target) {
  if (!(omega > 0.0)) {
    throw std::invalid_argument("time_to_phase requires omega > 0");
  }
  if (target >= 1.0 || target > phase) return (target - phase) / omega;
  return (1.0 - phase + target) / omega;
}

}  // namespace pco
