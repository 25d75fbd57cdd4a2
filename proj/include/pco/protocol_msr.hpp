#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "pco/engine.hpp"

namespace pco {

/// A protocol precondition failed: the scenario violates the standing
/// assumptions (e.g. a normal in-neighbor never fired within a round).
class ProtocolFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// How update weights are chosen. Equal weights give every kept value and
/// the node itself 1/(j+1); a configured alpha gives each kept value alpha and
/// the remainder to the node itself.
struct WeightPolicy {
  enum class Kind { Equal, ConfiguredAlpha };
  Kind kind = Kind::Equal;
  double alpha = 0.0;

  static WeightPolicy equal() { return {}; }
  static WeightPolicy configured(double alpha);
};

/// Weights (a_ii, a_i1, ..., a_ij) for `j_count` kept values.
std::vector<double> make_weights(const WeightPolicy& policy, std::size_t j_count);

/// Guaranteed lower bound on every weight for nodes of in-degree at most
/// `max_in_degree`.
double effective_alpha(const WeightPolicy& policy, std::size_t max_in_degree);

/// a_ii * self + sum a_ij * kept[j]. Equal weights are evaluated as a plain
/// mean so that identical inputs reproduce themselves exactly.
double convex_update(const WeightPolicy& policy, double self,
                     std::span<const double> kept);

struct MsrParams {
  std::size_t f = 1;
  WeightPolicy weights;
  bool eager_detection = false;  // latch as soon as c_i exceeds d_i
};

/// Sorted copy with the `trim` largest and `trim` smallest values removed.
std::vector<double> msr_trim(std::span<const double> values, std::size_t trim);

/// f_i = f - (d_i - c_i); throws ProtocolFault when negative.
std::size_t local_trim(std::size_t f, std::size_t in_degree, std::size_t count,
                       NodeId node);

/// Increments c_i and captures zbar / zunder when the counter lands on f+1 or
/// d_i-f. Both may be captured by the same pulse.
void count_pulse(OscillatorState& state, std::size_t in_degree, std::size_t f,
                 bool eager_detection);

/// Absolute-frequency protocol handlers.
void on_pulse(OscillatorState& state, std::size_t in_degree, const MsrParams& params,
              double freq_value);
void on_fire(WorldState& world, const MsrParams& params, NodeId i);
UpdateRecord on_update(WorldState& world, const MsrParams& params, NodeId i);

class MsrProtocol final : public Protocol {
 public:
  explicit MsrProtocol(MsrParams params) : params_(params) {}

  void fire(WorldState& world, NodeId i) const override;
  UpdateRecord update(WorldState& world, NodeId i) const override;
  void adversary_pulse(WorldState& world, NodeId attacker,
                       double claim) const override;

  [[nodiscard]] const MsrParams& params() const noexcept { return params_; }

 private:
  MsrParams params_;
};

namespace detail {
/// Step 5 of both protocols.
void reset_round(OscillatorState& state);
}  // namespace detail

}  // namespace pco
