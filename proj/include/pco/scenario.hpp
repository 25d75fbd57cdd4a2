#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pco/adversary.hpp"
#include "pco/engine.hpp"
#include "pco/graph.hpp"
#include "pco/protocol_msr.hpp"

namespace pco {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Algorithm { Absolute, Relative };

std::string_view to_string(Algorithm a) noexcept;
Algorithm parse_algorithm(std::string_view name);

/// Either one explicit value per node or uniform draws from [lo, hi).
struct InitialValues {
  std::vector<double> values;
  double lo = 0.0;
  double hi = 0.0;
  std::optional<std::uint64_t> seed;  // defaults to a stream of the scenario seed

  [[nodiscard]] bool is_random() const noexcept { return values.empty(); }
  static InitialValues explicit_values(std::vector<double> v);
  static InitialValues random(double lo, double hi,
                              std::optional<std::uint64_t> seed = std::nullopt);
};

struct AttackerSpec {
  NodeId node = 0;
  AttackKind kind = AttackKind::Silent;
  std::string claim = "true_omega";
  // stealthy
  double period = 2.0;
  std::vector<double> offsets{0.0};
  // flooding
  double start = 0.0;
  std::size_t burst_count = 0;
  double burst_interval = 0.01;
  // custom: (time, claimed frequency) pairs
  std::vector<std::pair<double, double>> pulses;
  std::vector<double> start_pulses;
  /// Relative protocol: precede every pulse with a forged start pulse
  /// (ignored for custom scripts that list start pulses explicitly).
  bool forge_start_pulses = true;
};

struct ScenarioConfig {
  DirectedGraph graph = demo_graph();
  std::string graph_source = "demo8";
  Algorithm algorithm = Algorithm::Absolute;
  std::size_t f = 1;
  double zeta = 0.1;
  InitialValues phases = InitialValues::random(0.0, 0.5);
  InitialValues frequencies = InitialValues::random(1.0, 2.0);
  bool normalize_phases = true;  // shift normal phases so the minimum is 0
  std::vector<AttackerSpec> attackers;
  WeightPolicy weights;
  double horizon = 200.0;
  double phase_tolerance = 1e-6;
  double frequency_tolerance = 1e-6;
  std::optional<std::string> trace_path;
  std::uint64_t seed = 1;
  bool halt_on_detection = true;
  bool halt_on_convergence = true;
  bool eager_detection = false;
  std::size_t kbar = 0;  // 0 selects 2N
  std::size_t robustness_guard = kDefaultRobustnessGuard;

  [[nodiscard]] std::vector<NodeId> faulty_nodes() const;
};

/// Parses the JSON scenario schema (see docs/scenario.md). Relative graph and
/// trace paths resolve against `base_dir`.
ScenarioConfig parse_scenario(std::string_view json_text,
                              const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Initial world and attack scripts with every random draw resolved.
struct Materialized {
  WorldState world;
  std::vector<AttackScript> scripts;
};

Materialized materialize(const ScenarioConfig& config);

struct Finding {
  enum class Severity { Error, Info };
  Severity severity = Severity::Info;
  std::string message;
};

/// Reports (never fixes) violations of the standing assumptions; bound
/// evaluations are informational.
std::vector<Finding> validate(const ScenarioConfig& config);

[[nodiscard]] bool has_errors(const std::vector<Finding>& findings);

std::unique_ptr<Protocol> make_protocol(const ScenarioConfig& config);

}  // namespace pco
