#include "pco/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pco/metrics.hpp"
#include "pco/phase.hpp"
#include "pco/protocol_relative.hpp"
#include "pco/random.hpp"

namespace pco {

using nlohmann::json;

std::string_view to_string(Algorithm a) noexcept {
  return a == Algorithm::Absolute ? "absolute" : "relative";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "absolute") return Algorithm::Absolute;
  if (name == "relative") return Algorithm::Relative;
  throw ConfigError("unknown algorithm '" + std::string(name) +
                    "' (expected absolute or relative)");
}

InitialValues InitialValues::explicit_values(std::vector<double> v) {
  InitialValues out;
  out.values = std::move(v);
  return out;
}

InitialValues InitialValues::random(double lo, double hi,
                                    std::optional<std::uint64_t> seed) {
  InitialValues out;
  out.lo = lo;
  out.hi = hi;
  out.seed = seed;
  return out;
}

std::vector<NodeId> ScenarioConfig::faulty_nodes() const {
  std::set<NodeId> ids;
  for (const auto& a : attackers) ids.insert(a.node);
  return {ids.begin(), ids.end()};
}

namespace {

DirectedGraph parse_graph_spec(const json& spec, const std::filesystem::path& base,
                               std::string& source) {
  if (spec.is_string()) {
    const auto name = spec.get<std::string>();
    source = name;
    if (name == "demo8") return demo_graph();
    const auto colon = name.find(':');
    if (colon != std::string::npos) {
      const auto kind = name.substr(0, colon);
      const auto n = static_cast<std::size_t>(std::stoul(name.substr(colon + 1)));
      if (kind == "complete") return complete_digraph(n);
      if (kind == "ring") return directed_ring(n);
    }
    throw ConfigError("unknown builtin graph '" + name + "'");
  }
  if (spec.contains("file")) {
    std::filesystem::path p = spec.at("file").get<std::string>();
    if (p.is_relative()) p = base / p;
    source = p.string();
    return load_graph_file(p);
  }
  if (spec.contains("text")) {
    source = "inline";
    return parse_graph(spec.at("text").get<std::string>());
  }
  if (spec.contains("in_neighbors")) {
    source = "inline";
    return DirectedGraph::from_in_neighbors(
        spec.at("in_neighbors").get<std::vector<std::vector<NodeId>>>());
  }
  throw ConfigError("graph must be a builtin name or {file|text|in_neighbors}");
}

InitialValues parse_initial(const json& spec) {
  if (spec.is_array()) return InitialValues::explicit_values(spec.get<std::vector<double>>());
  const json& r = spec.contains("random") ? spec.at("random") : spec;
  const auto range = r.at("range").get<std::vector<double>>();
  if (range.size() != 2 || !(range[0] <= range[1])) {
    throw ConfigError("random range must be [lo, hi] with lo <= hi");
  }
  std::optional<std::uint64_t> seed;
  if (r.contains("seed")) seed = r.at("seed").get<std::uint64_t>();
  return InitialValues::random(range[0], range[1], seed);
}

AttackKind parse_kind(const std::string& name) {
  if (name == "stealthy") return AttackKind::Stealthy;
  if (name == "flooding") return AttackKind::Flooding;
  if (name == "silent") return AttackKind::Silent;
  if (name == "custom") return AttackKind::Custom;
  throw ConfigError("unknown attacker kind '" + name + "'");
}

AttackerSpec parse_attacker(const json& a) {
  AttackerSpec spec;
  spec.node = a.at("node").get<NodeId>();
  spec.kind = parse_kind(a.value("kind", std::string("silent")));
  spec.claim = a.value("claim", spec.claim);
  FrequencyClaim::parse(spec.claim);  // reject unknown names at load time
  spec.period = a.value("period", spec.period);
  if (a.contains("offsets")) spec.offsets = a.at("offsets").get<std::vector<double>>();
  spec.start = a.value("start", spec.start);
  spec.burst_count = a.value("burst_count", spec.burst_count);
  spec.burst_interval = a.value("burst_interval", spec.burst_interval);
  if (a.contains("pulses")) {
    for (const auto& p : a.at("pulses")) {
      if (p.is_array()) {
        spec.pulses.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
      } else {
        spec.pulses.emplace_back(p.get<double>(), 0.0);
      }
    }
  }
  if (a.contains("start_pulses")) {
    spec.start_pulses = a.at("start_pulses").get<std::vector<double>>();
  }
  spec.forge_start_pulses = a.value("forge_start_pulses", spec.forge_start_pulses);
  return spec;
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view json_text,
                              const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }
  ScenarioConfig cfg;
  try {
    if (doc.contains("graph")) {
      cfg.graph = parse_graph_spec(doc.at("graph"), base_dir, cfg.graph_source);
    }
    if (doc.contains("algorithm")) {
      cfg.algorithm = parse_algorithm(doc.at("algorithm").get<std::string>());
    }
    cfg.f = doc.value("f", cfg.f);
    cfg.zeta = doc.value("zeta", cfg.zeta);
    cfg.seed = doc.value("seed", cfg.seed);
    if (doc.contains("phases")) cfg.phases = parse_initial(doc.at("phases"));
    if (doc.contains("frequencies")) cfg.frequencies = parse_initial(doc.at("frequencies"));
    cfg.normalize_phases = doc.value("normalize_phases", cfg.normalize_phases);
    if (doc.contains("attackers")) {
      for (const auto& a : doc.at("attackers")) cfg.attackers.push_back(parse_attacker(a));
    }
    if (doc.contains("weights")) {
      const auto& w = doc.at("weights");
      if (w.is_string() && w.get<std::string>() == "equal") {
        cfg.weights = WeightPolicy::equal();
      } else if (w.is_object() && w.contains("alpha")) {
        cfg.weights = WeightPolicy::configured(w.at("alpha").get<double>());
      } else {
        throw ConfigError("weights must be \"equal\" or {\"alpha\": x}");
      }
    }
    cfg.horizon = doc.value("horizon", cfg.horizon);
    if (doc.contains("tolerances")) {
      const auto& t = doc.at("tolerances");
      cfg.phase_tolerance = t.value("phase", cfg.phase_tolerance);
      cfg.frequency_tolerance = t.value("frequency", cfg.frequency_tolerance);
    }
    if (doc.contains("trace")) {
      std::filesystem::path p = doc.at("trace").get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      cfg.trace_path = p.string();
    }
    cfg.halt_on_detection = doc.value("halt_on_detection", cfg.halt_on_detection);
    cfg.halt_on_convergence = doc.value("halt_on_convergence", cfg.halt_on_convergence);
    cfg.eager_detection = doc.value("eager_detection", cfg.eager_detection);
    cfg.kbar = doc.value("kbar", cfg.kbar);
    cfg.robustness_guard = doc.value("robustness_guard", cfg.robustness_guard);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scenario: ") + e.what());
  } catch (const GraphError& e) {
    throw ConfigError(std::string("bad graph: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.parent_path());
}

namespace {

std::vector<double> resolve(const InitialValues& spec, std::size_t n,
                            std::uint64_t fallback_seed, const char* what) {
  if (!spec.is_random()) {
    if (spec.values.size() != n) {
      throw ConfigError(std::string(what) + ": expected " + std::to_string(n) +
                        " values, got " + std::to_string(spec.values.size()));
    }
    return spec.values;
  }
  Rng rng(spec.seed.value_or(fallback_seed));
  std::vector<double> out(n);
  for (auto& v : out) v = uniform(rng, spec.lo, spec.hi);
  return out;
}

}  // namespace

Materialized materialize(const ScenarioConfig& config) {
  const std::size_t n = config.graph.node_count();
  const auto faulty = config.faulty_nodes();
  for (NodeId j : faulty) {
    if (j >= n) throw ConfigError("attacker node " + std::to_string(j) + " out of range");
  }
  if (faulty.size() >= n) throw ConfigError("scenario has no normal nodes");

  auto phases = resolve(config.phases, n, derive_seed(config.seed, 1), "phases");
  const auto omegas =
      resolve(config.frequencies, n, derive_seed(config.seed, 2), "frequencies");
  if (config.normalize_phases) {
    double lo = INFINITY;
    for (NodeId i = 0; i < n; ++i) {
      if (!std::binary_search(faulty.begin(), faulty.end(), i)) lo = std::min(lo, phases[i]);
    }
    for (auto& p : phases) p -= lo;
  }
  for (NodeId j : faulty) phases[j] = 0.0;

  Materialized out;
  try {
    out.world = make_world(config.graph, faulty, phases, omegas, config.seed);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  for (const auto& spec : config.attackers) {
    const auto claim = FrequencyClaim::parse(spec.claim);
    const double nominal = omegas[spec.node];
    AttackScript script;
    try {
      switch (spec.kind) {
        case AttackKind::Stealthy:
          script = stealthy_script(spec.node, spec.period, spec.offsets, claim,
                                   config.horizon);
          break;
        case AttackKind::Flooding:
          script = flooding_script(spec.node, spec.start, spec.burst_count,
                                   spec.burst_interval, claim);
          break;
        case AttackKind::Silent:
          script = silent_script(spec.node);
          break;
        case AttackKind::Custom: {
          std::vector<std::pair<double, double>> pulses = spec.pulses;
          for (auto& [t, c] : pulses) {
            if (c <= 0.0) c = claim(t, nominal);
          }
          script = custom_script(spec.node, pulses, spec.start_pulses);
          break;
        }
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError("attacker on node " + std::to_string(spec.node) + ": " + e.what());
    }
    const bool explicit_starts = spec.kind == AttackKind::Custom && !spec.start_pulses.empty();
    if (config.algorithm == Algorithm::Relative && spec.forge_start_pulses &&
        !explicit_starts) {
      add_start_pulses(script, config.zeta, nominal);
    }
    out.scripts.push_back(std::move(script));
  }
  return out;
}

bool has_errors(const std::vector<Finding>& findings) {
  return std::any_of(findings.begin(), findings.end(), [](const Finding& f) {
    return f.severity == Finding::Severity::Error;
  });
}

namespace {

std::string fmt_double(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

}  // namespace

std::vector<Finding> validate(const ScenarioConfig& config) {
  std::vector<Finding> out;
  auto error = [&](std::string m) { out.push_back({Finding::Severity::Error, std::move(m)}); };
  auto info = [&](std::string m) { out.push_back({Finding::Severity::Info, std::move(m)}); };

  if (config.algorithm == Algorithm::Relative &&
      !(config.zeta > 0.0 && config.zeta < 0.5)) {
    error("zeta " + fmt_double(config.zeta) + " outside (0, 0.5)");
  }
  if (!(config.horizon > 0.0)) error("horizon must be positive");

  Materialized m;
  try {
    m = materialize(config);
  } catch (const ConfigError& e) {
    error(e.what());
    return out;
  }
  const auto& world = m.world;
  const std::size_t n = world.size();

  const std::size_t worst = max_faulty_in_neighbors(world);
  if (worst > config.f) {
    for (NodeId i : world.normal_ids) {
      std::size_t bad = 0;
      for (NodeId j : world.graph.in_neighbors(i)) bad += world.faulty[j] ? 1 : 0;
      if (bad > config.f) {
        error("f-local violation: normal node " + std::to_string(i) + " has " +
              std::to_string(bad) + " faulty in-neighbors (f=" +
              std::to_string(config.f) + ")");
      }
    }
  }

  const std::size_t r = 2 * config.f + 1;
  if (n < 2) {
    error("robustness needs at least two nodes");
  } else if (n > config.robustness_guard) {
    info("robustness check skipped: N=" + std::to_string(n) +
         " exceeds the exhaustive enumeration guard");
  } else if (is_r_robust(world.graph, r, config.robustness_guard)) {
    info("graph is " + std::to_string(r) + "-robust (required 2f+1=" +
         std::to_string(r) + ")");
  } else {
    error("graph is not " + std::to_string(r) + "-robust (required 2f+1)");
  }

  const auto phases = normal_phases(world);
  const auto omegas = normal_omegas(world);
  const double pmin = *std::min_element(phases.begin(), phases.end());
  const double pmax = *std::max_element(phases.begin(), phases.end());
  if (pmin != 0.0) {
    error("minimum initial normal phase is " + fmt_double(pmin) + ", expected 0");
  }
  if (!(pmax < 0.5)) {
    error("maximum initial normal phase " + fmt_double(pmax) + " is not below 0.5");
  }
  const double wmin = *std::min_element(omegas.begin(), omegas.end());
  const double wmax = *std::max_element(omegas.begin(), omegas.end());
  if (wmin < 1.0) {
    error("initial normal frequency " + fmt_double(wmin) + " below 1");
  }

  for (const auto& script : m.scripts) {
    const bool stealthy = is_stealthy(script, world, config.horizon);
    const std::string who = "attacker " + std::to_string(script.node) + " (" +
                            std::string(to_string(script.kind)) + ")";
    if (script.kind == AttackKind::Stealthy && !stealthy) {
      error(who + " is declared stealthy but can put two pulses into one receiver round");
    } else {
      info(who + (stealthy ? " passes" : " fails") + " the stealthiness dry run");
    }
  }

  std::size_t d_max = 0;
  for (NodeId i : world.normal_ids) d_max = std::max(d_max, in_degree(world.graph, i));
  const double alpha = effective_alpha(config.weights, d_max);
  BoundInputs in;
  in.node_count = n;
  in.normal_count = world.normal_ids.size();
  in.alpha = alpha;
  in.arc0 = containing_arc(phases).length;
  in.spread0 = wmax - wmin;
  in.zeta = config.zeta;
  in.kbar = config.kbar;
  info("alpha=" + fmt_double(alpha) + " Delta(0)=" + fmt_double(in.arc0) +
       " delta(0)=" + fmt_double(in.spread0));
  if (alpha > 0.0 && alpha < 1.0) {
    const std::pair<BoundVariant, const char*> variants[] = {
        {BoundVariant::Strict, "strict"},
        {BoundVariant::Relaxed, "relaxed"},
        {BoundVariant::Relative, "relative"}};
    for (const auto& [variant, name] : variants) {
      if (variant == BoundVariant::Relative && config.algorithm != Algorithm::Relative) {
        continue;
      }
      const auto b = check_initial_bound(in, variant);
      info(std::string(name) + " initial bound: lhs=" + fmt_double(b.lhs) +
           " rhs=" + fmt_double(b.rhs) + (b.satisfied ? " (satisfied)" : " (not satisfied)"));
    }
  } else {
    info("alpha=" + fmt_double(alpha) + " outside (0, 1); initial bounds not evaluated");
  }
  return out;
}

std::unique_ptr<Protocol> make_protocol(const ScenarioConfig& config) {
  if (config.algorithm == Algorithm::Absolute) {
    MsrParams p;
    p.f = config.f;
    p.weights = config.weights;
    p.eager_detection = config.eager_detection;
    return std::make_unique<MsrProtocol>(p);
  }
  RelativeParams p;
  p.zeta = config.zeta;
  p.f = config.f;
  p.weights = config.weights;
  p.eager_detection = config.eager_detection;
  return std::make_unique<RelativeProtocol>(p);
}

}  // namespace pco
