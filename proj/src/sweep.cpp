#include "pco/sweep.hpp"

#include <atomic>
#include <numeric>
#include <ostream>
#include <thread>

#include "pco/random.hpp"
#include "pco/runner.hpp"

namespace pco {

ScenarioConfig trial_config(const ScenarioConfig& base, double arc0, double spread0,
                            std::size_t grid_index, std::size_t trial) {
  ScenarioConfig cfg = base;
  cfg.seed = derive_seed(base.seed, grid_index, trial);
  cfg.trace_path.reset();

  const std::size_t n = cfg.graph.node_count();
  const auto faulty = cfg.faulty_nodes();
  std::vector<NodeId> normals;
  for (NodeId i = 0; i < n; ++i) {
    if (!std::binary_search(faulty.begin(), faulty.end(), i)) normals.push_back(i);
  }
  if (normals.size() < 2) throw ConfigError("sweep needs at least two normal nodes");

  Rng rng(cfg.seed);
  std::vector<double> phase_u(n, 0.0);
  std::vector<double> omega_u(n, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    phase_u[i] = unit_double(rng);
    omega_u[i] = unit_double(rng);
  }
  // Pin both extremes so the drawn configuration has exactly the requested
  // Delta(0) and delta(0).
  auto pick_pair = [&] {
    const std::size_t a = rng() % normals.size();
    std::size_t b = rng() % (normals.size() - 1);
    if (b >= a) ++b;
    return std::pair{normals[a], normals[b]};
  };
  const auto [p_lo, p_hi] = pick_pair();
  const auto [w_lo, w_hi] = pick_pair();
  phase_u[p_lo] = 0.0;
  phase_u[p_hi] = 1.0;
  omega_u[w_lo] = 0.0;
  omega_u[w_hi] = 1.0;

  std::vector<double> phases(n, 0.0);
  std::vector<double> omegas(n, 1.0);
  for (NodeId i = 0; i < n; ++i) {
    phases[i] = arc0 * phase_u[i];
    omegas[i] = 1.0 + spread0 * omega_u[i];
  }
  cfg.phases = InitialValues::explicit_values(std::move(phases));
  cfg.frequencies = InitialValues::explicit_values(std::move(omegas));
  cfg.normalize_phases = false;
  return cfg;
}

bool trial_succeeds(const ScenarioConfig& trial, bool synchronized_only) {
  const auto s = run(trial);
  if (s.outcome == RunOutcome::Converged) return true;
  return !synchronized_only && s.outcome == RunOutcome::Detected;
}

double success_rate(const ScenarioConfig& base, const SweepSettings& settings,
                    double arc0, double spread0, std::size_t grid_index) {
  if (settings.trials == 0) throw std::invalid_argument("trials must be at least 1");
  std::vector<char> ok(settings.trials, 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < settings.trials; t = next++) {
      ok[t] = trial_succeeds(trial_config(base, arc0, spread0, grid_index, t),
                             settings.synchronized_only);
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(settings.parallelism, 1, settings.trials);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  const auto wins = std::accumulate(ok.begin(), ok.end(), std::size_t{0});
  return static_cast<double>(wins) / static_cast<double>(settings.trials);
}

std::vector<FrontierRow> sweep(const ScenarioConfig& base, const SweepSettings& settings) {
  std::vector<FrontierRow> rows;
  for (std::size_t g = 0; g < settings.arc_grid.size(); ++g) {
    const double arc0 = settings.arc_grid[g];
    auto rate = [&](double spread0) {
      return success_rate(base, settings, arc0, spread0, g);
    };
    FrontierRow row{arc0, 0.0, 0.0};
    const double top = rate(settings.spread_hi);
    if (top >= settings.success_threshold) {
      row.spread0_max = settings.spread_hi;
      row.success_rate = top;
    } else {
      double lo = 0.0;
      double hi = settings.spread_hi;
      double lo_rate = rate(lo);
      if (lo_rate >= settings.success_threshold) {
        while (hi - lo > settings.tolerance) {
          const double mid = 0.5 * (lo + hi);
          const double r = rate(mid);
          if (r >= settings.success_threshold) {
            lo = mid;
            lo_rate = r;
          } else {
            hi = mid;
          }
        }
      }
      row.spread0_max = lo;
      row.success_rate = lo_rate;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_frontier_csv(std::ostream& out, const std::vector<FrontierRow>& rows) {
  out << "Delta0,delta0_max,success_rate\n";
  for (const auto& r : rows) {
    out << format_double(r.arc0) << ',' << format_double(r.spread0_max) << ','
        << format_double(r.success_rate) << '\n';
  }
}

}  // namespace pco
