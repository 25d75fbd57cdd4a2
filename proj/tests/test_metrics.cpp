#include <cmath>

#include "doctest.h"
#include "pco/metrics.hpp"
#include "pco/runner.hpp"

using namespace pco;
using doctest::Approx;

TEST_SUITE("metrics") {

TEST_CASE("delta_arc covers normal nodes only") {
  auto w = make_world(complete_digraph(3), std::vector<NodeId>{2},
                      std::vector<double>{0.0, 0.3, 0.9}, std::vector<double>(3, 1.0));
  CHECK(delta_arc(w) == Approx(0.3));
  auto wrap = make_world(complete_digraph(3), std::vector<NodeId>{},
                         std::vector<double>{0.95, 0.05, 0.1}, std::vector<double>(3, 1.0));
  CHECK(delta_arc(wrap) == Approx(0.15));
  auto same = make_world(complete_digraph(3), std::vector<NodeId>{},
                         std::vector<double>{0.4, 0.4, 0.4}, std::vector<double>(3, 1.0));
  CHECK(delta_arc(same) == 0.0);
}

TEST_CASE("spread window") {
  SpreadWindow constant(4);
  for (int k = 0; k < 10; ++k) CHECK(constant.push(1.0, 1.5).spread() == Approx(0.5));

  SpreadWindow instant(1);
  CHECK(instant.push(1.0, 2.0).spread() == 1.0);
  CHECK(instant.push(1.4, 1.6).spread() == Approx(0.2));

  SpreadWindow padded(3);
  CHECK(padded.push(1.0, 2.0).spread() == 1.0);
  CHECK(padded.push(1.5, 1.6).spread() == 1.0);   // first sample still inside
  CHECK(padded.push(1.5, 1.6).spread() == 1.0);
  CHECK(padded.push(1.5, 1.6).spread() == Approx(0.1));
  CHECK_THROWS(SpreadWindow(0));
}

TEST_CASE("virtual node at rest relative to synchronized nodes") {
  auto w = make_world(complete_digraph(3), std::vector<NodeId>{},
                      std::vector<double>{0.0, 0.0, 0.0}, std::vector<double>(3, 1.0));
  VirtualNode s{0.0, 1.0};
  for (int k = 0; k < 20; ++k) {
    advance_all(w, 0.049);
    const auto rel = virtual_step(s, 0.049, w, 1.0);
    CHECK(rel.r_max == Approx(0.0));
    CHECK(rel.virtual_arc == Approx(0.0));
  }
}

TEST_CASE("initial V equals the initial arc") {
  auto w = make_world(complete_digraph(3), std::vector<NodeId>{},
                      std::vector<double>{0.0, 0.2, 0.35}, std::vector<double>{1.0, 1.2, 1.1});
  RunMonitor monitor(w, MonitorConfig{});
  CHECK(monitor.initial().V == Approx(0.35));
  CHECK(monitor.initial().arc == Approx(0.35));
  CHECK(monitor.initial().spread_windowed == Approx(0.2));
}

TEST_CASE("initial bounds") {
  BoundInputs in;
  in.node_count = 8;
  in.normal_count = 6;
  in.alpha = 1.0 / 6.0;
  in.arc0 = 0.4;
  in.spread0 = 0.0;
  CHECK(check_initial_bound(in, BoundVariant::Strict).satisfied);
  CHECK(check_initial_bound(in, BoundVariant::Relaxed).satisfied);
  in.zeta = 0.1;
  CHECK_FALSE(check_initial_bound(in, BoundVariant::Relative).satisfied);
  in.arc0 = 0.3;
  CHECK(check_initial_bound(in, BoundVariant::Relative).satisfied);

  BoundInputs small;
  small.node_count = 2;
  small.normal_count = 2;
  small.alpha = 0.5;
  small.arc0 = 0.1;
  small.spread0 = 1e-5;
  const auto strict = check_initial_bound(small, BoundVariant::Strict);
  CHECK(strict.lhs == Approx(0.1 + 16.0 / std::pow(0.5, 8) * 1e-5));
  CHECK(strict.rhs == 0.5);
  CHECK(strict.satisfied);
  small.kbar = 1;
  const auto relaxed = check_initial_bound(small, BoundVariant::Relaxed);
  CHECK(relaxed.lhs == Approx(0.1 + 4.0 / 0.25 * 1e-5));

  small.spread0 = 0.01;
  CHECK_FALSE(check_initial_bound(small, BoundVariant::Strict).satisfied);
  in.alpha = 1.0;
  CHECK_THROWS(check_initial_bound(in, BoundVariant::Strict));
}

TEST_CASE("decay envelope") {
  CHECK(decay_envelope(0.5, 0.5, 2, 2, 0) == 0.5);
  CHECK(decay_envelope(0.5, 0.5, 2, 2, 3) == 0.5);
  CHECK(decay_envelope(0.5, 0.5, 2, 2, 4) == Approx((1 - 0.0625 / 2) * 0.5));
  CHECK(decay_envelope(0.5, 0.5, 2, 2, 9) == Approx(std::pow(1 - 0.0625 / 2, 2) * 0.5));
  CHECK(decay_envelope(0.0, 0.5, 2, 2, 9) == 0.0);
}

TEST_CASE("low-heterogeneity stealthy runs satisfy the per-event contraction checks") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ScenarioConfig cfg;
    cfg.seed = seed;
    cfg.phases = InitialValues::random(0.0, 0.3);
    cfg.frequencies = InitialValues::random(1.0, 1.05);
    cfg.horizon = 150.0;
    AttackerSpec a;
    a.node = 0;
    a.kind = AttackKind::Stealthy;
    a.claim = "one_plus_abs_sin";
    AttackerSpec b = a;
    b.node = 3;
    b.claim = "sawtooth";
    cfg.attackers = {a, b};
    double last_windowed = INFINITY;
    RunOptions opts;
    opts.observer = [&](const StepResult&, const WorldState&, const EventMetrics& m) {
      CHECK(m.spread_windowed <= last_windowed + 1e-12);
      last_windowed = m.spread_windowed;
    };
    const auto s = run(cfg, opts);
    INFO("seed " << seed);
    CHECK(s.converged());
    for (auto c : {Check::OmegaRange, Check::ArcSafety, Check::HullMin, Check::HullMax,
                   Check::Envelope}) {
      CHECK(s.checks[static_cast<std::size_t>(c)].violations == 0);
    }
  }
}

TEST_CASE("measured kbar on nearly synchronized runs") {
  // a stretched round lets a neighbor contribute update, fire and update,
  // so the measured gap can exceed 2N but not 3N
  ScenarioConfig cfg;
  cfg.phases = InitialValues::random(0.0, 0.1);
  cfg.frequencies = InitialValues::random(1.0, 1.0);
  const auto s = run(cfg);
  CHECK(s.converged());
  CHECK(s.kbar == 16);
  CHECK(s.measured_kbar > 0);
  CHECK(s.measured_kbar >= s.node_count);
  CHECK(s.measured_kbar <= 3 * s.node_count);
}

}  // TEST_SUITE
