#include <numeric>
#include <vector>

#include "doctest.h"
#include "pco/protocol_msr.hpp"
#include "pco/runner.hpp"

using namespace pco;
using doctest::Approx;

namespace {

// Node 0 of K5 (in-degree 4) poised at its update trigger.
WorldState update_ready(std::size_t counter, std::vector<double> buffer) {
  auto w = make_world(complete_digraph(5), std::vector<NodeId>{},
                      std::vector<double>{0.5, 0.1, 0.2, 0.3, 0.4},
                      std::vector<double>{1.5, 1.0, 1.0, 1.0, 1.0});
  auto& osc = w.oscillators[0];
  osc.gamma = true;
  osc.counter = counter;
  osc.freq_buffer = std::move(buffer);
  return w;
}

}  // namespace

TEST_SUITE("msr") {

TEST_CASE("msr_trim") {
  CHECK((msr_trim(std::vector<double>{1.0, 1.2, 1.5, 2.0}, 1) ==
         std::vector<double>{1.2, 1.5}));
  CHECK((msr_trim(std::vector<double>{2.0, 1.0, 3.0}, 0) ==
         std::vector<double>{1.0, 2.0, 3.0}));
  CHECK((msr_trim(std::vector<double>{1.0, 1.0, 3.0, 3.0}, 1) ==
         std::vector<double>{1.0, 3.0}));
  CHECK(msr_trim(std::vector<double>{1.0, 2.0}, 1).empty());
  CHECK_THROWS_AS(msr_trim(std::vector<double>{1.0}, 1), ProtocolFault);
}

TEST_CASE("make_weights") {
  const auto eq = make_weights(WeightPolicy::equal(), 2);
  REQUIRE(eq.size() == 3);
  for (double w : eq) CHECK(w == Approx(1.0 / 3.0));
  CHECK((make_weights(WeightPolicy::equal(), 0) == std::vector<double>{1.0}));

  for (std::size_t j = 0; j < 6; ++j) {
    for (const auto& policy : {WeightPolicy::equal(), WeightPolicy::configured(0.1)}) {
      const auto w = make_weights(policy, j);
      CHECK(std::accumulate(w.begin(), w.end(), 0.0) == Approx(1.0).epsilon(1e-12));
      for (double x : w) CHECK(x >= effective_alpha(policy, j) - 1e-15);
    }
  }
  CHECK_THROWS(make_weights(WeightPolicy::configured(0.3), 4));
  CHECK(effective_alpha(WeightPolicy::equal(), 5) == Approx(1.0 / 6.0));
}

TEST_CASE("convex_update") {
  const std::vector<double> kept{1.2, 1.5};
  CHECK(convex_update(WeightPolicy::equal(), 1.5, kept) == Approx(1.4));
  CHECK(convex_update(WeightPolicy::configured(0.25), 1.0, kept) ==
        Approx(0.5 * 1.0 + 0.25 * 1.2 + 0.25 * 1.5));
  // identical inputs are reproduced exactly
  const std::vector<double> same{1.1, 1.1, 1.1};
  CHECK(convex_update(WeightPolicy::equal(), 1.1, same) == 1.1);
}

TEST_CASE("pulse counting thresholds") {
  MsrParams params;  // f = 1

  SUBCASE("f+1 reached above one half") {
    OscillatorState s;
    s.phase = 0.8;
    on_pulse(s, 4, params, 1.0);
    on_pulse(s, 4, params, 1.0);
    REQUIRE(s.zbar);
    CHECK(*s.zbar == Approx(0.2));
    CHECK_FALSE(s.zunder);
  }
  SUBCASE("f+1 reached below one half") {
    OscillatorState s;
    s.phase = 0.3;
    on_pulse(s, 4, params, 1.0);
    on_pulse(s, 4, params, 1.0);
    REQUIRE(s.zbar);
    CHECK(*s.zbar == 0.0);
  }
  SUBCASE("both thresholds on the same pulse") {
    OscillatorState s;
    s.phase = 0.3;
    on_pulse(s, 3, params, 1.0);
    on_pulse(s, 3, params, 1.0);
    REQUIRE(s.zbar);
    REQUIRE(s.zunder);
    CHECK(*s.zbar == 0.0);
    CHECK(*s.zunder == Approx(-0.3));
  }
  SUBCASE("values are buffered") {
    OscillatorState s;
    on_pulse(s, 3, params, 1.7);
    CHECK(s.counter == 1);
    CHECK((s.freq_buffer == std::vector<double>{1.7}));
  }
}

TEST_CASE("on_fire broadcasts the sender's frequency") {
  auto w = make_world(complete_digraph(3), std::vector<NodeId>{},
                      std::vector<double>{0.0, 0.1, 0.2},
                      std::vector<double>{1.3, 1.0, 1.0});
  w.oscillators[0].phase = 1.0;
  on_fire(w, MsrParams{}, 0);
  CHECK(w.oscillators[0].gamma);
  CHECK(w.oscillators[0].phase == 0.0);
  for (NodeId j : {1, 2}) {
    CHECK((w.oscillators[j].freq_buffer == std::vector<double>{1.3}));
    CHECK(w.oscillators[j].counter == 1);
  }

  DirectedGraph lonely(2);
  lonely.add_edge(0, 1);
  auto w2 = make_world(lonely, std::vector<NodeId>{}, std::vector<double>{0.0, 0.0},
                       std::vector<double>{1.0, 1.0});
  w2.oscillators[0].phase = 1.0;
  on_fire(w2, MsrParams{}, 0);
  CHECK(w2.oscillators[1].counter == 0);
  CHECK(w2.oscillators[0].gamma);
}

TEST_CASE("update arithmetic") {
  auto w = update_ready(4, {2.0, 1.2, 1.0, 1.5});
  auto& osc = w.oscillators[0];
  osc.zbar = 0.2;
  osc.zunder = -0.1;
  const auto rec = on_update(w, MsrParams{}, 0);
  CHECK(rec.outcome == UpdateOutcome::Updated);
  CHECK(rec.trim == 1);
  CHECK(osc.phase == Approx(0.55));
  CHECK(osc.omega == Approx(1.4));  // self 1.5 with the kept {1.2, 1.5}
  CHECK_FALSE(osc.gamma);
  CHECK(osc.counter == 0);
  CHECK(osc.freq_buffer.empty());
  CHECK_FALSE(osc.zbar);
}

TEST_CASE("local trim") {
  CHECK(local_trim(1, 3, 3, 0) == 1);
  CHECK(local_trim(1, 3, 2, 0) == 0);
  CHECK_THROWS_AS(local_trim(1, 3, 1, 0), ProtocolFault);

  auto w = update_ready(2, {1.0, 1.0});
  CHECK_THROWS_AS(on_update(w, MsrParams{}, 0), ProtocolFault);
}

TEST_CASE("detection latches and freezes the node") {
  auto w = update_ready(5, {1.0, 1.0, 1.0, 1.0, 1.0});
  w.oscillators[0].zbar = 0.3;
  const auto rec = on_update(w, MsrParams{}, 0);
  CHECK(rec.outcome == UpdateOutcome::Detected);
  CHECK(w.oscillators[0].detected);
  CHECK(w.oscillators[0].phase == 0.5);
  CHECK(w.oscillators[0].omega == 1.5);
  CHECK(w.oscillators[0].counter == 0);

  auto& osc = w.oscillators[0];
  osc.gamma = true;
  osc.counter = 4;
  osc.freq_buffer = {1.0, 1.0, 1.0, 1.0};
  osc.zbar = 0.3;
  const auto later = on_update(w, MsrParams{}, 0);
  CHECK(later.outcome == UpdateOutcome::Frozen);
  CHECK(osc.phase == 0.5);
  CHECK(osc.omega == 1.5);
}

TEST_CASE("eager detection latches on the pulse") {
  MsrParams params;
  params.eager_detection = true;
  OscillatorState s;
  for (int n = 0; n < 3; ++n) on_pulse(s, 3, params, 1.0);
  CHECK_FALSE(s.detected);
  on_pulse(s, 3, params, 1.0);
  CHECK(s.detected);
}

TEST_CASE("homogeneous attack-free runs never change frequencies") {
  ScenarioConfig cfg;
  cfg.phases = InitialValues::explicit_values({0.0, 0.1, 0.2, 0.3, 0.4, 0.05, 0.15, 0.25});
  cfg.frequencies = InitialValues::explicit_values(std::vector<double>(8, 1.0));
  cfg.horizon = 200.0;
  std::size_t updates = 0;
  RunOptions opts;
  opts.keep_updates = true;
  opts.observer = [&](const StepResult&, const WorldState& w, const EventMetrics&) {
    for (const auto& osc : w.oscillators) CHECK(osc.omega == 1.0);
  };
  const auto s = run(cfg, opts);
  for (const auto& u : s.updates) {
    CHECK(u.omega_after == 1.0);
    CHECK(std::abs(u.phase_after - u.phase_before) <= 0.25);
    CHECK(u.count + cfg.f >= u.in_degree);
    ++updates;
  }
  CHECK(updates > 0);
  CHECK(s.converged());
}

}  // TEST_SUITE
