#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pco/adversary.hpp"
#include "pco/runner.hpp"

using namespace pco;
using doctest::Approx;

namespace {

WorldState demo_world() {
  return make_world(demo_graph(), std::vector<NodeId>{0, 3},
                    std::vector<double>{0.0, 0.1, 0.2, 0.0, 0.3, 0.05, 0.15, 0.25},
                    std::vector<double>(8, 1.0));
}

}  // namespace

TEST_SUITE("adversary") {

TEST_CASE("frequency claims") {
  const auto sine = FrequencyClaim::one_plus_abs_sin();
  CHECK(sine(0.0, 1.4) == 1.0);
  CHECK(sine(-std::numbers::pi / 2, 1.4) == Approx(2.0));
  const auto saw = FrequencyClaim::sawtooth();
  CHECK(saw(2.25, 1.4) == Approx(1.25));
  CHECK(saw(3.0, 1.4) == Approx(1.0));
  CHECK(FrequencyClaim::true_omega()(5.0, 1.4) == 1.4);
  CHECK(FrequencyClaim::constant(1.7)(5.0, 1.4) == 1.7);

  CHECK(FrequencyClaim::parse("one_plus_abs_sin")(1.0, 1.0) == Approx(1.0 + std::sin(1.0)));
  CHECK(FrequencyClaim::parse("constant:2.5")(0.0, 1.0) == 2.5);
  CHECK(FrequencyClaim::parse("sawtooth").name() == "sawtooth");
  CHECK_THROWS(FrequencyClaim::parse("cosine"));
  CHECK_THROWS(FrequencyClaim::parse("constant:-1"));
}

TEST_CASE("stealthy schedule") {
  const auto s = stealthy_script(0, 2.0, {0.25}, FrequencyClaim::sawtooth(), 9.0);
  CHECK((s.pulse_times == std::vector<double>{0.5, 2.5, 4.5, 6.5, 8.5}));
  CHECK(s.kind == AttackKind::Stealthy);
  CHECK(s.claim_at(1, 1.0) == Approx(1.5));
  CHECK_THROWS(stealthy_script(0, 0.0, {0.0}, FrequencyClaim::true_omega(), 5.0));
}

TEST_CASE("flooding schedule") {
  const auto s = flooding_script(2, 1.0, 4, 0.01);
  REQUIRE(s.pulse_times.size() == 4);
  CHECK(s.pulse_times.back() == Approx(1.03));
  CHECK(flooding_script(2, 1.0, 1, 0.01).pulse_times.size() == 1);
  CHECK_THROWS(flooding_script(2, 1.0, 0, 0.01));
  CHECK_THROWS(flooding_script(2, 1.0, 3, 0.0));
}

TEST_CASE("custom scripts and start pulses") {
  auto s = custom_script(1, {{1.0, 2.0}, {2.0, 1.0}});
  CHECK(s.claim_at(0, 1.3) == 2.0);
  add_start_pulses(s, 0.1, 1.3);
  REQUIRE(s.start_pulse_times.size() == 2);
  CHECK(s.start_pulse_times[0] == Approx(0.95));
  CHECK(s.start_pulse_times[1] == Approx(1.9));
  CHECK_THROWS(custom_script(1, {{2.0, 1.0}, {1.0, 1.0}}));
  CHECK_THROWS(custom_script(1, {{-1.0, 1.0}}));
  CHECK_THROWS(custom_script(1, {{1.0, 0.0}}));
}

TEST_CASE("is_stealthy") {
  const auto w = demo_world();
  CHECK(is_stealthy(stealthy_script(0, 2.0, {0.0}, FrequencyClaim::true_omega(), 50.0), w,
                    50.0));
  CHECK(is_stealthy(silent_script(3), w, 50.0));
  CHECK_FALSE(is_stealthy(flooding_script(0, 1.0, 5, 0.01), w, 50.0));
  CHECK_FALSE(is_stealthy(stealthy_script(0, 0.5, {0.0}, FrequencyClaim::true_omega(), 50.0),
                          w, 50.0));
}

TEST_CASE("stealthy scripts never trigger detection on homogeneous networks") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ScenarioConfig cfg;
    cfg.seed = seed;
    cfg.frequencies = InitialValues::random(1.0, 1.0);
    cfg.horizon = 100.0;
    cfg.halt_on_convergence = false;
    AttackerSpec a;
    a.node = 0;
    a.kind = AttackKind::Stealthy;
    a.claim = "one_plus_abs_sin";
    AttackerSpec b = a;
    b.node = 3;
    b.claim = "sawtooth";
    b.offsets = {0.5};
    cfg.attackers = {a, b};
    const auto s = run(cfg);
    INFO("seed " << seed);
    CHECK(s.detections.empty());
    CHECK(s.outcome == RunOutcome::Converged);
  }
}

TEST_CASE("flooding is detected at the target's next update") {
  ScenarioConfig cfg;
  cfg.phases = InitialValues::explicit_values({0.0, 0.1, 0.2, 0.0, 0.3, 0.05, 0.15, 0.25});
  cfg.frequencies = InitialValues::explicit_values(std::vector<double>(8, 1.0));
  cfg.halt_on_detection = false;
  cfg.halt_on_convergence = false;
  cfg.horizon = 6.0;
  AttackerSpec flood;
  flood.node = 0;
  flood.kind = AttackKind::Flooding;
  flood.start = 2.0;
  flood.burst_count = 6;  // exceeds every in-degree of the demo graph
  flood.burst_interval = 0.01;
  cfg.attackers = {flood};
  RunOptions opts;
  opts.keep_updates = true;
  const auto s = run(cfg, opts);
  REQUIRE_FALSE(s.detections.empty());
  const auto g = demo_graph();
  for (NodeId target : g.out_neighbors(0)) {
    bool checked = false;
    for (const auto& u : s.updates) {
      if (u.node != target || u.time < 2.05) continue;
      CHECK(u.outcome == UpdateOutcome::Detected);
      checked = true;
      break;
    }
    CHECK(checked);
  }
}

}  // TEST_SUITE
