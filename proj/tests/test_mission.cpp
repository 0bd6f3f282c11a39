#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "windcheck/mission.hpp"
#include "windcheck/pctl/checker.hpp"

using namespace windcheck;

namespace {

MissionConfig small(int w, int h, double c_new) {
  MissionConfig c;
  c.grid_width = w;
  c.grid_height = h;
  c.base = {w / 2, h / 2};
  c.battery.c_new = c_new;
  return c;
}

double success(const Dtmc& d) { return pctl::Checker(d).check(kSuccessProperty).value; }

}  // namespace

TEST(Route, SnakeVisitsEveryCellOnce) {
  EXPECT_EQ(snake_route(2, 2), (std::vector<Cell>{{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  EXPECT_EQ(snake_route(1, 1), (std::vector<Cell>{{0, 0}}));
  const auto r = snake_route(5, 5);
  ASSERT_EQ(r.size(), 25u);
  EXPECT_EQ(r.front(), (Cell{0, 0}));
  EXPECT_EQ(r.back(), (Cell{4, 4}));
  EXPECT_EQ(std::set<Cell>(r.begin(), r.end()).size(), 25u);
  for (std::size_t i = 1; i < r.size(); ++i) EXPECT_EQ(travel_cells(r[i - 1], r[i]), 1);
}

TEST(Route, AppointedTurbines) {
  const auto lit = AppointmentRule::Shared, uniq = AppointmentRule::UniqueCover;
  EXPECT_EQ(appointed_turbines({0, 0}, 5, 5, lit), 1);
  EXPECT_EQ(appointed_turbines({2, 0}, 5, 5, lit), 2);
  EXPECT_EQ(appointed_turbines({2, 2}, 5, 5, lit), 4);
  int total_lit = 0, total_uniq = 0;
  for (const Cell c : snake_route(5, 5)) {
    total_lit += appointed_turbines(c, 5, 5, lit);
    total_uniq += appointed_turbines(c, 5, 5, uniq);
  }
  EXPECT_EQ(total_lit, 64);
  // a 6x6 turbine lattice around the 5x5 cells
  EXPECT_EQ(total_uniq, 36);
  EXPECT_THROW(appointed_turbines({5, 0}, 5, 5, lit), ConfigError);
}

TEST(Route, TravelIsASymmetricMetric) {
  for (const Cell a : snake_route(4, 3))
    for (const Cell b : snake_route(4, 3)) {
      EXPECT_EQ(travel_cells(a, b), travel_cells(b, a));
      EXPECT_EQ(travel_cells(a, b) == 0, a == b);
      for (const Cell m : snake_route(4, 3)) EXPECT_LE(travel_cells(a, b), travel_cells(a, m) + travel_cells(m, b));
    }
}

TEST(Presets, ReferenceScenarios) {
  const double want[4][2] = {{0.3, 0.1}, {0.25, 0.1}, {0.3, 0.3}, {0.25, 0.3}};
  for (int id = 1; id <= 4; ++id) {
    const auto c = scenario_preset(id);
    EXPECT_EQ(c.safe_t, want[id - 1][0]);
    EXPECT_EQ(c.p_wsp_c, want[id - 1][1]);
    EXPECT_EQ(c.grid_width, 5);
    EXPECT_EQ(c.base, (Cell{2, 2}));
    EXPECT_NO_THROW(c.validate());
  }
  EXPECT_THROW(scenario_preset(0), ConfigError);
  EXPECT_THROW(scenario_preset(5), ConfigError);
}

TEST(Costs, QuantaMatchTheTable) {
  const MissionConfig c;
  const auto q = quantized_costs(c);
  // [action][band low/med/high], normal power
  const int table[4][3] = {{3, 2, 1}, {3, 2, 1}, {5, 4, 3}, {45, 40, 36}};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 3; ++b) {
      EXPECT_EQ(q.q[a][b][0], table[a][b]) << a << " " << b;
      EXPECT_EQ(q.q[a][b][1], 2 * table[a][b]) << a << " " << b;
    }
}

TEST(Validation, RejectsBadConfigs) {
  auto c = small(3, 3, 11);
  c.base = {3, 0};
  EXPECT_THROW(c.validate(), ConfigError);
  c = small(3, 3, 11);
  c.safe_t = 1.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small(3, 3, 11);
  c.p_wsp_c = -0.1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small(0, 3, 11);
  EXPECT_THROW(mission_model_text(c), ConfigError);
}

TEST(Model, SingleCellWithAmpleBatteryNeverRecharges) {
  auto c = small(1, 1, 100);
  c.p_wsp_c = 0;
  const Dtmc d = build_mission_model(c);
  pctl::Checker k(d);
  EXPECT_DOUBLE_EQ(k.check(kSuccessProperty).value, 1.0);
  EXPECT_DOUBLE_EQ(k.check(kRechargeProperty).value, 0.0);
  EXPECT_GT(k.check(kMissionTimeProperty).value, 0.0);
}

// Without wind every run has the same fate.
TEST(Model, CalmWindIsDeterministic) {
  for (double cap : {3.0, 6.0, 11.0}) {
    auto c = small(3, 3, cap);
    c.p_wsp_c = 0;
    const Dtmc d = build_mission_model(c);
    for (StateIndex s = 0; s < d.num_states(); ++s) EXPECT_LE(d.successors(s).size(), 2u);
    const double p = success(d);
    EXPECT_TRUE(p == 0.0 || std::abs(p - 1.0) < 1e-12) << cap << " " << p;
  }
}

// Property: success and fail are disjoint absorbing sets that together
// collect all probability mass whenever the wind is not strictly alternating.
TEST(Model, SuccessAndFailPartitionTheOutcomes) {
  for (double p : {0.0, 0.1, 0.5, 0.9})
    for (double cap : {4.0, 7.0, 11.0})
      for (auto v : {BatteryVariant::Advanced, BatteryVariant::BasicLow}) {
        auto c = small(3, 3, cap);
        c.p_wsp_c = p;
        c.variant = v;
        const Dtmc d = build_mission_model(c);
        ASSERT_TRUE(validate(d).ok());
        const auto& ok = d.label("success");
        const auto& bad = d.label("fail");
        EXPECT_TRUE((ok & bad).none());
        for (StateIndex s : (ok | bad).indices()) EXPECT_TRUE(d.is_absorbing(s));
        pctl::Checker k(d);
        const double ps = k.check(kSuccessProperty).value;
        const double pf = k.check("P=? [ F \"fail\" ]").value;
        EXPECT_NEAR(ps + pf, 1.0, 1e-9) << p << " " << cap;
      }
}

// A wind that flips on every step is high at every fly-to-target check, so
// the drone cycles through take-off, landing and recharge forever.
TEST(Model, StrictlyAlternatingWindNeverFinishes) {
  auto c = small(3, 3, 11);
  c.p_wsp_c = 1.0;
  const Dtmc d = build_mission_model(c);
  pctl::Checker k(d);
  EXPECT_EQ(k.check("P=? [ F \"done\" ]").value, 0.0);
  EXPECT_TRUE(std::isinf(k.check(kMissionTimeProperty).value));
}

// Property: with a pinned voltage, more capacity never hurts.
TEST(Model, BasicVariantsAreMonotoneInCapacity) {
  for (auto v : {BatteryVariant::BasicHigh, BatteryVariant::BasicMedium, BatteryVariant::BasicLow}) {
    double prev = 0;
    for (double cap = 4.0; cap <= 9.0; cap += 1.0) {
      auto c = small(3, 3, cap);
      c.variant = v;
      const double p = success(build_mission_model(c));
      EXPECT_GE(p, prev - 1e-9) << to_string(v) << " " << cap;
      prev = p;
    }
  }
}

TEST(Model, ReferenceScenarioSucceeds) {
  const Dtmc d = build_mission_model(scenario_preset(1));
  EXPECT_GT(d.num_states(), 1000u);
  pctl::Checker k(d);
  EXPECT_NEAR(k.check(kSuccessProperty).value, 1.0, 1e-9);
  EXPECT_GT(k.check(kRechargeProperty).value, 0.0);
}

TEST(Model, StateCapIsEnforced) {
  auto c = scenario_preset(1);
  c.state_cap = 100;
  EXPECT_THROW(build_mission_model(c), ModelError);
}
