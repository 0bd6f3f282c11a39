#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "windcheck/battery.hpp"

using namespace windcheck;

namespace {

BatteryParams equation() {
  BatteryParams p;
  p.consumption = ConsumptionMode::Equation;
  return p;
}

BatteryParams table() {
  BatteryParams p;
  p.consumption = ConsumptionMode::Table;
  return p;
}

constexpr ActionKind kAll[] = {ActionKind::TakeOff, ActionKind::Land, ActionKind::TransitPerCell,
                               ActionKind::InspectTurbine};

}  // namespace

TEST(Voltage, StepFunctionWithInclusiveMiddleBand) {
  const BatteryParams p;
  EXPECT_EQ(voltage_level(0.8, p), 25.0);
  EXPECT_EQ(voltage_level(0.75, p), 22.0);
  EXPECT_EQ(voltage_level(0.25, p), 22.0);
  EXPECT_EQ(voltage_level(0.2, p), 20.0);
  EXPECT_EQ(voltage_level(1.0, p), 25.0);
  EXPECT_EQ(voltage_level(0.0, p), 20.0);
  EXPECT_EQ(variant_voltage(BatteryVariant::BasicLow, 0.9, p), 20.0);
  EXPECT_EQ(variant_voltage(BatteryVariant::BasicHigh, 0.1, p), 25.0);
  EXPECT_EQ(variant_voltage(BatteryVariant::BasicMedium, 0.9, p), 22.0);
}

TEST(Voltage, MonotoneNonIncreasingWithTwoBreakpoints) {
  const BatteryParams p;
  int changes = 0;
  double prev = voltage_level(1.0, p);
  for (int i = 1000; i >= 0; --i) {
    const double v = voltage_level(i / 1000.0, p);
    EXPECT_LE(v, prev);
    changes += v != prev;
    prev = v;
  }
  EXPECT_EQ(changes, 2);
}

TEST(Consumption, InspectionMatchesTheTable) {
  const auto p = equation();
  EXPECT_EQ(action_consumption(ActionKind::InspectTurbine, 25, PowerLevel::Normal, p), 3.6);
  EXPECT_EQ(action_consumption(ActionKind::InspectTurbine, 20, PowerLevel::Normal, p), 4.5);
  EXPECT_DOUBLE_EQ(action_consumption(ActionKind::InspectTurbine, 22, PowerLevel::Normal, p), 45.0 / 11.0);
}

TEST(Consumption, TableModeScalesForHighPower) {
  auto p = table();
  p.t_high = 0.25;
  EXPECT_EQ(action_consumption(ActionKind::InspectTurbine, 22, PowerLevel::Normal, p), 4.0);
  EXPECT_EQ(action_consumption(ActionKind::TransitPerCell, 25, PowerLevel::Normal, p), 0.3);
  EXPECT_EQ(action_consumption(ActionKind::Land, 20, PowerLevel::Normal, p), 0.3);
  EXPECT_DOUBLE_EQ(action_consumption(ActionKind::InspectTurbine, 25, PowerLevel::High, p), 7.2);
  EXPECT_THROW(action_consumption(ActionKind::Land, 21, PowerLevel::Normal, p), ConfigError);
}

TEST(Consumption, StrictlyDecreasingInVoltageAndRunningTime) {
  auto p = equation();
  for (auto a : kAll) {
    EXPECT_GT(action_consumption(a, 20, PowerLevel::Normal, p), action_consumption(a, 22, PowerLevel::Normal, p));
    EXPECT_GT(action_consumption(a, 22, PowerLevel::Normal, p), action_consumption(a, 25, PowerLevel::Normal, p));
    // high power has the shorter running time
    EXPECT_GT(action_consumption(a, 22, PowerLevel::High, p), action_consumption(a, 22, PowerLevel::Normal, p));
  }
}

TEST(Coulomb, Steps) {
  const auto r = coulomb_step(1.0, 11.0, 0.1, 11.0);
  EXPECT_DOUBLE_EQ(r.soc, 0.9);
  EXPECT_FALSE(r.depleted);
  EXPECT_EQ(coulomb_step(0.42, 0.0, 1.0, 11.0).soc, 0.42);
  const auto dead = coulomb_step(0.1, 11.0, 1.0, 11.0);
  EXPECT_EQ(dead.soc, 0.0);
  EXPECT_TRUE(dead.depleted);
  EXPECT_THROW(coulomb_step(1.0, 1.0, 0.0, 11.0), Error);
}

// Constant power P = e_spec / T_k drawn at voltage V for t_j hours moves the
// SOC fraction by exactly the per-action charge over the capacity.
TEST(Coulomb, AgreesWithPerActionCharge) {
  const auto p = equation();
  const ActionDurations dur;
  double worst = 0;
  for (auto a : kAll)
    for (double v : {p.v_low, p.v_med, p.v_high})
      for (auto power : {PowerLevel::Normal, PowerLevel::High}) {
        const double t_k = power == PowerLevel::Normal ? p.t_normal : p.t_high;
        const double current = (p.e_spec / t_k) / v;
        const double drop = 1.0 - coulomb_step(1.0, current, dur.hours(a), p.c_new).soc;
        worst = std::max(worst, std::abs(drop - action_consumption(a, v, power, p, dur) / p.c_new));
      }
  EXPECT_LE(worst, 1e-12);
  // 360 W at 22 V for a 15-minute inspection
  const double drop = 1.0 - coulomb_step(1.0, 360.0 / 22.0, 0.25, 11.0).soc;
  EXPECT_NEAR(drop, action_consumption(ActionKind::InspectTurbine, 22, PowerLevel::Normal, p) / 11.0, 1e-12);
}

TEST(Fade, MultiplicativePerRecharge) {
  const BatteryParams p;
  for (std::uint32_t n = 0; n <= 100; ++n) EXPECT_EQ(faded_capacity(p, n), 11.0 * std::pow(0.998, n)) << n;
  EXPECT_NEAR(faded_capacity(p, 80), 9.3721, 1e-4);  // a 14.8% loss
  // capacity holds after the fade horizon
  EXPECT_EQ(faded_capacity(p, 250), faded_capacity(p, 100));

  auto lin = p;
  lin.fade_law = FadeLaw::Linear;
  EXPECT_DOUBLE_EQ(faded_capacity(lin, 10), 11.0 * (1 - 0.02));
}

TEST(Fade, OnRecharge) {
  const BatteryParams p;
  BatteryState s = BatteryState::fresh(p);
  s.soc = 3.0;
  const auto a = fade_on_recharge(s, p, BatteryVariant::Advanced);
  EXPECT_DOUBLE_EQ(a.c_full, 10.978);
  EXPECT_EQ(a.soc, a.c_full);
  EXPECT_EQ(a.recharges, 1u);
  const auto b = fade_on_recharge(s, p, BatteryVariant::BasicMedium);
  EXPECT_EQ(b.c_full, 11.0);
  auto none = p;
  none.fade_rate = 0;
  EXPECT_EQ(fade_on_recharge(s, none, BatteryVariant::Advanced).c_full, 11.0);
}

// Independent fold over the one-decimal consumption table.
double table_fold(double soc, double full, const std::vector<ActionKind>& plan) {
  for (auto a : plan) {
    const double f = soc / full;
    const int col = f > 0.75 ? 2 : f >= 0.25 ? 1 : 0;
    static const double t[3][3] = {{0.3, 0.2, 0.1}, {0.5, 0.4, 0.3}, {4.5, 4.0, 3.6}};
    const int row = a == ActionKind::InspectTurbine ? 2 : a == ActionKind::TransitPerCell ? 1 : 0;
    soc -= t[row][col];
  }
  return soc;
}

TEST(Plan, FoldReevaluatesTheBand) {
  const auto p = table();
  const BatteryState full = BatteryState::fresh(p);
  const std::vector<ActionKind> land{ActionKind::Land};
  const std::vector<PowerLevel> low1{PowerLevel::Normal};
  EXPECT_DOUBLE_EQ(soc_after_plan(full, land, low1, p, BatteryVariant::Advanced), 10.9);

  const BatteryState half{5.5, 11.0, 0};
  const std::vector<ActionKind> inspect{ActionKind::InspectTurbine};
  EXPECT_DOUBLE_EQ(soc_after_plan(half, inspect, low1, p, BatteryVariant::Advanced), 1.5);

  // out and back two cells: the inspection drops the fraction to 0.618, so the
  // return runs in the medium band
  const std::vector<ActionKind> trip{ActionKind::TransitPerCell, ActionKind::TransitPerCell,
                                     ActionKind::InspectTurbine, ActionKind::TransitPerCell,
                                     ActionKind::TransitPerCell, ActionKind::Land};
  const std::vector<PowerLevel> calm(trip.size(), PowerLevel::Normal);
  const double got = soc_after_plan(full, trip, calm, p, BatteryVariant::Advanced);
  EXPECT_NEAR(got, table_fold(11.0, 11.0, trip), 1e-12);
  EXPECT_NEAR(got, 5.8, 1e-12);
  EXPECT_TRUE(is_safe(full, trip, calm, 0.3, p, BatteryVariant::Advanced));
  EXPECT_FALSE(is_safe(full, trip, calm, 0.99, p, BatteryVariant::Advanced));
  // the threshold is inclusive
  EXPECT_TRUE(is_safe(full, trip, calm, got / 11.0, p, BatteryVariant::Advanced));
}

TEST(Plan, PropertyFoldAgainstOracleAndPermutations) {
  std::mt19937_64 rng(11);
  const auto p = table();
  std::uniform_int_distribution<int> act(0, 3), len(1, 8);
  std::uniform_real_distribution<double> soc(2.0, 11.0);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<ActionKind> plan(static_cast<std::size_t>(len(rng)));
    for (auto& a : plan) a = kAll[act(rng)];
    const std::vector<PowerLevel> calm(plan.size(), PowerLevel::Normal);
    const BatteryState s{std::round(soc(rng) * 10) / 10, 11.0, 0};
    ASSERT_NEAR(soc_after_plan(s, plan, calm, p, BatteryVariant::Advanced), table_fold(s.soc, 11.0, plan), 1e-9);

    // pinned voltage: order does not matter
    auto shuffled = plan;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (auto v : {BatteryVariant::BasicHigh, BatteryVariant::BasicMedium, BatteryVariant::BasicLow})
      ASSERT_NEAR(soc_after_plan(s, plan, calm, p, v), soc_after_plan(s, shuffled, calm, p, v), 1e-9);

    // lowering the threshold never turns safe into unsafe
    const double hi = std::uniform_real_distribution<double>(0, 0.99)(rng);
    const double lo = hi * std::uniform_real_distribution<double>(0, 1)(rng);
    if (is_safe(s, plan, calm, hi, p, BatteryVariant::Advanced))
      ASSERT_TRUE(is_safe(s, plan, calm, lo, p, BatteryVariant::Advanced));
  }
}

TEST(Params, Validation) {
  EXPECT_NO_THROW(BatteryParams{}.validate());
  auto p = BatteryParams{};
  p.v_med = 26;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.soc_lo_threshold = 0.8;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.t_high = 0.6;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.fade_rate = 1.0;
  EXPECT_THROW(p.validate(), ConfigError);
  EXPECT_EQ(parse_variant("basic_low"), BatteryVariant::BasicLow);
  EXPECT_THROW(parse_variant("medium"), ConfigError);
}
