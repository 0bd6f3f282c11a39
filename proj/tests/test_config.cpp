#include <gtest/gtest.h>

#include <sstream>

#include "windcheck/config.hpp"
#include "windcheck/report.hpp"
#include "windcheck/sweep.hpp"

using namespace windcheck;

TEST(Config, ReadsSectionsOnTopOfTheBase) {
  const auto c = parse_config(R"(
# comment
[mission]
grid_width = 4
base_x = 1
safe_t = 0.35
variant = basic_medium
appointment_rule = shared
bs1_plan = with_return

[battery]
c_new = 12.5
t_high = 1/3
consumption = equation
fade_law = linear

[durations]
inspect = 20
)");
  EXPECT_EQ(c.grid_width, 4);
  EXPECT_EQ(c.grid_height, 5);
  EXPECT_EQ(c.base, (Cell{1, 2}));
  EXPECT_EQ(c.safe_t, 0.35);
  EXPECT_EQ(c.variant, BatteryVariant::BasicMedium);
  EXPECT_EQ(c.appointment_rule, AppointmentRule::Shared);
  EXPECT_EQ(c.bs1_plan, PlanScope::WithReturn);
  EXPECT_EQ(c.battery.c_new, 12.5);
  EXPECT_DOUBLE_EQ(c.battery.t_high, 1.0 / 3);
  EXPECT_EQ(c.battery.consumption, ConsumptionMode::Equation);
  EXPECT_EQ(c.battery.fade_law, FadeLaw::Linear);
  EXPECT_EQ(c.durations.inspect, 20.0);
}

TEST(Config, ScenarioResetsBeforeOtherKeys) {
  MissionConfig base;
  base.grid_width = 3;
  base.base = {0, 0};
  const auto c = parse_config("[mission]\np_wsp_c = 0.2\nscenario = 4\n", base);
  EXPECT_EQ(c.grid_width, 5);
  EXPECT_EQ(c.safe_t, 0.25);
  EXPECT_EQ(c.p_wsp_c, 0.2);
}

TEST(Config, RejectsBadInput) {
  for (const char* text : {"[mision]\nsafe_t = 0.3\n", "[mission]\nsafe = 0.3\n", "[mission]\nsafe_t = abc\n",
                           "[mission]\nsafe_t = 1/0\n", "[mission]\nscenario = 7\n", "[mission]\ngrid_width = 2.5\n",
                           "[mission]\nsafe_t = 1.5\n", "[battery]\nconsumption = guess\n",
                           "[mission]\nbase_x = 9\n", "safe_t = 0.3\n", "[mission\n"}) {
    SCOPED_TRACE(text);
    EXPECT_THROW(parse_config(text), ConfigError);
  }
  EXPECT_THROW(load_config("/nonexistent/windcheck.ini"), ConfigError);
}

TEST(Config, TrailingCommentsAreIgnored) {
  const auto c = parse_config("[mission]\nsafe_t = 0.35   # margin\nvariant = basic_low ; pinned\n"
                              "[battery]\nc_new = 12 # Ah\n");
  EXPECT_EQ(c.safe_t, 0.35);
  EXPECT_EQ(c.variant, BatteryVariant::BasicLow);
  EXPECT_EQ(c.battery.c_new, 12.0);
  EXPECT_THROW(parse_config("[battery]\nc_new = 12#5\n"), ConfigError);
}

// Property: formatting and re-reading any config gives the same config.
TEST(Config, FormatRoundTrips) {
  for (int id = 1; id <= 4; ++id) {
    auto c = scenario_preset(id);
    c.battery.t_high = 1.0 / 3;
    c.durations.transit = 2.5;
    c.variant = BatteryVariant::BasicLow;
    const std::string text = format_config(c);
    const auto back = parse_config(text);
    EXPECT_EQ(format_config(back), text);
    EXPECT_EQ(back.battery.t_high, c.battery.t_high);
    EXPECT_EQ(back.safe_t, c.safe_t);
  }
}

TEST(Sweep, ValuesCoverTheRangeInclusively) {
  SweepSpec s;
  const auto v = s.values();
  ASSERT_EQ(v.size(), 41u);
  EXPECT_EQ(v.front(), 8.0);
  EXPECT_EQ(v[1], 8.2);
  EXPECT_EQ(v[13], 10.6);
  EXPECT_EQ(v.back(), 16.0);
  s.lo = 0.1;
  s.hi = 0.3;
  s.step = 0.1;
  EXPECT_EQ(s.values(), (std::vector<double>{0.1, 0.2, 0.3}));
  s.step = 0;
  EXPECT_THROW(s.values(), ConfigError);
  EXPECT_EQ(parse_sweep_param("safe_t"), SweepParam::SafeT);
  EXPECT_THROW(parse_sweep_param("capacity"), ConfigError);
}

TEST(Sweep, OrderIsIndependentOfThreads) {
  MissionConfig base;
  base.grid_width = base.grid_height = 3;
  base.base = {1, 1};
  SweepSpec s;
  s.lo = 3;
  s.hi = 6;
  s.step = 0.5;
  s.variants = {BatteryVariant::Advanced, BatteryVariant::BasicLow};
  const auto one = run_sweep(base, s, 1);
  const auto four = run_sweep(base, s, 4);
  ASSERT_EQ(one.size(), 14u);
  EXPECT_EQ(sweep_csv(s, one), sweep_csv(s, four));
  for (const auto& p : one) {
    EXPECT_TRUE(p.error.empty());
    ASSERT_EQ(p.results.size(), 3u);
    EXPECT_GE(p.results[0], 0.0);
    EXPECT_LE(p.results[0], 1.0);
  }
  EXPECT_EQ(one[0].variant, BatteryVariant::Advanced);
  EXPECT_EQ(one[1].variant, BatteryVariant::BasicLow);
  EXPECT_EQ(one[2].value, 3.5);
}

TEST(Sweep, FailuresAreRecordedPerPoint) {
  MissionConfig base;
  base.state_cap = 10;
  SweepSpec s;
  s.lo = 10;
  s.hi = 10.2;
  s.properties = {kSuccessProperty};
  const auto pts = run_sweep(base, s, 2);
  ASSERT_EQ(pts.size(), 2u);
  for (const auto& p : pts) EXPECT_FALSE(p.error.empty());
  const std::string csv = sweep_csv(s, pts);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line + "\n", report::csv_version_line());
  std::getline(in, line);
  EXPECT_EQ(line, "param,value,variant,states,transitions,\"P=? [ F \"\"success\"\" ]\"");
  std::getline(in, line);
  EXPECT_EQ(line, "c_new,10,advanced,0,0,error");

  s.properties = {"P=? [ F \"nowhere\" ]"};
  base.state_cap = 5'000'000;
  base.grid_width = base.grid_height = 2;
  base.base = {0, 0};
  EXPECT_THROW(run_sweep(base, s, 2), FormulaError);
  s.properties = {"P=? [ F"};
  EXPECT_THROW(run_sweep(base, s, 1), ParseError);
}
