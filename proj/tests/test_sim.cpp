#include <gtest/gtest.h>

#include <cmath>

#include "windcheck/gcl/builder.hpp"
#include "windcheck/gcl/model.hpp"
#include "windcheck/mission.hpp"
#include "windcheck/pctl/checker.hpp"
#include "windcheck/philox.hpp"
#include "windcheck/report.hpp"
#include "windcheck/sim.hpp"

using namespace windcheck;
using namespace windcheck::sim;

namespace {

Dtmc build(std::string_view text) { return gcl::compose_and_build(gcl::parse_model(text)); }

const char* kTwoBranch = R"(
module m
  x : [0..2];
  [go] x=0 -> 0.3:(x'=1) + 0.7:(x'=2);
  [] x>0 -> true;
endmodule
label "left" = x=1;
label "end" = x>0;
rewards "steps"
  x=0 : 1;
endrewards
)";

// each round ends with probability 1/2 and earns 1
const char* kCoin = R"(
module m
  x : [0..1];
  [flip] x=0 -> 0.5:(x'=1) + 0.5:(x'=0);
  [] x=1 -> true;
endmodule
label "heads" = x=1;
rewards "r"
  [flip] true : 1;
endrewards
)";

const char* kLine = R"(
module m
  x : [0..3];
  [step] x<3 -> (x'=x+1);
  [] x=3 -> true;
endmodule
label "end" = x=3;
rewards "r"
  x<3 : 1;
endrewards
)";

EstimateOptions opts(std::uint64_t n, std::uint64_t seed = 1, unsigned threads = 1) {
  EstimateOptions o;
  o.n = n;
  o.seed = seed;
  o.threads = threads;
  return o;
}

}  // namespace

TEST(Philox, KnownAnswerVectors) {
  using B = Philox4x32::Block;
  EXPECT_EQ(Philox4x32::block({0, 0}, 0, 0), (B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32::block({0xffffffff, 0xffffffff}, ~0ull, ~0ull),
            (B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32::block({0xa4093822, 0x299f31d0}, 0x0370734413198a2eull, 0x85a308d3243f6a88ull),
            (B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, UniformRangeAndStreams) {
  Philox4x32 a(7, 0), b(7, 0), c(7, 1);
  bool differs = false;
  double sum = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = a.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    EXPECT_EQ(u, b.uniform());
    differs |= u != c.uniform();
    sum += u;
  }
  EXPECT_TRUE(differs);
  EXPECT_NEAR(sum / 10000, 0.5, 0.02);
}

TEST(Estimate, ProbabilityWithinTheInterval) {
  const Dtmc d = build(kTwoBranch);
  const auto e = estimate_reach_probability(d, "left", opts(100000, 42));
  const double sigma = e.half_width / 1.96;
  EXPECT_NEAR(e.mean, 0.3, 3 * sigma);
  EXPECT_NEAR(sigma, std::sqrt(0.3 * 0.7 / 100000), 1e-4);
  EXPECT_EQ(e.n, 100000u);
  EXPECT_FALSE(e.truncated);
}

TEST(Estimate, GeometricRewardMean) {
  const Dtmc d = build(kCoin);
  const auto e = estimate_expected_reward(d, "r", "heads", opts(100000, 3));
  EXPECT_NEAR(e.mean, 2.0, 3 * e.half_width / 1.96);
  EXPECT_EQ(e.missed, 0u);
}

TEST(Estimate, DeterministicRewardHasZeroWidth) {
  const Dtmc d = build(kLine);
  const auto e = estimate_expected_reward(d, "r", "end", opts(1000));
  EXPECT_EQ(e.mean, 3.0);
  EXPECT_EQ(e.half_width, 0.0);
  pctl::Checker k(d);
  EXPECT_EQ(k.check("R{\"r\"}=? [ F \"end\" ]").value, e.mean);
}

TEST(Estimate, MissedTargetGivesInfiniteReward) {
  const Dtmc d = build(kTwoBranch);
  const auto e = estimate_expected_reward(d, "steps", "left", opts(100));
  EXPECT_GT(e.missed, 0u);
  EXPECT_TRUE(std::isinf(e.mean));
  EXPECT_TRUE(std::isinf(e.half_width));
}

TEST(Estimate, SingleSampleIsFlaggedDegenerate) {
  const Dtmc d = build(kTwoBranch);
  const auto e = estimate_reach_probability(d, "left", opts(1));
  EXPECT_TRUE(e.degenerate);
  EXPECT_TRUE(e.mean == 0.0 || e.mean == 1.0);
  EXPECT_THROW(estimate_reach_probability(d, "left", opts(0)), Error);
}

TEST(Estimate, SameSeedSameResultForAnyThreadCount) {
  const Dtmc d = build_mission_model(scenario_preset(3));
  const auto one = estimate_expected_reward(d, "mt", "done", opts(2000, 9, 1));
  for (unsigned t : {2u, 4u, 7u}) {
    const auto many = estimate_expected_reward(d, "mt", "done", opts(2000, 9, t));
    EXPECT_EQ(one.mean, many.mean) << t;
    EXPECT_EQ(one.half_width, many.half_width) << t;
  }
  const auto other = estimate_expected_reward(d, "mt", "done", opts(2000, 10, 1));
  EXPECT_NE(one.mean, other.mean);
}

// Property: every sampled trace follows positive edges with monotone rewards
// and replays identically from its (seed, stream).
TEST(Trace, ValidAndReplayable) {
  const Dtmc d = build_mission_model(scenario_preset(4));
  TraceOptions o;
  o.stop = d.label("done");
  for (std::uint64_t stream = 0; stream < 20; ++stream) {
    const Trace t = simulate_trace(d, 5, stream, o);
    ASSERT_TRUE(is_valid_trace(d, t)) << stream;
    EXPECT_EQ(t.outcome, Outcome::Stopped);
    EXPECT_TRUE(o.stop.contains(t.last()));
    const Trace again = simulate_trace(d, 5, stream, o);
    ASSERT_EQ(again.steps.size(), t.steps.size());
    for (std::size_t i = 0; i < t.steps.size(); ++i) EXPECT_EQ(again.steps[i].state, t.steps[i].state);
  }
}

TEST(Trace, StepCapTruncates) {
  const Dtmc d = build(kCoin);
  TraceOptions o;
  o.step_cap = 1;
  int capped = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Trace t = simulate_trace(d, 1, s, o);
    EXPECT_LE(t.steps.size(), 2u);
    capped += t.outcome == Outcome::Cap;
  }
  EXPECT_GT(capped, 0);
}

TEST(Trace, ConditionedTracesReachTheEvent) {
  auto c = scenario_preset(4);
  c.battery.c_new = 12.8;
  const Dtmc d = build_mission_model(c);
  pctl::Checker k(d);
  const auto fail = k.check("P=? [ F \"fail\" ]");
  ASSERT_GT(fail.value, 0.0);
  TraceOptions o;
  o.stop = d.label("done");
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Trace t = simulate_conditioned_trace(d, fail.per_state, 2, s, o);
    EXPECT_TRUE(is_valid_trace(d, t));
    EXPECT_TRUE(d.label("fail").contains(t.last())) << s;
  }
  const auto never = k.check("P=? [ F false ]");
  EXPECT_THROW(simulate_conditioned_trace(d, never.per_state, 2, 0, o), Error);
}

TEST(Trace, CsvHasOneRowPerStep) {
  const Dtmc d = build(kLine);
  const Trace t = simulate_trace(d, 1);
  EXPECT_EQ(t.outcome, Outcome::Absorbed);
  const std::string csv = report::trace_csv(d, t);
  EXPECT_EQ(csv.rfind(report::csv_version_line(), 0), 0u);
  EXPECT_NE(csv.find("step,action,x,r_accum\n"), std::string::npos);
  EXPECT_NE(csv.find("3,step,3,3\n"), std::string::npos);
}
