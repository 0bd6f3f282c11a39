#include <gtest/gtest.h>

#include <cmath>

#include "windcheck/gcl/builder.hpp"
#include "windcheck/gcl/model.hpp"

using namespace windcheck;

namespace {

Dtmc build(std::string_view text, gcl::BuildOptions opt = {}) {
  return gcl::compose_and_build(gcl::parse_model(text), opt);
}

double edge_prob(const Dtmc& d, StateIndex s, StateIndex t) {
  for (std::size_t e = d.row_begin(s); e < d.row_end(s); ++e)
    if (d.target(e) == t) return d.probability(e);
  return 0.0;
}

SourcePos error_pos(std::string_view text) {
  try {
    gcl::parse_model(text);
  } catch (const ParseError& e) {
    return e.pos();
  }
  ADD_FAILURE() << "expected ParseError";
  return {};
}

}  // namespace

TEST(GclParser, ConstantsFormulasAndLabels) {
  const auto m = gcl::parse_model(R"(
dtmc
const int N = 3;
const double p = 1/4;
const bool on = true;
formula top = x = N;
module m
  x : [0..N] init 1;
  [] !top & on -> p:(x'=x+1) + 1-p:(x'=x);
  [] top -> true;
endmodule
label "top" = top;
)");
  EXPECT_EQ(m.constants.size(), 3u);
  EXPECT_EQ(m.variables.size(), 1u);
  EXPECT_EQ(m.variables[0].lo, 0);
  EXPECT_EQ(m.variables[0].hi, 3);
  EXPECT_EQ(m.variables[0].initial, 1);
  EXPECT_EQ(m.num_commands(), 2u);
  EXPECT_EQ(m.find_variable("x"), 0);
  EXPECT_EQ(m.find_variable("y"), -1);
}

TEST(GclParser, ErrorsCarryLineAndColumn) {
  SourcePos p = error_pos("module m\n  x : [0..2] init 0;\n  [] x=0 -> (y'=1);\nendmodule\n");
  EXPECT_EQ(p.line, 3u);
  p = error_pos("module m\n  x : [0..2] init 5;\nendmodule\n");
  EXPECT_EQ(p.line, 2u);
  p = error_pos("module m\n  x : [0..2];\n  [] true -> 0.5:(x'=1) + 0.4:(x'=2);\nendmodule\n");
  EXPECT_EQ(p.line, 3u);
  p = error_pos("const int a = b;\nconst int b = a;\n");
  EXPECT_GE(p.line, 1u);
  p = error_pos("module m\n  x : [0..2];\n  [] x -> true;\nendmodule\n");
  EXPECT_EQ(p.line, 3u);
  p = error_pos("module m\n  x : [0..2];\n  [] true -> (x'=x/2);\nendmodule\n");
  EXPECT_EQ(p.line, 3u);
  error_pos("module m\n  x : [0..2];\nendmodule\nmodule m\n  y : [0..2];\nendmodule\n");
  error_pos("module m\n  x : [0..2];\n  [] true -> (x'=1)\nendmodule\n");
}

TEST(GclParser, RejectsAssignmentsToOtherModules) {
  EXPECT_THROW(gcl::parse_model(R"(
module a
  x : [0..1];
  [] true -> (x'=0);
endmodule
module b
  y : [0..1];
  [] true -> (x'=1);
endmodule
)"),
               ParseError);
}

TEST(GclParser, ProbabilitiesAreCheckedExactly) {
  // 0.1 + 0.2 + 0.7 is not 1 in binary floating point, but is as rationals
  EXPECT_NO_THROW(gcl::parse_model(R"(
module m
  x : [0..2];
  [] true -> 0.1:(x'=0) + 0.2:(x'=1) + 0.7:(x'=2);
endmodule
)"));
  EXPECT_NO_THROW(gcl::parse_model(R"(
module m
  x : [0..2];
  [] true -> 1/3:(x'=0) + 1/3:(x'=1) + 1/3:(x'=2);
endmodule
)"));
  EXPECT_THROW(gcl::parse_model(R"(
module m
  x : [0..2];
  [] true -> 0.3333:(x'=0) + 0.3333:(x'=1) + 0.3333:(x'=2);
endmodule
)"),
               ParseError);
}

TEST(GclBuilder, SynchronisedActionsMultiply) {
  const Dtmc d = build(R"(
module a
  x : [0..1];
  [go] x=0 -> 0.5:(x'=1) + 0.5:(x'=0);
  [] x=1 -> true;
endmodule
module b
  y : [0..1];
  [go] y=0 -> 0.2:(y'=1) + 0.8:(y'=0);
  [go] y=1 -> true;
endmodule
)");
  // initial (0,0): four successors with product probabilities
  ASSERT_EQ(d.successors(0).size(), 4u);
  double sum = 0;
  for (double p : d.row_probabilities(0)) sum += p;
  EXPECT_NEAR(sum, 1.0, 1e-15);
  const auto& names = d.variable_names();
  ASSERT_EQ(names.size(), 2u);
  for (std::size_t e = d.row_begin(0); e < d.row_end(0); ++e) {
    const auto v = d.valuation(d.target(e));
    const double want = (v[0] ? 0.5 : 0.5) * (v[1] ? 0.2 : 0.8);
    EXPECT_DOUBLE_EQ(d.probability(e), want);
    EXPECT_EQ(d.action(e), "go");
  }
}

TEST(GclBuilder, BlockedSynchronisationDoesNotFire) {
  const Dtmc d = build(R"(
module a
  x : [0..1];
  [go] x=0 -> (x'=1);
  [] true -> true;
endmodule
module b
  y : [0..1];
  [go] y=1 -> (y'=0);
endmodule
)");
  EXPECT_EQ(d.num_states(), 1u);
  EXPECT_TRUE(d.is_absorbing(0));
}

TEST(GclBuilder, NondeterminismIsUniform) {
  const Dtmc d = build(R"(
module m
  x : [0..3];
  [] x=0 -> (x'=1);
  [] x=0 -> (x'=2);
  [] x=0 -> 0.5:(x'=2) + 0.5:(x'=3);
  [] x>0 -> true;
endmodule
)");
  EXPECT_NEAR(edge_prob(d, 0, 1), 1.0 / 3, 1e-15);
  EXPECT_NEAR(edge_prob(d, 0, 2), 0.5, 1e-15);
  EXPECT_NEAR(edge_prob(d, 0, 3), 1.0 / 6, 1e-15);
}

TEST(GclBuilder, DeadlocksAndOverflow) {
  const char* dead = R"(
module m
  x : [0..2];
  [] x<2 -> (x'=x+1);
endmodule
)";
  EXPECT_THROW(build(dead), ModelError);
  gcl::BuildOptions fix;
  fix.fix_deadlocks = true;
  const Dtmc d = build(dead, fix);
  EXPECT_EQ(d.num_states(), 3u);
  EXPECT_TRUE(d.is_absorbing(2));

  EXPECT_THROW(build(R"(
module m
  x : [0..2];
  [] true -> (x'=x+1);
endmodule
)"),
               ModelError);
}

TEST(GclBuilder, StateCap) {
  gcl::BuildOptions opt;
  opt.state_cap = 10;
  EXPECT_THROW(build(R"(
module m
  x : [0..100];
  [] x<100 -> (x'=x+1);
  [] x=100 -> true;
endmodule
)",
                     opt),
               ModelError);
}

TEST(GclBuilder, RewardsAndLabels) {
  const Dtmc d = build(R"(
module m
  x : [0..2];
  [a] x=0 -> 0.5:(x'=1) + 0.5:(x'=2);
  [b] x>0 -> true;
endmodule
label "odd" = x=1;
rewards "r"
  x=0 : 2;
  x>=0 : 1;
  [a] true : 0.5;
endrewards
)");
  const auto& r = d.reward("r");
  EXPECT_DOUBLE_EQ(r.state_rewards[0], 3.0);  // matching items add up
  EXPECT_DOUBLE_EQ(r.state_rewards[1], 1.0);
  for (std::size_t e = d.row_begin(0); e < d.row_end(0); ++e) EXPECT_DOUBLE_EQ(r.transition_rewards[e], 0.5);
  EXPECT_EQ(d.label("odd").count(), 1u);
  EXPECT_THROW(d.label("even"), FormulaError);
}

// Property: the probability distribution of every built state sums to one
// and states are numbered in breadth-first discovery order.
TEST(GclBuilder, RowsAreStochasticAndBfsOrdered) {
  const Dtmc d = build(R"(
const double p = 0.37;
module a
  x : [0..4];
  [t] x<4 -> p:(x'=x+1) + 1-p:(x'=0);
  [t] x=4 -> (x'=0);
endmodule
module b
  y : [0..3];
  [t] true -> 1/3:(y'=mod(y+1, 4)) + 2/3:(y'=y);
  [] y=3 -> (y'=0);
endmodule
)");
  ASSERT_TRUE(validate(d).ok());
  StateIndex max_seen = 0;
  for (StateIndex s = 0; s < d.num_states(); ++s) {
    double sum = 0;
    for (std::size_t e = d.row_begin(s); e < d.row_end(s); ++e) {
      sum += d.probability(e);
      // a successor index may exceed everything seen so far by at most one new block
      max_seen = std::max(max_seen, d.target(e));
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_LE(s, max_seen + 1);
  }
  EXPECT_EQ(d.num_states(), 20u);
}
