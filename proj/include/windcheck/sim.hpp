#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "windcheck/dtmc.hpp"

namespace windcheck::sim {

enum class Outcome : std::uint8_t {
  Stopped,   // entered the stop set
  Absorbed,  // reached an absorbing state outside the stop set
  Cap,       // step cap hit
};

const char* to_string(Outcome o);

struct TraceStep {
  std::uint64_t step = 0;
  StateIndex state = 0;
  std::string action;  // action that led here; empty for the first step
  // accumulated value of each reward structure, aligned with Dtmc::rewards()
  std::vector<double> rewards;
};

struct Trace {
  std::vector<TraceStep> steps;
  Outcome outcome = Outcome::Cap;

  StateIndex last() const { return steps.back().state; }
};

struct TraceOptions {
  std::uint64_t step_cap = 1'000'000;
  StateSet stop;  // empty set: run until absorption or the cap
};

/// Samples one path from the initial state. The randomness of trace `stream`
/// under `seed` is fixed, so any trace can be regenerated on its own.
Trace simulate_trace(const Dtmc& d, std::uint64_t seed, std::uint64_t stream = 0,
                     const TraceOptions& options = {});

/// Samples a path conditioned on the event whose per-state probability is
/// `weight` (e.g. reaching "fail"): each edge s -> t is drawn with
/// probability P(s,t) * weight[t] / weight[s]. Requires weight[initial] > 0.
Trace simulate_conditioned_trace(const Dtmc& d, std::span<const double> weight, std::uint64_t seed,
                                 std::uint64_t stream = 0, const TraceOptions& options = {});

/// Checks that consecutive trace states are joined by positive-probability
/// edges and that accumulated rewards never decrease.
bool is_valid_trace(const Dtmc& d, const Trace& t);

struct Estimate {
  double mean = 0.0;
  double half_width = 0.0;  // 95% normal approximation
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  bool truncated = false;   // some trace hit the step cap
  bool degenerate = false;  // n = 1; half_width carries no information
  std::uint64_t missed = 0; // reward runs absorbed outside the target (mean is +inf then)
};

struct EstimateOptions {
  std::uint64_t n = 100'000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::uint64_t step_cap = 1'000'000;
};

/// Fraction of traces that reach `target`.
Estimate estimate_reach_probability(const Dtmc& d, const StateSet& target,
                                    const EstimateOptions& options);
Estimate estimate_reach_probability(const Dtmc& d, const std::string& target_label,
                                    const EstimateOptions& options);

/// Mean reward accumulated until `target` is first entered, with the same
/// accumulation as the exact checker (state reward on leaving a state plus
/// the reward of the edge taken).
Estimate estimate_expected_reward(const Dtmc& d, const std::string& reward_name,
                                  const StateSet& target, const EstimateOptions& options);
Estimate estimate_expected_reward(const Dtmc& d, const std::string& reward_name,
                                  const std::string& target_label, const EstimateOptions& options);

}  // namespace windcheck::sim
