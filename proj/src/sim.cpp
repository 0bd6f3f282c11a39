#include "windcheck/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "windcheck/philox.hpp"

namespace windcheck::sim {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Stopped: return "stopped";
    case Outcome::Absorbed: return "absorbed";
    case Outcome::Cap: return "cap";
  }
  return "?";
}

namespace {

std::vector<bool> absorbing_states(const Dtmc& d) {
  std::vector<bool> out(d.num_states());
  for (StateIndex s = 0; s < d.num_states(); ++s) out[s] = d.is_absorbing(s);
  return out;
}

// Inverse CDF over one row. Rounding can leave u above the last partial sum;
// the last positive edge takes that slack.
std::size_t pick_edge(const Dtmc& d, StateIndex s, double u) {
  const std::size_t b = d.row_begin(s), e = d.row_end(s);
  double acc = 0.0;
  std::size_t last = b;
  for (std::size_t i = b; i < e; ++i) {
    const double p = d.probability(i);
    if (p <= 0) continue;
    last = i;
    acc += p;
    if (u < acc) return i;
  }
  return last;
}

std::size_t pick_weighted_edge(const Dtmc& d, StateIndex s, std::span<const double> w, double u) {
  const std::size_t b = d.row_begin(s), e = d.row_end(s);
  double total = 0.0;
  for (std::size_t i = b; i < e; ++i) total += d.probability(i) * w[d.target(i)];
  const double x = u * total;
  double acc = 0.0;
  std::size_t last = b;
  for (std::size_t i = b; i < e; ++i) {
    const double m = d.probability(i) * w[d.target(i)];
    if (m <= 0) continue;
    last = i;
    acc += m;
    if (x < acc) return i;
  }
  return last;
}

double edge_reward(const RewardStructure& r, StateIndex s, std::size_t edge) {
  double v = r.state_rewards.empty() ? 0.0 : r.state_rewards[s];
  if (!r.transition_rewards.empty()) v += r.transition_rewards[edge];
  return v;
}

template <class Pick>
Trace walk(const Dtmc& d, std::uint64_t seed, std::uint64_t stream, const TraceOptions& options,
           Pick pick) {
  if (options.step_cap == 0) throw Error("step cap must be positive");
  const bool stop_given = options.stop.size() == d.num_states();
  Philox4x32 rng(seed, stream);
  Trace t;
  StateIndex s = d.initial();
  std::vector<double> acc(d.rewards().size(), 0.0);
  t.steps.push_back({0, s, "", acc});
  for (std::uint64_t step = 1;; ++step) {
    if (stop_given && options.stop.contains(s)) {
      t.outcome = Outcome::Stopped;
      return t;
    }
    if (d.is_absorbing(s)) {
      t.outcome = Outcome::Absorbed;
      return t;
    }
    if (step > options.step_cap) {
      t.outcome = Outcome::Cap;
      return t;
    }
    const std::size_t edge = pick(s, rng.uniform());
    for (std::size_t r = 0; r < acc.size(); ++r) acc[r] += edge_reward(d.rewards()[r], s, edge);
    s = d.target(edge);
    t.steps.push_back({step, s, std::string(d.action(edge)), acc});
  }
}

// Runs traces [0, n) sharded over threads; f(i) -> T is stored at out[i].
template <class T, class F>
std::vector<T> run_batch(std::uint64_t n, unsigned threads, F f) {
  std::vector<T> out(n);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(n, 1024))));
  if (threads == 1) {
    for (std::uint64_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (n + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::uint64_t lo = w * chunk, hi = std::min(n, lo + chunk);
    pool.emplace_back([&, lo, hi] {
      for (std::uint64_t i = lo; i < hi; ++i) out[i] = f(i);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

struct Run {
  bool hit = false;
  bool capped = false;
  double reward = 0.0;
};

// Walks one trace without recording it; stops on target, absorption or cap.
Run quick_run(const Dtmc& d, const std::vector<bool>& absorbing, const StateSet& target,
              const RewardStructure* r, std::uint64_t seed, std::uint64_t stream,
              std::uint64_t cap) {
  Philox4x32 rng(seed, stream);
  Run run;
  StateIndex s = d.initial();
  for (std::uint64_t step = 0;; ++step) {
    if (target.contains(s)) {
      run.hit = true;
      return run;
    }
    if (absorbing[s]) return run;
    if (step >= cap) {
      run.capped = true;
      return run;
    }
    const std::size_t edge = pick_edge(d, s, rng.uniform());
    if (r) run.reward += edge_reward(*r, s, edge);
    s = d.target(edge);
  }
}

void check_options(const EstimateOptions& o) {
  if (o.n == 0) throw Error("sample count must be positive");
  if (o.step_cap == 0) throw Error("step cap must be positive");
}

}  // namespace

Trace simulate_trace(const Dtmc& d, std::uint64_t seed, std::uint64_t stream,
                     const TraceOptions& options) {
  return walk(d, seed, stream, options,
              [&](StateIndex s, double u) { return pick_edge(d, s, u); });
}

Trace simulate_conditioned_trace(const Dtmc& d, std::span<const double> weight, std::uint64_t seed,
                                 std::uint64_t stream, const TraceOptions& options) {
  if (weight.size() != d.num_states()) throw Error("weight vector does not match the model");
  if (!(weight[d.initial()] > 0)) throw Error("conditioning event has probability 0");
  return walk(d, seed, stream, options,
              [&](StateIndex s, double u) { return pick_weighted_edge(d, s, weight, u); });
}

bool is_valid_trace(const Dtmc& d, const Trace& t) {
  if (t.steps.empty() || t.steps.front().state != d.initial()) return false;
  for (std::size_t i = 1; i < t.steps.size(); ++i) {
    const StateIndex a = t.steps[i - 1].state, b = t.steps[i].state;
    bool found = false;
    for (std::size_t e = d.row_begin(a); e < d.row_end(a) && !found; ++e)
      found = d.target(e) == b && d.probability(e) > 0;
    if (!found) return false;
    const auto& ra = t.steps[i - 1].rewards;
    const auto& rb = t.steps[i].rewards;
    if (ra.size() != rb.size()) return false;
    for (std::size_t r = 0; r < ra.size(); ++r)
      if (rb[r] < ra[r]) return false;
  }
  return true;
}

Estimate estimate_reach_probability(const Dtmc& d, const StateSet& target,
                                    const EstimateOptions& options) {
  check_options(options);
  const auto absorbing = absorbing_states(d);
  const auto runs = run_batch<Run>(options.n, options.threads, [&](std::uint64_t i) {
    return quick_run(d, absorbing, target, nullptr, options.seed, i, options.step_cap);
  });
  Estimate e;
  e.n = options.n;
  e.seed = options.seed;
  std::uint64_t hits = 0;
  for (const Run& r : runs) {
    hits += r.hit;
    e.truncated |= r.capped;
  }
  const double n = static_cast<double>(options.n);
  e.mean = static_cast<double>(hits) / n;
  e.half_width = 1.96 * std::sqrt(e.mean * (1.0 - e.mean) / n);
  e.degenerate = options.n == 1;
  return e;
}

Estimate estimate_reach_probability(const Dtmc& d, const std::string& target_label,
                                    const EstimateOptions& options) {
  return estimate_reach_probability(d, d.label(target_label), options);
}

Estimate estimate_expected_reward(const Dtmc& d, const std::string& reward_name,
                                  const StateSet& target, const EstimateOptions& options) {
  check_options(options);
  const RewardStructure& r = d.reward(reward_name);
  const auto absorbing = absorbing_states(d);
  const auto runs = run_batch<Run>(options.n, options.threads, [&](std::uint64_t i) {
    return quick_run(d, absorbing, target, &r, options.seed, i, options.step_cap);
  });
  Estimate e;
  e.n = options.n;
  e.seed = options.seed;
  e.degenerate = options.n == 1;
  double sum = 0.0;
  for (const Run& run : runs) {
    e.truncated |= run.capped;
    if (!run.hit && !run.capped) ++e.missed;
    sum += run.reward;
  }
  if (e.missed > 0) {
    e.mean = std::numeric_limits<double>::infinity();
    e.half_width = std::numeric_limits<double>::infinity();
    return e;
  }
  const double n = static_cast<double>(options.n);
  e.mean = sum / n;
  if (options.n > 1) {
    double ss = 0.0;
    for (const Run& run : runs) ss += (run.reward - e.mean) * (run.reward - e.mean);
    e.half_width = 1.96 * std::sqrt(ss / (n - 1.0) / n);
  }
  return e;
}

Estimate estimate_expected_reward(const Dtmc& d, const std::string& reward_name,
                                  const std::string& target_label, const EstimateOptions& options) {
  return estimate_expected_reward(d, reward_name, d.label(target_label), options);
}

}  // namespace windcheck::sim
