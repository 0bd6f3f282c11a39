#include "windcheck/pctl/checker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace windcheck::pctl {

StateSet prob0(const Dtmc& d, const StateSet& lhs, const StateSet& rhs) {
  return backward_reachable(d, rhs, lhs).complement();
}

StateSet prob1(const Dtmc& d, const StateSet& lhs, const StateSet& rhs) {
  const StateSet no = prob0(d, lhs, rhs);
  return backward_reachable(d, no, lhs.minus(rhs)).complement();
}

std::vector<double> prob_next(const Dtmc& d, const StateSet& target) {
  std::vector<double> x(d.num_states(), 0.0);
  for (StateIndex s = 0; s < d.num_states(); ++s) {
    double acc = 0.0;
    for (std::size_t e = d.row_begin(s); e < d.row_end(s); ++e)
      if (target.contains(d.target(e))) acc += d.probability(e);
    x[s] = std::min(acc, 1.0);
  }
  return x;
}

std::vector<double> prob_bounded_until(const Dtmc& d, const StateSet& lhs, const StateSet& rhs,
                                       std::uint64_t steps) {
  const std::size_t n = d.num_states();
  std::vector<double> x(n, 0.0);
  for (StateIndex s = 0; s < n; ++s) x[s] = rhs.contains(s) ? 1.0 : 0.0;
  // only states that can still reach rhs through lhs change
  const StateSet live = backward_reachable(d, rhs, lhs).minus(rhs);
  const std::vector<StateIndex> todo = live.indices();
  std::vector<double> next = x;
  for (std::uint64_t k = 0; k < steps; ++k) {
    for (StateIndex s : todo) {
      double acc = 0.0;
      for (std::size_t e = d.row_begin(s); e < d.row_end(s); ++e) acc += d.probability(e) * x[d.target(e)];
      next[s] = std::min(acc, 1.0);
    }
    x.swap(next);
    for (StateIndex s : todo) next[s] = x[s];
  }
  return x;
}

namespace {

double clamp_unit(std::vector<double>& v) {
  double excursion = 0.0;
  for (double& p : v) {
    if (p < 0.0) {
      excursion = std::max(excursion, -p);
      p = 0.0;
    } else if (p > 1.0) {
      excursion = std::max(excursion, p - 1.0);
      p = 1.0;
    }
  }
  return excursion;
}

}  // namespace

NumericResult prob_until(const Dtmc& d, const StateSet& lhs, const StateSet& rhs,
                         const SolverOptions& options) {
  const StateSet no = prob0(d, lhs, rhs);
  const StateSet yes = prob1(d, lhs, rhs);
  const StateSet maybe = no.complement().minus(yes);

  NumericResult r;
  r.values.assign(d.num_states(), 0.0);
  for (StateIndex s = 0; s < d.num_states(); ++s)
    if (yes.contains(s)) r.values[s] = 1.0;
  const std::vector<double> b(d.num_states(), 0.0);
  r.stats = solve(d, maybe, b, r.values, options);
  r.clamp_excursion = clamp_unit(r.values);
  return r;
}

NumericResult expected_reachability_reward(const Dtmc& d, const RewardStructure& rew,
                                           const StateSet& target, const SolverOptions& options) {
  const std::size_t n = d.num_states();
  const StateSet all(n, true);
  const StateSet sure = prob1(d, all, target);
  const StateSet unknown = sure.minus(target);

  NumericResult r;
  r.values.assign(n, std::numeric_limits<double>::infinity());
  std::vector<double> b(n, 0.0);
  for (StateIndex s = 0; s < n; ++s) {
    if (target.contains(s)) {
      r.values[s] = 0.0;
    } else if (unknown.contains(s)) {
      r.values[s] = 0.0;
      double acc = rew.state_rewards.empty() ? 0.0 : rew.state_rewards[s];
      if (!rew.transition_rewards.empty())
        for (std::size_t e = d.row_begin(s); e < d.row_end(s); ++e)
          acc += d.probability(e) * rew.transition_rewards[e];
      b[s] = acc;
    }
  }
  r.stats = solve(d, unknown, b, r.values, options);
  for (StateIndex s : unknown.indices()) {
    if (r.values[s] < 0.0) {
      r.clamp_excursion = std::max(r.clamp_excursion, -r.values[s]);
      r.values[s] = 0.0;
    }
  }
  return r;
}

bool compare(double v, RelOp op, double bound) {
  switch (op) {
    case RelOp::Ge: return v >= bound - kBoundEpsilon;
    case RelOp::Gt: return v > bound + kBoundEpsilon;
    case RelOp::Le: return v <= bound + kBoundEpsilon;
    case RelOp::Lt: return v < bound - kBoundEpsilon;
    case RelOp::Eq: return std::abs(v - bound) <= kBoundEpsilon;
    case RelOp::Ne: return std::abs(v - bound) > kBoundEpsilon;
  }
  return false;
}

void Checker::absorb(const NumericResult& r) {
  iterations_ += r.stats.iterations;
  residual_ = std::max(residual_, r.stats.residual);
  clamp_ = std::max(clamp_, r.clamp_excursion);
}

namespace {

bool compare_int(std::int64_t v, RelOp op, std::int64_t c) {
  switch (op) {
    case RelOp::Eq: return v == c;
    case RelOp::Ne: return v != c;
    case RelOp::Lt: return v < c;
    case RelOp::Le: return v <= c;
    case RelOp::Gt: return v > c;
    case RelOp::Ge: return v >= c;
  }
  return false;
}

}  // namespace

StateSet Checker::sat(const StateFormula& f) {
  using K = StateFormula::Kind;
  const std::size_t n = d_.num_states();
  switch (f.kind) {
    case K::True: return StateSet(n, true);
    case K::False: return StateSet(n, false);
    case K::Label: return d_.label(f.name);
    case K::VarCompare: {
      const auto& names = d_.variable_names();
      auto it = std::find(names.begin(), names.end(), f.name);
      if (it == names.end()) throw FormulaError("unknown variable '" + f.name + "'");
      const std::size_t col = static_cast<std::size_t>(it - names.begin());
      StateSet out(n);
      for (StateIndex s = 0; s < n; ++s)
        if (compare_int(d_.valuation(s)[col], f.op, f.value)) out.insert(s);
      return out;
    }
    case K::Not: return sat(*f.lhs).complement();
    case K::And: return sat(*f.lhs) & sat(*f.rhs);
    case K::Or: return sat(*f.lhs) | sat(*f.rhs);
    case K::ProbBound: {
      const std::vector<double> p = probabilities(*f.path);
      StateSet out(n);
      for (StateIndex s = 0; s < n; ++s)
        if (compare(p[s], f.op, f.bound)) out.insert(s);
      return out;
    }
    case K::ProbQuery:
    case K::RewardQuery:
      throw FormulaError("numerical query used as a state formula");
  }
  return StateSet(n);
}

std::vector<double> Checker::probabilities(const PathFormula& p) {
  switch (p.kind) {
    case PathFormula::Kind::Next: return prob_next(d_, sat(*p.rhs));
    case PathFormula::Kind::BoundedUntil: return prob_bounded_until(d_, sat(*p.lhs), sat(*p.rhs), p.steps);
    case PathFormula::Kind::Until: {
      NumericResult r = prob_until(d_, sat(*p.lhs), sat(*p.rhs), options_);
      absorb(r);
      return std::move(r.values);
    }
  }
  return {};
}

CheckResult Checker::check(const Formula& f) {
  iterations_ = 0;
  residual_ = 0.0;
  clamp_ = 0.0;
  CheckResult out;
  out.formula = to_string(*f);
  using K = StateFormula::Kind;
  if (f->kind == K::ProbQuery) {
    out.numeric = true;
    out.per_state = probabilities(*f->path);
  } else if (f->kind == K::RewardQuery) {
    out.numeric = true;
    NumericResult r = expected_reachability_reward(d_, d_.reward(f->name), sat(*f->rhs), options_);
    absorb(r);
    out.per_state = std::move(r.values);
  } else {
    out.satisfying = sat(*f);
    out.holds = out.satisfying.contains(d_.initial());
  }
  if (out.numeric) out.value = out.per_state[d_.initial()];
  out.iterations = iterations_;
  out.residual = residual_;
  out.clamp_excursion = clamp_;
  return out;
}

}  // namespace windcheck::pctl
