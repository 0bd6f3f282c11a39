#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "windcheck/dtmc.hpp"
#include "windcheck/pctl/formula.hpp"
#include "windcheck/pctl/solver.hpp"

namespace windcheck::pctl {

/// Probability of a state value being treated as equal to a bound.
inline constexpr double kBoundEpsilon = 1e-9;

/// States with probability exactly 0 of reaching `rhs` through `lhs`.
StateSet prob0(const Dtmc& d, const StateSet& lhs, const StateSet& rhs);
/// States with probability exactly 1 of reaching `rhs` through `lhs`.
StateSet prob1(const Dtmc& d, const StateSet& lhs, const StateSet& rhs);

std::vector<double> prob_next(const Dtmc& d, const StateSet& target);
std::vector<double> prob_bounded_until(const Dtmc& d, const StateSet& lhs, const StateSet& rhs,
                                       std::uint64_t steps);

struct NumericResult {
  std::vector<double> values;
  SolverStats stats;
  double clamp_excursion = 0.0;  // largest distance outside [0,1] before clamping
};

NumericResult prob_until(const Dtmc& d, const StateSet& lhs, const StateSet& rhs,
                         const SolverOptions& options = {});

/// Expected reward accumulated before the first visit to `target`: state
/// rewards of every non-target state visited plus transition rewards of
/// every edge taken. +inf where `target` is reached with probability < 1,
/// 0 on `target`.
NumericResult expected_reachability_reward(const Dtmc& d, const RewardStructure& r,
                                           const StateSet& target,
                                           const SolverOptions& options = {});

struct CheckResult {
  std::string formula;
  bool numeric = false;
  double value = 0.0;  // at the initial state (numeric queries)
  bool holds = false;  // at the initial state (boolean formulas)
  std::vector<double> per_state;  // numeric queries only
  StateSet satisfying;            // boolean formulas only
  std::uint64_t iterations = 0;
  double residual = 0.0;
  double clamp_excursion = 0.0;
};

class Checker {
 public:
  explicit Checker(const Dtmc& d, SolverOptions options = {}) : d_(d), options_(options) {}
  Checker(Dtmc&&, SolverOptions = {}) = delete;

  CheckResult check(const Formula& f);
  CheckResult check(std::string_view text) { return check(parse_formula(text)); }

  /// Satisfaction set of a boolean state formula.
  StateSet sat(const StateFormula& f);
  /// Per-state probabilities of a path formula.
  std::vector<double> probabilities(const PathFormula& p);

 private:
  const Dtmc& d_;
  SolverOptions options_;
  std::uint64_t iterations_ = 0;
  double residual_ = 0.0;
  double clamp_ = 0.0;

  void absorb(const NumericResult& r);
};

bool compare(double value, RelOp op, double bound);

}  // namespace windcheck::pctl
