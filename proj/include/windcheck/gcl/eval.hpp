#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "windcheck/gcl/model.hpp"

namespace windcheck::gcl {

/// Evaluates resolved expressions against one state at a time. Formula values
/// are memoised per bound state, so chains of formulas that reference each
/// other several times stay linear in cost.
class Evaluator {
 public:
  explicit Evaluator(const SymbolicModel& model);

  void bind(std::span<const std::int32_t> state);

  double eval(const Expr& e);
  bool test(const Expr& e) { return eval(e) != 0.0; }

  /// Exact evaluation for probability expressions. Supports literals,
  /// variables, formulas, + - * /, unary minus, min/max and conditionals.
  Rational eval_exact(const Expr& e);

 private:
  const SymbolicModel& model_;
  std::span<const std::int32_t> state_;
  std::vector<double> memo_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t generation_ = 1;
};

}  // namespace windcheck::gcl
