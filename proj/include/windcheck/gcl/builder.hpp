#pragma once

#include <cstddef>

#include "windcheck/dtmc.hpp"
#include "windcheck/gcl/model.hpp"

namespace windcheck::gcl {

struct BuildOptions {
  /// Insert a self-loop where no command is enabled instead of failing.
  bool fix_deadlocks = false;
  std::size_t state_cap = 5'000'000;
};

/// Breadth-first exploration of the parallel composition of all modules.
///
/// Unlabeled commands fire on their own. A labeled action fires only when
/// every module that uses the label has an enabled command for it, and the
/// joint distribution is the product of the participating updates. When
/// several commands or synchronised sets are enabled in one state, each is
/// weighted 1/k, so the result is a DTMC. States are numbered in discovery
/// order; the initial valuation is state 0.
Dtmc compose_and_build(const SymbolicModel& model, const BuildOptions& options = {});

}  // namespace windcheck::gcl
