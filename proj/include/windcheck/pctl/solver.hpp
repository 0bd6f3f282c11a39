#pragma once

#include <cstdint>
#include <vector>

#include "windcheck/dtmc.hpp"

namespace windcheck::pctl {

enum class Method : std::uint8_t {
  Automatic,    // direct below `direct_limit` unknowns, Gauss-Seidel above
  GaussSeidel,
  Direct,
};

struct SolverOptions {
  Method method = Method::Automatic;
  double tolerance = 1e-10;
  std::uint64_t max_iterations = 100000;
  std::size_t direct_limit = 512;
};

struct SolverStats {
  Method method = Method::Automatic;  // the one actually used
  std::uint64_t iterations = 0;
  double residual = 0.0;
};

/// Solves x_s = b_s + sum_t P(s,t) x_t for every s in `unknown`. Entries of
/// `x` outside `unknown` are read as fixed boundary values; entries inside
/// are used as the starting point. Iteration sweeps states in descending
/// index order; the residual is max |x' - x| / max(1, |x'|).
/// Throws NumericError when Gauss-Seidel does not reach the tolerance within
/// the iteration cap, or when the direct system is singular.
SolverStats solve(const Dtmc& d, const StateSet& unknown, const std::vector<double>& b,
                  std::vector<double>& x, const SolverOptions& options = {});

}  // namespace windcheck::pctl
