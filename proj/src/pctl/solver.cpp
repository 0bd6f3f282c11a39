#include "windcheck/pctl/solver.hpp"

#include <algorithm>
#include <cmath>

namespace windcheck::pctl {

namespace {

SolverStats gauss_seidel(const Dtmc& d, const std::vector<StateIndex>& order,
                         const std::vector<double>& b, std::vector<double>& x,
                         const SolverOptions& opt) {
  SolverStats st;
  st.method = Method::GaussSeidel;
  if (order.empty()) return st;
  for (std::uint64_t it = 1; it <= opt.max_iterations; ++it) {
    double residual = 0.0;
    for (auto s_it = order.rbegin(); s_it != order.rend(); ++s_it) {
      const StateIndex s = *s_it;
      double acc = b[s];
      double self = 0.0;
      for (std::size_t e = d.row_begin(s); e < d.row_end(s); ++e) {
        const StateIndex t = d.target(e);
        if (t == s)
          self += d.probability(e);
        else
          acc += d.probability(e) * x[t];
      }
      // a state whose only remaining mass is a self-loop is never an unknown
      const double next = self < 1.0 ? acc / (1.0 - self) : acc;
      const double diff = std::abs(next - x[s]) / std::max(1.0, std::abs(next));
      residual = std::max(residual, diff);
      x[s] = next;
    }
    st.iterations = it;
    st.residual = residual;
    if (residual <= opt.tolerance) return st;
  }
  throw NumericError("iterative solver did not converge", st.iterations, st.residual);
}

SolverStats direct(const Dtmc& d, const std::vector<StateIndex>& order,
                   const std::vector<double>& b, std::vector<double>& x) {
  SolverStats st;
  st.method = Method::Direct;
  const std::size_t n = order.size();
  if (n == 0) return st;
  std::vector<std::size_t> pos(d.num_states(), n);
  for (std::size_t i = 0; i < n; ++i) pos[order[i]] = i;

  // row-major augmented system (I - P_uu) x_u = b_u + P_uf x_f
  const std::size_t w = n + 1;
  std::vector<double> m(n * w, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const StateIndex s = order[i];
    m[i * w + i] = 1.0;
    double rhs = b[s];
    for (std::size_t e = d.row_begin(s); e < d.row_end(s); ++e) {
      const StateIndex t = d.target(e);
      if (pos[t] < n)
        m[i * w + pos[t]] -= d.probability(e);
      else
        rhs += d.probability(e) * x[t];
    }
    m[i * w + n] = rhs;
  }

  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m[r * w + c]) > std::abs(m[piv * w + c])) piv = r;
    if (std::abs(m[piv * w + c]) < 1e-300) throw NumericError("singular linear system", 0, 0.0);
    if (piv != c)
      std::swap_ranges(m.begin() + c * w, m.begin() + (c + 1) * w, m.begin() + piv * w);
    const double inv = 1.0 / m[c * w + c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = m[r * w + c] * inv;
      if (f == 0.0) continue;
      for (std::size_t k = c; k < w; ++k) m[r * w + k] -= f * m[c * w + k];
    }
  }
  for (std::size_t c = n; c-- > 0;) {
    double v = m[c * w + n];
    for (std::size_t k = c + 1; k < n; ++k) v -= m[c * w + k] * x[order[k]];
    x[order[c]] = v / m[c * w + c];
  }

  // report the fixed-point residual of the computed solution
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const StateIndex s = order[i];
    double acc = b[s];
    for (std::size_t e = d.row_begin(s); e < d.row_end(s); ++e) acc += d.probability(e) * x[d.target(e)];
    residual = std::max(residual, std::abs(acc - x[s]) / std::max(1.0, std::abs(acc)));
  }
  st.iterations = 1;
  st.residual = residual;
  return st;
}

}  // namespace

SolverStats solve(const Dtmc& d, const StateSet& unknown, const std::vector<double>& b,
                  std::vector<double>& x, const SolverOptions& options) {
  const std::vector<StateIndex> order = unknown.indices();
  Method m = options.method;
  if (m == Method::Automatic) m = order.size() <= options.direct_limit ? Method::Direct : Method::GaussSeidel;
  if (m == Method::Direct) return direct(d, order, b, x);
  return gauss_seidel(d, order, b, x, options);
}

}  // namespace windcheck::pctl
