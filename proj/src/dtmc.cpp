#include "windcheck/dtmc.hpp"

#include <cmath>
#include <deque>
#include <sstream>

namespace windcheck {

StateSet StateSet::from_indices(std::size_t n, std::span<const StateIndex> indices) {
  StateSet s(n);
  for (StateIndex i : indices) s.insert(i);
  return s;
}

std::size_t StateSet::count() const {
  std::size_t c = 0;
  for (bool b : bits_) c += b ? 1 : 0;
  return c;
}

std::vector<StateIndex> StateSet::indices() const {
  std::vector<StateIndex> out;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out.push_back(static_cast<StateIndex>(i));
  return out;
}

StateSet StateSet::complement() const {
  StateSet r(size());
  for (std::size_t i = 0; i < size(); ++i) r.bits_[i] = !bits_[i];
  return r;
}

StateSet StateSet::operator&(const StateSet& o) const {
  StateSet r(size());
  for (std::size_t i = 0; i < size(); ++i) r.bits_[i] = bits_[i] && o.bits_[i];
  return r;
}

StateSet StateSet::operator|(const StateSet& o) const {
  StateSet r(size());
  for (std::size_t i = 0; i < size(); ++i) r.bits_[i] = bits_[i] || o.bits_[i];
  return r;
}

StateSet StateSet::minus(const StateSet& o) const {
  StateSet r(size());
  for (std::size_t i = 0; i < size(); ++i) r.bits_[i] = bits_[i] && !o.bits_[i];
  return r;
}

// ---------------------------------------------------------------------------

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : row_sum_violations)
    os << "state " << v.state << ": outgoing probabilities sum to " << v.sum << "\n";
  for (const auto& p : problems) os << p << "\n";
  for (const auto& l : dangling_labels) os << "label \"" << l << "\" refers to a missing state\n";
  if (!unreachable.empty()) os << unreachable.size() << " unreachable state(s)\n";
  return os.str();
}

ValidationReport validate(const DtmcParts& p) {
  ValidationReport r;
  const std::size_t n = p.num_states;
  if (n == 0) {
    r.problems.push_back("model has no states");
    return r;
  }
  if (p.initial >= n) r.problems.push_back("initial state " + std::to_string(p.initial) + " out of range");
  if (p.row_offsets.size() != n + 1 || p.row_offsets.front() != 0 ||
      p.row_offsets.back() != p.targets.size() || p.probabilities.size() != p.targets.size()) {
    r.problems.push_back("inconsistent row structure");
    return r;
  }
  if (!p.edge_actions.empty() && p.edge_actions.size() != p.targets.size())
    r.problems.push_back("edge action list does not match transition count");

  for (std::size_t s = 0; s < n; ++s) {
    if (p.row_offsets[s] > p.row_offsets[s + 1]) {
      r.problems.push_back("row offsets not monotone at state " + std::to_string(s));
      return r;
    }
    double sum = 0.0;
    for (std::size_t e = p.row_offsets[s]; e < p.row_offsets[s + 1]; ++e) {
      double pr = p.probabilities[e];
      if (p.targets[e] >= n)
        r.problems.push_back("state " + std::to_string(s) + ": transition to missing state " +
                             std::to_string(p.targets[e]));
      if (!(pr > 0.0 && pr <= 1.0))
        r.problems.push_back("state " + std::to_string(s) + ": probability outside (0,1]");
      if (!p.edge_actions.empty() && p.edge_actions[e] != kNoAction &&
          p.edge_actions[e] >= p.action_names.size())
        r.problems.push_back("state " + std::to_string(s) + ": unknown action index");
      sum += pr;
    }
    if (!(std::fabs(sum - 1.0) <= kRowSumTolerance))
      r.row_sum_violations.push_back({static_cast<StateIndex>(s), sum});
  }

  for (const auto& [name, idx] : p.labels) {
    for (StateIndex i : idx)
      if (i >= n) {
        r.dangling_labels.push_back(name);
        break;
      }
  }

  for (const auto& rw : p.rewards) {
    if (rw.state_rewards.size() != n || rw.transition_rewards.size() != p.targets.size()) {
      r.problems.push_back("reward structure \"" + rw.name + "\" has the wrong size");
      continue;
    }
    auto bad = [](double v) { return !(v >= 0.0) || !std::isfinite(v); };
    for (double v : rw.state_rewards)
      if (bad(v)) {
        r.problems.push_back("reward structure \"" + rw.name + "\" has a negative or non-finite value");
        break;
      }
    for (double v : rw.transition_rewards)
      if (bad(v)) {
        r.problems.push_back("reward structure \"" + rw.name + "\" has a negative or non-finite value");
        break;
      }
  }

  if (!p.variable_names.empty() && p.valuations.size() != n * p.variable_names.size())
    r.problems.push_back("valuation table does not match state count");

  if (r.problems.empty() && p.initial < n) {
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{p.initial};
    seen[p.initial] = true;
    while (!queue.empty()) {
      std::size_t s = queue.front();
      queue.pop_front();
      for (std::size_t e = p.row_offsets[s]; e < p.row_offsets[s + 1]; ++e) {
        StateIndex t = p.targets[e];
        if (!seen[t]) {
          seen[t] = true;
          queue.push_back(t);
        }
      }
    }
    for (std::size_t s = 0; s < n; ++s)
      if (!seen[s]) r.unreachable.push_back(static_cast<StateIndex>(s));
  }
  return r;
}

// ---------------------------------------------------------------------------

Dtmc::Dtmc(DtmcParts parts) : parts_(std::move(parts)) {
  ValidationReport report = validate(parts_);
  if (!report.ok()) throw ModelError("invalid DTMC:\n" + report.to_string());
  for (const auto& [name, idx] : parts_.labels)
    labels_.emplace(name, StateSet::from_indices(parts_.num_states, idx));
}

std::string_view Dtmc::action(std::size_t edge) const {
  if (parts_.edge_actions.empty()) return {};
  std::uint32_t a = parts_.edge_actions[edge];
  if (a == kNoAction) return {};
  return parts_.action_names[a];
}

const StateSet& Dtmc::label(const std::string& name) const {
  auto it = labels_.find(name);
  if (it == labels_.end()) throw FormulaError("unknown label \"" + name + "\"");
  return it->second;
}

std::vector<std::string> Dtmc::label_names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : labels_) out.push_back(name);
  return out;
}

bool Dtmc::has_reward(const std::string& name) const {
  for (const auto& r : parts_.rewards)
    if (r.name == name) return true;
  return false;
}

const RewardStructure& Dtmc::reward(const std::string& name) const {
  for (const auto& r : parts_.rewards)
    if (r.name == name) return r;
  throw FormulaError("unknown reward structure \"" + name + "\"");
}

std::span<const std::int32_t> Dtmc::valuation(StateIndex s) const {
  const std::size_t w = parts_.variable_names.size();
  return {parts_.valuations.data() + static_cast<std::size_t>(s) * w, w};
}

bool Dtmc::is_absorbing(StateIndex s) const {
  return row_end(s) - row_begin(s) == 1 && target(row_begin(s)) == s;
}

ValidationReport validate(const Dtmc& d) { return validate(d.parts()); }

StateSet reachable_from(const Dtmc& d, StateIndex start) {
  StateSet seen(d.num_states());
  std::vector<StateIndex> stack{start};
  seen.insert(start);
  while (!stack.empty()) {
    StateIndex s = stack.back();
    stack.pop_back();
    for (StateIndex t : d.successors(s))
      if (!seen.contains(t)) {
        seen.insert(t);
        stack.push_back(t);
      }
  }
  return seen;
}

StateSet backward_reachable(const Dtmc& d, const StateSet& targets, const StateSet& through) {
  const std::size_t n = d.num_states();
  // reverse adjacency in CSR form
  std::vector<std::size_t> offsets(n + 1, 0);
  for (std::size_t e = 0; e < d.num_transitions(); ++e) ++offsets[d.target(e) + 1];
  for (std::size_t s = 0; s < n; ++s) offsets[s + 1] += offsets[s];
  std::vector<StateIndex> preds(d.num_transitions());
  std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
  for (StateIndex s = 0; s < n; ++s)
    for (std::size_t e = d.row_begin(s); e < d.row_end(s); ++e) preds[fill[d.target(e)]++] = s;

  StateSet result = targets;
  std::vector<StateIndex> stack = targets.indices();
  while (!stack.empty()) {
    StateIndex t = stack.back();
    stack.pop_back();
    for (std::size_t k = offsets[t]; k < offsets[t + 1]; ++k) {
      StateIndex s = preds[k];
      if (!result.contains(s) && through.contains(s)) {
        result.insert(s);
        stack.push_back(s);
      }
    }
  }
  return result;
}

}  // namespace windcheck
