#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "windcheck/error.hpp"

namespace windcheck {

using StateIndex = std::uint32_t;

/// Dense bitset over state indices.
class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(std::size_t n, bool value = false) : bits_(n, value) {}

  static StateSet from_indices(std::size_t n, std::span<const StateIndex> indices);

  std::size_t size() const { return bits_.size(); }
  bool contains(StateIndex s) const { return bits_[s]; }
  void insert(StateIndex s) { bits_[s] = true; }
  void erase(StateIndex s) { bits_[s] = false; }
  void set(StateIndex s, bool v) { bits_[s] = v; }

  std::size_t count() const;
  bool none() const { return count() == 0; }
  std::vector<StateIndex> indices() const;

  StateSet complement() const;
  StateSet operator&(const StateSet& o) const;
  StateSet operator|(const StateSet& o) const;
  StateSet minus(const StateSet& o) const;
  bool operator==(const StateSet& o) const = default;

 private:
  std::vector<bool> bits_;
};

/// Named non-negative reward structure. Transition rewards are aligned with
/// the owning Dtmc's edge order.
struct RewardStructure {
  std::string name;
  std::vector<double> state_rewards;
  std::vector<double> transition_rewards;

  bool operator==(const RewardStructure&) const = default;
};

/// Raw constituents of a Dtmc in compressed-row form. Used by builders and
/// the deserializer; `validate` inspects one without throwing.
struct DtmcParts {
  std::size_t num_states = 0;
  StateIndex initial = 0;
  std::vector<std::size_t> row_offsets;  // num_states + 1 entries
  std::vector<StateIndex> targets;
  std::vector<double> probabilities;
  // optional per-edge action index into action_names (npos = unlabeled)
  std::vector<std::uint32_t> edge_actions;
  std::vector<std::string> action_names;
  std::map<std::string, std::vector<StateIndex>> labels;
  std::vector<RewardStructure> rewards;
  // optional per-state variable valuations, row-major num_states x names
  std::vector<std::string> variable_names;
  std::vector<std::int32_t> valuations;
};

inline constexpr std::uint32_t kNoAction = 0xffffffffu;
inline constexpr double kRowSumTolerance = 1e-12;

struct ValidationReport {
  struct RowSum {
    StateIndex state;
    double sum;
  };
  std::vector<RowSum> row_sum_violations;
  std::vector<std::string> problems;
  std::vector<StateIndex> unreachable;
  std::vector<std::string> dangling_labels;

  /// Row sums, structural problems and dangling labels are errors;
  /// unreachable states are only reported.
  bool ok() const {
    return row_sum_violations.empty() && problems.empty() && dangling_labels.empty();
  }
  bool empty() const { return ok() && unreachable.empty(); }
  std::string to_string() const;
};

ValidationReport validate(const DtmcParts& parts);

/// Explicit-state discrete-time Markov chain: finite states, one initial
/// state, a row-stochastic sparse transition matrix, labels, reward
/// structures and (optionally) per-state variable valuations.
/// Immutable once constructed.
class Dtmc {
 public:
  /// Throws ModelError when `validate(parts)` reports an error.
  explicit Dtmc(DtmcParts parts);

  std::size_t num_states() const { return parts_.num_states; }
  std::size_t num_transitions() const { return parts_.targets.size(); }
  StateIndex initial() const { return parts_.initial; }

  std::size_t row_begin(StateIndex s) const { return parts_.row_offsets[s]; }
  std::size_t row_end(StateIndex s) const { return parts_.row_offsets[s + 1]; }
  StateIndex target(std::size_t edge) const { return parts_.targets[edge]; }
  double probability(std::size_t edge) const { return parts_.probabilities[edge]; }
  std::string_view action(std::size_t edge) const;

  std::span<const StateIndex> successors(StateIndex s) const {
    return {parts_.targets.data() + row_begin(s), row_end(s) - row_begin(s)};
  }
  std::span<const double> row_probabilities(StateIndex s) const {
    return {parts_.probabilities.data() + row_begin(s), row_end(s) - row_begin(s)};
  }

  bool has_label(const std::string& name) const { return labels_.count(name) != 0; }
  /// Throws FormulaError for unknown labels.
  const StateSet& label(const std::string& name) const;
  std::vector<std::string> label_names() const;

  bool has_reward(const std::string& name) const;
  /// Throws FormulaError for unknown reward structures.
  const RewardStructure& reward(const std::string& name) const;
  const std::vector<RewardStructure>& rewards() const { return parts_.rewards; }

  const std::vector<std::string>& variable_names() const { return parts_.variable_names; }
  bool has_valuations() const { return !parts_.variable_names.empty(); }
  std::span<const std::int32_t> valuation(StateIndex s) const;

  /// True when the only outgoing edge of `s` is a self-loop.
  bool is_absorbing(StateIndex s) const;

  const DtmcParts& parts() const { return parts_; }

 private:
  DtmcParts parts_;
  std::map<std::string, StateSet> labels_;
};

ValidationReport validate(const Dtmc& d);

/// Forward reachable set from `start` over positive-probability edges.
StateSet reachable_from(const Dtmc& d, StateIndex start);

/// States with a path to `targets` that stays inside `through` until it hits
/// a target (targets themselves are included).
StateSet backward_reachable(const Dtmc& d, const StateSet& targets, const StateSet& through);

/// Explicit-state text format; see docs/dtmc-format.md.
std::string serialize(const Dtmc& d);
Dtmc deserialize(std::string_view text);

}  // namespace windcheck
