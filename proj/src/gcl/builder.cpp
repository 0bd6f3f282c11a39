#include "windcheck/gcl/builder.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>
#include <unordered_map>

#include "windcheck/gcl/eval.hpp"

namespace windcheck::gcl {

namespace {

class StatePacker {
 public:
  explicit StatePacker(const std::vector<VariableDecl>& vars) : vars_(vars) {
    std::size_t bit = 0;
    for (const auto& v : vars) {
      auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(v.hi) - v.lo);
      unsigned width = span == 0 ? 0u : static_cast<unsigned>(std::bit_width(span));
      offsets_.push_back(bit);
      widths_.push_back(width);
      bit += width;
    }
    bytes_ = (bit + 7) / 8;
  }

  void pack(std::span<const std::int32_t> state, std::string& out) const {
    out.assign(bytes_, '\0');
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      auto v = static_cast<std::uint64_t>(static_cast<std::int64_t>(state[i]) - vars_[i].lo);
      std::size_t bit = offsets_[i];
      for (unsigned k = 0; k < widths_[i]; ++k, ++bit)
        if ((v >> k) & 1u) out[bit / 8] = static_cast<char>(out[bit / 8] | (1 << (bit % 8)));
    }
  }

 private:
  const std::vector<VariableDecl>& vars_;
  std::vector<std::size_t> offsets_;
  std::vector<unsigned> widths_;
  std::size_t bytes_ = 0;
};

struct RowEntry {
  StateIndex target;
  double prob;
  std::uint32_t action;
  std::size_t reward_slot;  // index into reward accumulator block
};

class Builder {
 public:
  Builder(const SymbolicModel& m, const BuildOptions& opt)
      : m_(m), opt_(opt), eval_(m), packer_(m.variables), nvars_(m.variables.size()) {
    // action alphabet per label, in order of first appearance
    for (std::size_t mi = 0; mi < m.modules.size(); ++mi) {
      for (const auto& c : m.modules[mi].commands) {
        if (c.action.empty()) {
          unlabeled_.push_back(&c);
          continue;
        }
        auto it = action_ids_.find(c.action);
        if (it == action_ids_.end()) {
          it = action_ids_.emplace(c.action, static_cast<std::uint32_t>(actions_.size())).first;
          actions_.push_back(c.action);
          per_action_.emplace_back();
        }
        auto& modules = per_action_[it->second];
        if (modules.empty() || modules.back().first != mi) modules.push_back({mi, {}});
        modules.back().second.push_back(&c);
      }
    }
    for (const auto& r : m.rewards) {
      has_transition_rewards_.push_back(std::any_of(r.items.begin(), r.items.end(),
                                                    [](const RewardItem& i) { return i.transition; }));
    }
  }

  Dtmc run() {
    std::vector<std::int32_t> init(nvars_);
    for (std::size_t i = 0; i < nvars_; ++i) init[i] = m_.variables[i].initial;
    intern(init);

    const std::size_t nrew = m_.rewards.size();
    parts_.row_offsets.push_back(0);
    std::vector<std::int32_t> cur(nvars_);
    for (std::size_t s = 0; s < num_states(); ++s) {
      std::copy_n(valuations_.begin() + static_cast<std::ptrdiff_t>(s * nvars_), nvars_, cur.begin());
      eval_.bind(cur);
      expand(static_cast<StateIndex>(s), cur);

      std::sort(row_.begin(), row_.end(),
                [](const RowEntry& a, const RowEntry& b) { return a.target < b.target; });
      for (const auto& e : row_) {
        parts_.targets.push_back(e.target);
        parts_.probabilities.push_back(e.prob);
        parts_.edge_actions.push_back(e.action);
        for (std::size_t r = 0; r < nrew; ++r)
          trans_rewards_[r].push_back(e.prob > 0 ? reward_acc_[e.reward_slot * nrew + r] / e.prob : 0.0);
      }
      parts_.row_offsets.push_back(parts_.targets.size());
      for (std::size_t r = 0; r < nrew; ++r) state_rewards_[r].push_back(state_reward(r));
    }

    parts_.num_states = num_states();
    parts_.initial = 0;
    parts_.action_names = actions_;
    if (std::all_of(parts_.edge_actions.begin(), parts_.edge_actions.end(),
                    [](std::uint32_t a) { return a == kNoAction; })) {
      parts_.edge_actions.clear();
    }
    for (const auto& v : m_.variables) parts_.variable_names.push_back(v.name);
    parts_.valuations = std::move(valuations_);

    for (std::size_t r = 0; r < nrew; ++r)
      parts_.rewards.push_back({m_.rewards[r].name, std::move(state_rewards_[r]), std::move(trans_rewards_[r])});

    for (const auto& l : m_.labels) {
      auto& idx = parts_.labels[l.name];
      for (std::size_t s = 0; s < parts_.num_states; ++s) {
        eval_.bind({parts_.valuations.data() + s * nvars_, nvars_});
        if (eval_.test(*l.condition)) idx.push_back(static_cast<StateIndex>(s));
      }
    }
    return Dtmc(std::move(parts_));
  }

 private:
  const SymbolicModel& m_;
  BuildOptions opt_;
  Evaluator eval_;
  StatePacker packer_;
  std::size_t nvars_;

  std::vector<const Command*> unlabeled_;
  std::map<std::string, std::uint32_t> action_ids_;
  std::vector<std::string> actions_;
  // per action: (module, commands of that module carrying the label)
  std::vector<std::vector<std::pair<std::size_t, std::vector<const Command*>>>> per_action_;
  std::vector<bool> has_transition_rewards_;

  std::unordered_map<std::string, StateIndex> index_;
  std::vector<std::int32_t> valuations_;
  std::string key_;
  DtmcParts parts_;
  std::vector<std::vector<double>> state_rewards_{m_.rewards.size()};
  std::vector<std::vector<double>> trans_rewards_{m_.rewards.size()};

  std::vector<RowEntry> row_;
  std::vector<double> reward_acc_;
  std::vector<std::int32_t> next_;

  std::size_t num_states() const { return valuations_.size() / std::max<std::size_t>(nvars_, 1); }

  std::string describe(std::span<const std::int32_t> state) const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < nvars_; ++i) os << (i ? "," : "") << m_.variables[i].name << "=" << state[i];
    os << ")";
    return os.str();
  }

  StateIndex intern(std::span<const std::int32_t> state) {
    packer_.pack(state, key_);
    auto it = index_.find(key_);
    if (it != index_.end()) return it->second;
    if (nvars_ == 0 && !index_.empty()) return 0;
    if (index_.size() >= opt_.state_cap)
      throw ModelError("state cap of " + std::to_string(opt_.state_cap) + " states exceeded");
    auto id = static_cast<StateIndex>(index_.size());
    index_.emplace(key_, id);
    valuations_.insert(valuations_.end(), state.begin(), state.end());
    if (nvars_ == 0) valuations_.push_back(0);
    return id;
  }

  double state_reward(std::size_t r) {
    double total = 0.0;
    for (const auto& item : m_.rewards[r].items) {
      if (item.transition || !eval_.test(*item.guard)) continue;
      double v = eval_.eval(*item.value);
      if (!(v >= 0.0)) throw ModelError("negative reward in structure \"" + m_.rewards[r].name + "\"");
      total += v;
    }
    return total;
  }

  // probabilities of a command's updates in the bound state
  void update_probabilities(const Command& c, std::span<const std::int32_t> state, std::vector<double>& out) {
    out.clear();
    bool dynamic = false;
    for (const auto& u : c.updates)
      if (!u.exact_probability) dynamic = true;
    if (!dynamic) {
      for (const auto& u : c.updates) out.push_back(u.probability_value);
      return;
    }
    Rational total = 0;
    for (const auto& u : c.updates) {
      Rational p = u.exact_probability ? *u.exact_probability : eval_.eval_exact(*u.probability);
      if (p < 0 || p > 1)
        throw ModelError("probability " + format_rational(p) + " outside [0,1] in command at line " +
                         std::to_string(c.pos.line) + " in state " + describe(state));
      total += p;
      out.push_back(rational_to_double(p));
    }
    if (total != 1)
      throw ModelError("probabilities sum to " + format_rational(total) + " in command at line " +
                       std::to_string(c.pos.line) + " in state " + describe(state));
  }

  void emit(StateIndex s, std::span<const std::int32_t> state, std::uint32_t action, double prob,
            std::span<const double> rewards) {
    for (std::size_t i = 0; i < nvars_; ++i) {
      const auto& v = m_.variables[i];
      if (next_[i] < v.lo || next_[i] > v.hi)
        throw ModelError("variable '" + v.name + "' takes value " + std::to_string(next_[i]) +
                         " outside [" + std::to_string(v.lo) + ".." + std::to_string(v.hi) +
                         "] from state " + describe(state));
    }
    (void)s;
    StateIndex t = intern(next_);
    const std::size_t nrew = m_.rewards.size();
    for (auto& e : row_) {
      if (e.target == t) {
        e.prob += prob;
        for (std::size_t r = 0; r < nrew; ++r) reward_acc_[e.reward_slot * nrew + r] += prob * rewards[r];
        return;
      }
    }
    std::size_t slot = row_.size();
    row_.push_back({t, prob, action, slot});
    reward_acc_.resize((slot + 1) * nrew);
    for (std::size_t r = 0; r < nrew; ++r) reward_acc_[slot * nrew + r] = prob * rewards[r];
  }

  void transition_rewards(std::uint32_t action, std::vector<double>& out) {
    const std::size_t nrew = m_.rewards.size();
    out.assign(nrew, 0.0);
    const std::string& name = action == kNoAction ? empty_ : actions_[action];
    for (std::size_t r = 0; r < nrew; ++r) {
      if (!has_transition_rewards_[r]) continue;
      for (const auto& item : m_.rewards[r].items) {
        if (!item.transition || item.action != name || !eval_.test(*item.guard)) continue;
        double v = eval_.eval(*item.value);
        if (!(v >= 0.0)) throw ModelError("negative reward in structure \"" + m_.rewards[r].name + "\"");
        out[r] += v;
      }
    }
  }

  const std::string empty_;

  struct Alternative {
    std::uint32_t action;
    std::vector<const Command*> commands;
  };

  void expand(StateIndex s, std::span<const std::int32_t> state) {
    row_.clear();
    reward_acc_.clear();

    std::vector<Alternative> alts;
    for (const Command* c : unlabeled_)
      if (eval_.test(*c->guard)) alts.push_back({kNoAction, {c}});

    for (std::uint32_t a = 0; a < per_action_.size(); ++a) {
      std::vector<std::vector<const Command*>> enabled;
      bool blocked = false;
      for (const auto& [mi, cmds] : per_action_[a]) {
        std::vector<const Command*> on;
        for (const Command* c : cmds)
          if (eval_.test(*c->guard)) on.push_back(c);
        if (on.empty()) {
          blocked = true;
          break;
        }
        enabled.push_back(std::move(on));
      }
      if (blocked) continue;
      // cartesian product across modules
      std::vector<std::size_t> pick(enabled.size(), 0);
      for (;;) {
        Alternative alt{a, {}};
        for (std::size_t k = 0; k < enabled.size(); ++k) alt.commands.push_back(enabled[k][pick[k]]);
        alts.push_back(std::move(alt));
        std::size_t k = 0;
        while (k < pick.size() && ++pick[k] == enabled[k].size()) pick[k++] = 0;
        if (k == pick.size()) break;
      }
    }

    if (alts.empty()) {
      if (!opt_.fix_deadlocks) throw ModelError("deadlock in state " + describe(state));
      next_.assign(state.begin(), state.end());
      std::vector<double> zero(m_.rewards.size(), 0.0);
      emit(s, state, kNoAction, 1.0, zero);
      return;
    }

    const double weight = 1.0 / static_cast<double>(alts.size());
    std::vector<double> rewards;
    std::vector<std::vector<double>> probs;
    std::vector<std::vector<std::int32_t>> values;
    for (const auto& alt : alts) {
      transition_rewards(alt.action, rewards);
      const std::size_t m = alt.commands.size();
      probs.resize(m);
      for (std::size_t k = 0; k < m; ++k) update_probabilities(*alt.commands[k], state, probs[k]);

      // evaluate every assignment against the source state up front
      values.assign(m, {});
      for (std::size_t k = 0; k < m; ++k) {
        for (const auto& u : alt.commands[k]->updates) {
          for (const auto& asg : u.assignments) {
            double v = eval_.eval(*asg.value);
            if (!(v >= -2147483648.0 && v <= 2147483647.0))
              throw ModelError("assignment to '" + m_.variables[static_cast<std::size_t>(asg.var)].name +
                               "' overflows in state " + describe(state));
            values[k].push_back(static_cast<std::int32_t>(v));
          }
        }
      }

      std::vector<std::size_t> pick(m, 0);
      for (;;) {
        double p = weight;
        next_.assign(state.begin(), state.end());
        for (std::size_t k = 0; k < m; ++k) {
          p *= probs[k][pick[k]];
          const auto& updates = alt.commands[k]->updates;
          std::size_t base = 0;
          for (std::size_t u = 0; u < pick[k]; ++u) base += updates[u].assignments.size();
          const auto& chosen = updates[pick[k]];
          for (std::size_t j = 0; j < chosen.assignments.size(); ++j)
            next_[static_cast<std::size_t>(chosen.assignments[j].var)] = values[k][base + j];
        }
        if (p > 0.0) emit(s, state, alt.action, p, rewards);
        std::size_t k = 0;
        while (k < m && ++pick[k] == alt.commands[k]->updates.size()) pick[k++] = 0;
        if (k == m) break;
      }
    }
  }
};

}  // namespace

Dtmc compose_and_build(const SymbolicModel& model, const BuildOptions& options) {
  Builder b(model, options);
  return b.run();
}

}  // namespace windcheck::gcl
