#include <algorithm>
#include <charconv>
#include <sstream>
#include <unordered_map>

#include "windcheck/dtmc.hpp"

namespace windcheck {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void check_name(const std::string& name, const char* what) {
  if (name.empty() || name.find_first_of(" \t\r\n:") != std::string::npos)
    throw ModelError(std::string("cannot serialize ") + what + " name '" + name + "'");
}

struct Line {
  std::size_t number;
  std::vector<std::string_view> words;
  std::vector<std::size_t> columns;
};

Line split(std::string_view text, std::size_t number) {
  Line l{number, {}, {}};
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r')) ++i;
    if (i >= text.size()) break;
    std::size_t start = i;
    while (i < text.size() && text[i] != ' ' && text[i] != '\t' && text[i] != '\r') ++i;
    l.words.push_back(text.substr(start, i - start));
    l.columns.push_back(start + 1);
  }
  return l;
}

[[noreturn]] void fail(const Line& l, std::size_t word, const std::string& msg) {
  std::size_t col = word < l.columns.size() ? l.columns[word] : 1;
  throw ParseError(msg, SourcePos{l.number, col});
}

template <typename T>
T parse_int(const Line& l, std::size_t w) {
  if (w >= l.words.size()) fail(l, w, "missing integer");
  T v{};
  auto sv = l.words[w];
  auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
  if (res.ec != std::errc{} || res.ptr != sv.data() + sv.size())
    fail(l, w, "expected an integer, found '" + std::string(sv) + "'");
  return v;
}

double parse_real(const Line& l, std::size_t w) {
  if (w >= l.words.size()) fail(l, w, "missing number");
  double v = 0;
  auto sv = l.words[w];
  auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
  if (res.ec != std::errc{} || res.ptr != sv.data() + sv.size())
    fail(l, w, "expected a number, found '" + std::string(sv) + "'");
  return v;
}

}  // namespace

std::string serialize(const Dtmc& d) {
  const auto& p = d.parts();
  std::ostringstream os;
  os << "dtmc " << p.num_states << " " << p.initial << "\n";
  if (!p.variable_names.empty()) {
    os << "vars";
    for (const auto& v : p.variable_names) {
      check_name(v, "variable");
      os << " " << v;
    }
    os << "\n";
  }
  if (!p.action_names.empty()) {
    os << "actions";
    for (const auto& a : p.action_names) {
      check_name(a, "action");
      os << " " << a;
    }
    os << "\n";
  }
  if (!p.variable_names.empty()) {
    for (StateIndex s = 0; s < p.num_states; ++s) {
      os << "state " << s;
      for (std::int32_t v : d.valuation(s)) os << " " << v;
      os << "\n";
    }
  }
  for (StateIndex s = 0; s < p.num_states; ++s) {
    for (std::size_t e = d.row_begin(s); e < d.row_end(s); ++e) {
      os << s << " " << d.target(e) << " " << format_double(d.probability(e));
      auto a = d.action(e);
      if (!a.empty()) os << " " << a;
      os << "\n";
    }
  }
  for (const auto& [name, idx] : p.labels) {
    check_name(name, "label");
    os << "label " << name << ":";
    std::vector<StateIndex> sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    for (StateIndex i : sorted) os << " " << i;
    os << "\n";
  }
  for (const auto& r : p.rewards) {
    check_name(r.name, "reward");
    os << "reward " << r.name << "\n";
    for (StateIndex s = 0; s < p.num_states; ++s)
      if (r.state_rewards[s] != 0.0)
        os << "reward " << r.name << " state " << s << " " << format_double(r.state_rewards[s]) << "\n";
    for (StateIndex s = 0; s < p.num_states; ++s)
      for (std::size_t e = d.row_begin(s); e < d.row_end(s); ++e)
        if (r.transition_rewards[e] != 0.0)
          os << "reward " << r.name << " trans " << s << " " << d.target(e) << " "
             << format_double(r.transition_rewards[e]) << "\n";
  }
  return os.str();
}

Dtmc deserialize(std::string_view text) {
  std::vector<Line> lines;
  {
    std::size_t number = 1;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      Line l = split(text.substr(start, end - start), number);
      if (!l.words.empty() && l.words[0].substr(0, 1) != "#") lines.push_back(std::move(l));
      ++number;
      start = end + 1;
    }
  }
  if (lines.empty() || lines[0].words[0] != "dtmc")
    throw ParseError("expected header 'dtmc <n_states> <initial>'", SourcePos{lines.empty() ? 1 : lines[0].number, 1});

  DtmcParts p;
  const Line& header = lines[0];
  p.num_states = parse_int<std::size_t>(header, 1);
  p.initial = parse_int<StateIndex>(header, 2);
  if (header.words.size() != 3) fail(header, 3, "unexpected trailing token");
  if (p.num_states == 0) fail(header, 1, "model needs at least one state");
  if (p.initial >= p.num_states) fail(header, 2, "initial state out of range");
  const std::size_t n = p.num_states;

  struct Edge {
    StateIndex src, dst;
    double prob;
    std::uint32_t action;
    std::size_t line;
  };
  std::vector<Edge> edges;
  std::unordered_map<std::string, std::uint32_t> action_index;
  std::vector<bool> have_valuation;

  struct PendingReward {
    std::size_t reward;
    bool trans;
    StateIndex src, dst;
    double value;
    const Line* line;
  };
  std::vector<PendingReward> pending;

  auto find_reward = [&](std::string_view name) -> std::size_t {
    for (std::size_t i = 0; i < p.rewards.size(); ++i)
      if (p.rewards[i].name == name) return i;
    p.rewards.push_back({std::string(name), {}, {}});
    return p.rewards.size() - 1;
  };

  auto state_arg = [&](const Line& l, std::size_t w) {
    auto s = parse_int<StateIndex>(l, w);
    if (s >= n) fail(l, w, "state index " + std::to_string(s) + " out of range");
    return s;
  };

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const Line& l = lines[li];
    std::string_view head = l.words[0];
    if (head == "vars") {
      if (!p.variable_names.empty()) fail(l, 0, "duplicate 'vars' line");
      for (std::size_t w = 1; w < l.words.size(); ++w) p.variable_names.emplace_back(l.words[w]);
      p.valuations.assign(n * p.variable_names.size(), 0);
      have_valuation.assign(n, false);
    } else if (head == "actions") {
      for (std::size_t w = 1; w < l.words.size(); ++w) {
        action_index.emplace(std::string(l.words[w]), static_cast<std::uint32_t>(p.action_names.size()));
        p.action_names.emplace_back(l.words[w]);
      }
    } else if (head == "state") {
      if (p.variable_names.empty()) fail(l, 0, "'state' line before 'vars'");
      StateIndex s = state_arg(l, 1);
      if (l.words.size() != 2 + p.variable_names.size()) fail(l, 0, "wrong number of values");
      for (std::size_t k = 0; k < p.variable_names.size(); ++k)
        p.valuations[s * p.variable_names.size() + k] = parse_int<std::int32_t>(l, 2 + k);
      have_valuation[s] = true;
    } else if (head == "label") {
      if (l.words.size() < 2 || l.words[1].back() != ':') fail(l, 1, "expected 'label <name>:'");
      std::string name(l.words[1].substr(0, l.words[1].size() - 1));
      auto& idx = p.labels[name];
      for (std::size_t w = 2; w < l.words.size(); ++w) idx.push_back(state_arg(l, w));
    } else if (head == "reward") {
      if (l.words.size() < 2) fail(l, 1, "expected a reward structure name");
      std::size_t r = find_reward(l.words[1]);
      if (l.words.size() == 2) continue;
      if (l.words[2] == "state") {
        if (l.words.size() != 5) fail(l, 0, "expected 'reward <name> state <s> <value>'");
        pending.push_back({r, false, state_arg(l, 3), 0, parse_real(l, 4), &l});
      } else if (l.words[2] == "trans") {
        if (l.words.size() != 6) fail(l, 0, "expected 'reward <name> trans <src> <dst> <value>'");
        pending.push_back({r, true, state_arg(l, 3), state_arg(l, 4), parse_real(l, 5), &l});
      } else {
        fail(l, 2, "expected 'state' or 'trans'");
      }
    } else {
      if (l.words.size() != 3 && l.words.size() != 4) fail(l, 0, "expected '<src> <dst> <prob> [action]'");
      Edge e{state_arg(l, 0), state_arg(l, 1), parse_real(l, 2), kNoAction, l.number};
      if (!(e.prob > 0.0 && e.prob <= 1.0)) fail(l, 2, "probability outside (0,1]");
      if (l.words.size() == 4) {
        auto it = action_index.find(std::string(l.words[3]));
        if (it == action_index.end()) fail(l, 3, "undeclared action '" + std::string(l.words[3]) + "'");
        e.action = it->second;
      }
      edges.push_back(e);
    }
  }

  if (!p.variable_names.empty())
    for (std::size_t s = 0; s < n; ++s)
      if (!have_valuation[s])
        throw ParseError("missing 'state' line for state " + std::to_string(s), SourcePos{lines.back().number, 1});

  std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.src < b.src; });
  p.row_offsets.assign(n + 1, 0);
  for (const auto& e : edges) ++p.row_offsets[e.src + 1];
  for (std::size_t s = 0; s < n; ++s) p.row_offsets[s + 1] += p.row_offsets[s];
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& e = edges[k];
    if (k > 0 && edges[k - 1].src == e.src) {
      for (std::size_t j = p.row_offsets[e.src]; j < k; ++j)
        if (edges[j].dst == e.dst)
          throw ParseError("duplicate transition " + std::to_string(e.src) + " -> " + std::to_string(e.dst),
                           SourcePos{e.line, 1});
    }
    p.targets.push_back(e.dst);
    p.probabilities.push_back(e.prob);
  }
  if (!p.action_names.empty()) {
    p.edge_actions.reserve(edges.size());
    for (const auto& e : edges) p.edge_actions.push_back(e.action);
  }

  for (auto& r : p.rewards) {
    r.state_rewards.assign(n, 0.0);
    r.transition_rewards.assign(edges.size(), 0.0);
  }
  for (const auto& pr : pending) {
    auto& r = p.rewards[pr.reward];
    if (!(pr.value >= 0.0)) fail(*pr.line, 0, "negative reward");
    if (!pr.trans) {
      r.state_rewards[pr.src] = pr.value;
      continue;
    }
    bool found = false;
    for (std::size_t e = p.row_offsets[pr.src]; e < p.row_offsets[pr.src + 1]; ++e)
      if (p.targets[e] == pr.dst) {
        r.transition_rewards[e] = pr.value;
        found = true;
      }
    if (!found) fail(*pr.line, 3, "transition reward on a missing transition");
  }

  ValidationReport report = validate(p);
  if (!report.row_sum_violations.empty()) {
    const auto& v = report.row_sum_violations.front();
    std::size_t line_no = lines[0].number;
    for (const auto& e : edges)
      if (e.src == v.state) {
        line_no = e.line;
        break;
      }
    std::ostringstream msg;
    msg << "outgoing probabilities of state " << v.state << " sum to " << v.sum;
    throw ParseError(msg.str(), SourcePos{line_no, 1});
  }
  if (!report.ok()) throw ParseError(report.to_string(), SourcePos{lines[0].number, 1});
  return Dtmc(std::move(p));
}

}  // namespace windcheck
