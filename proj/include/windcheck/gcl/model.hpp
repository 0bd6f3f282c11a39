#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "windcheck/gcl/expr.hpp"

namespace windcheck::gcl {

struct VariableDecl {
  std::string name;
  bool is_bool = false;
  std::int32_t lo = 0;
  std::int32_t hi = 0;
  std::int32_t initial = 0;
  int module = -1;
  SourcePos pos;
};

struct Assignment {
  int var = -1;
  ExprPtr value;
};

struct Update {
  ExprPtr probability;  // null means probability 1
  std::vector<Assignment> assignments;
  // filled for constant probabilities during validation
  std::optional<Rational> exact_probability;
  double probability_value = 1.0;
};

struct Command {
  std::string action;  // empty for unlabeled commands
  ExprPtr guard;
  std::vector<Update> updates;
  int module = -1;
  SourcePos pos;
};

struct ModuleDef {
  std::string name;
  std::vector<int> variables;  // indices into SymbolicModel::variables
  std::vector<Command> commands;
  SourcePos pos;
};

struct Constant {
  std::string name;
  Type type = Type::Int;
  ExprPtr value;
  SourcePos pos;
};

struct FormulaDef {
  std::string name;
  ExprPtr value;
  SourcePos pos;
};

struct LabelDef {
  std::string name;
  ExprPtr condition;
  SourcePos pos;
};

struct RewardItem {
  bool transition = false;  // `[a] guard : value;` when true
  std::string action;
  ExprPtr guard;
  ExprPtr value;
  SourcePos pos;
};

struct RewardDef {
  std::string name;
  std::vector<RewardItem> items;
  SourcePos pos;
};

/// A validated guarded-command model: every identifier is resolved, every
/// expression type-checked and every constant update distribution sums to 1
/// exactly. Immutable after `parse_model` returns it.
struct SymbolicModel {
  std::vector<Constant> constants;
  std::vector<VariableDecl> variables;
  std::vector<ModuleDef> modules;
  std::vector<FormulaDef> formulas;
  std::vector<LabelDef> labels;
  std::vector<RewardDef> rewards;

  std::size_t num_commands() const;
  int find_variable(const std::string& name) const;
};

/// Parses and validates model text in the documented guarded-command grammar
/// (see docs/model-language.md).
SymbolicModel parse_model(std::string_view text);

}  // namespace windcheck::gcl
