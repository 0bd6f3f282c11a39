#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "lexer.hpp"
#include "windcheck/gcl/eval.hpp"
#include "windcheck/gcl/model.hpp"

namespace windcheck::gcl {

std::size_t SymbolicModel::num_commands() const {
  std::size_t n = 0;
  for (const auto& m : modules) n += m.commands.size();
  return n;
}

int SymbolicModel::find_variable(const std::string& name) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i].name == name) return static_cast<int>(i);
  return -1;
}

namespace {

const std::map<std::string, Op>& functions() {
  static const std::map<std::string, Op> table = {
      {"min", Op::Min},     {"max", Op::Max},     {"floor", Op::Floor},
      {"ceil", Op::Ceil},   {"round", Op::Round}, {"pow", Op::Pow},
      {"mod", Op::Mod},     {"abs", Op::Abs},
  };
  return table;
}

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {
      "dtmc",  "module", "endmodule", "const",   "int",        "double",
      "bool",  "formula", "label",    "rewards", "endrewards", "init",
      "true",  "false",  "min",       "max",     "floor",      "ceil",
      "round", "pow",    "mod",       "abs",     "probabilistic",
  };
  return kw;
}

// Raw declarations captured before name resolution.
struct RawVar {
  std::string name;
  bool is_bool = false;
  ExprPtr lo, hi, init;
  SourcePos pos;
};

struct RawAssignment {
  std::string var;
  ExprPtr value;
  SourcePos pos;
};

struct RawUpdate {
  ExprPtr probability;
  std::vector<RawAssignment> assignments;
  SourcePos pos;
};

struct RawCommand {
  std::string action;
  ExprPtr guard;
  std::vector<RawUpdate> updates;
  SourcePos pos;
};

struct RawModule {
  std::string name;
  std::vector<RawVar> vars;
  std::vector<RawCommand> commands;
  SourcePos pos;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  void parse() {
    if (is_kw("dtmc") || is_kw("probabilistic")) advance();
    while (cur().kind != Tok::End) {
      if (is_kw("const")) parse_const();
      else if (is_kw("formula")) parse_formula();
      else if (is_kw("label")) parse_label();
      else if (is_kw("module")) parse_module();
      else if (is_kw("rewards")) parse_rewards();
      else fail("expected a declaration (const, formula, label, module, rewards)");
    }
  }

  std::vector<Constant> consts;
  std::vector<FormulaDef> formulas;
  std::vector<LabelDef> labels;
  std::vector<RawModule> modules;
  std::vector<RewardDef> rewards;

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;

  const Token& cur() const { return toks_[i_]; }
  const Token& look(std::size_t k) const {
    return toks_[std::min(i_ + k, toks_.size() - 1)];
  }
  bool is(Tok k) const { return cur().kind == k; }
  bool is_kw(const char* kw) const { return cur().kind == Tok::Ident && cur().text == kw; }
  const Token& advance() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    std::string got = cur().kind == Tok::End ? "end of input" : "'" + cur().text + "'";
    throw ParseError(msg + ", found " + got, cur().pos);
  }

  const Token& expect(Tok k, const char* what = nullptr) {
    if (!is(k)) fail(std::string("expected ") + (what ? what : token_name(k)));
    return advance();
  }

  void expect_kw(const char* kw) {
    if (!is_kw(kw)) fail(std::string("expected '") + kw + "'");
    advance();
  }

  std::string expect_ident(const char* what) {
    if (!is(Tok::Ident) || keywords().count(cur().text))
      fail(std::string("expected ") + what);
    return advance().text;
  }

  void parse_const() {
    SourcePos pos = cur().pos;
    advance();
    Type t = Type::Int;
    if (is_kw("int")) { advance(); t = Type::Int; }
    else if (is_kw("double")) { advance(); t = Type::Double; }
    else if (is_kw("bool")) { advance(); t = Type::Bool; }
    std::string name = expect_ident("constant name");
    expect(Tok::Eq);
    ExprPtr value = parse_expr();
    expect(Tok::Semi);
    consts.push_back({name, t, value, pos});
  }

  void parse_formula() {
    SourcePos pos = cur().pos;
    advance();
    std::string name = expect_ident("formula name");
    expect(Tok::Eq);
    ExprPtr value = parse_expr();
    expect(Tok::Semi);
    formulas.push_back({name, value, pos});
  }

  void parse_label() {
    SourcePos pos = cur().pos;
    advance();
    std::string name = expect(Tok::String, "label name string").text;
    expect(Tok::Eq);
    ExprPtr cond = parse_expr();
    expect(Tok::Semi);
    labels.push_back({name, cond, pos});
  }

  void parse_module() {
    RawModule m;
    m.pos = cur().pos;
    advance();
    m.name = expect_ident("module name");
    // variable declarations: IDENT ':'
    while (is(Tok::Ident) && look(1).kind == Tok::Colon && !keywords().count(cur().text)) {
      RawVar v;
      v.pos = cur().pos;
      v.name = advance().text;
      expect(Tok::Colon);
      if (is_kw("bool")) {
        advance();
        v.is_bool = true;
      } else {
        expect(Tok::LBracket);
        v.lo = parse_expr();
        expect(Tok::DotDot);
        v.hi = parse_expr();
        expect(Tok::RBracket);
      }
      if (is_kw("init")) {
        advance();
        v.init = parse_expr();
      }
      expect(Tok::Semi);
      m.vars.push_back(std::move(v));
    }
    while (is(Tok::LBracket)) m.commands.push_back(parse_command());
    expect_kw("endmodule");
    modules.push_back(std::move(m));
  }

  RawCommand parse_command() {
    RawCommand c;
    c.pos = cur().pos;
    expect(Tok::LBracket);
    if (is(Tok::Ident)) c.action = expect_ident("action label");
    expect(Tok::RBracket);
    c.guard = parse_expr();
    expect(Tok::Arrow);
    for (;;) {
      c.updates.push_back(parse_update());
      if (is(Tok::Plus)) {
        advance();
        continue;
      }
      break;
    }
    expect(Tok::Semi);
    return c;
  }

  bool at_assignment_start() const {
    return is(Tok::LParen) && look(1).kind == Tok::Ident && look(2).kind == Tok::Prime;
  }

  bool at_true_update() const {
    return is_kw("true") && (look(1).kind == Tok::Semi || look(1).kind == Tok::Plus);
  }

  RawUpdate parse_update() {
    RawUpdate u;
    u.pos = cur().pos;
    if (!at_assignment_start() && !at_true_update()) {
      u.probability = parse_expr();
      expect(Tok::Colon);
    }
    if (is_kw("true")) {
      advance();
      return u;
    }
    for (;;) {
      RawAssignment a;
      a.pos = cur().pos;
      expect(Tok::LParen);
      a.var = expect_ident("variable name");
      expect(Tok::Prime);
      expect(Tok::Eq);
      a.value = parse_expr();
      expect(Tok::RParen);
      u.assignments.push_back(std::move(a));
      if (is(Tok::And)) {
        advance();
        continue;
      }
      break;
    }
    return u;
  }

  void parse_rewards() {
    RewardDef r;
    r.pos = cur().pos;
    advance();
    r.name = expect(Tok::String, "reward structure name string").text;
    while (!is_kw("endrewards")) {
      if (is(Tok::End)) fail("expected 'endrewards'");
      RewardItem item;
      item.pos = cur().pos;
      if (is(Tok::LBracket)) {
        advance();
        item.transition = true;
        if (is(Tok::Ident)) item.action = expect_ident("action label");
        expect(Tok::RBracket);
      }
      item.guard = parse_expr();
      expect(Tok::Colon);
      item.value = parse_expr();
      expect(Tok::Semi);
      r.items.push_back(std::move(item));
    }
    advance();
    rewards.push_back(std::move(r));
  }

  // expr := ite ; precedence (low to high): ?:, =>, |, &, !, relational, + -, * /, unary -
  ExprPtr parse_expr() { return parse_ite(); }

  ExprPtr parse_ite() {
    ExprPtr cond = parse_implies();
    if (!is(Tok::Question)) return cond;
    SourcePos pos = advance().pos;
    ExprPtr a = parse_ite();
    expect(Tok::Colon);
    ExprPtr b = parse_ite();
    return make_node(Op::Ite, {cond, a, b}, pos);
  }

  ExprPtr parse_implies() {
    ExprPtr lhs = parse_or();
    if (is(Tok::Implies)) {
      SourcePos pos = advance().pos;
      ExprPtr rhs = parse_implies();
      return make_node(Op::Implies, {lhs, rhs}, pos);
    }
    return lhs;
  }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (is(Tok::Or)) {
      SourcePos pos = advance().pos;
      lhs = make_node(Op::Or, {lhs, parse_and()}, pos);
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (is(Tok::And)) {
      SourcePos pos = advance().pos;
      lhs = make_node(Op::And, {lhs, parse_not()}, pos);
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (is(Tok::Not)) {
      SourcePos pos = advance().pos;
      return make_node(Op::Not, {parse_not()}, pos);
    }
    return parse_rel();
  }

  ExprPtr parse_rel() {
    ExprPtr lhs = parse_add();
    Op op;
    switch (cur().kind) {
      case Tok::Eq: op = Op::Eq; break;
      case Tok::Ne: op = Op::Ne; break;
      case Tok::Lt: op = Op::Lt; break;
      case Tok::Le: op = Op::Le; break;
      case Tok::Gt: op = Op::Gt; break;
      case Tok::Ge: op = Op::Ge; break;
      default: return lhs;
    }
    SourcePos pos = advance().pos;
    return make_node(op, {lhs, parse_add()}, pos);
  }

  ExprPtr parse_add() {
    ExprPtr lhs = parse_mul();
    while (is(Tok::Plus) || is(Tok::Minus)) {
      Op op = is(Tok::Plus) ? Op::Add : Op::Sub;
      SourcePos pos = advance().pos;
      lhs = make_node(op, {lhs, parse_mul()}, pos);
    }
    return lhs;
  }

  ExprPtr parse_mul() {
    ExprPtr lhs = parse_unary();
    while (is(Tok::Star) || is(Tok::Slash)) {
      Op op = is(Tok::Star) ? Op::Mul : Op::Div;
      SourcePos pos = advance().pos;
      lhs = make_node(op, {lhs, parse_unary()}, pos);
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (is(Tok::Minus)) {
      SourcePos pos = advance().pos;
      return make_node(Op::Neg, {parse_unary()}, pos);
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    const Token& t = cur();
    SourcePos pos = t.pos;
    switch (t.kind) {
      case Tok::Int: {
        advance();
        Rational exact = parse_decimal(t.text);
        return make_literal(rational_to_double(exact), Type::Int, exact, pos);
      }
      case Tok::Real: {
        advance();
        Rational exact = parse_decimal(t.text);
        return make_literal(rational_to_double(exact), Type::Double, exact, pos);
      }
      case Tok::LParen: {
        advance();
        ExprPtr e = parse_expr();
        expect(Tok::RParen);
        return e;
      }
      case Tok::Ident: {
        if (t.text == "true" || t.text == "false") {
          advance();
          return make_literal(t.text == "true" ? 1.0 : 0.0, Type::Bool, {}, pos);
        }
        auto fn = functions().find(t.text);
        if (fn != functions().end() && look(1).kind == Tok::LParen) {
          advance();
          advance();
          std::vector<ExprPtr> args;
          args.push_back(parse_expr());
          while (is(Tok::Comma)) {
            advance();
            args.push_back(parse_expr());
          }
          expect(Tok::RParen);
          return make_node(fn->second, std::move(args), pos);
        }
        if (keywords().count(t.text)) fail("expected an expression");
        advance();
        auto e = std::make_shared<Expr>();
        e->op = Op::Ident;
        e->name = t.text;
        e->pos = pos;
        return e;
      }
      default:
        fail("expected an expression");
    }
  }
};

// ---------------------------------------------------------------------------
// Name resolution, type checking and constant folding.

bool numeric(Type t) { return t != Type::Bool; }

class Resolver {
 public:
  Resolver(Parser& p, SymbolicModel& m) : p_(p), m_(m), eval_(m) {}

  void run() {
    declare_names();
    for (std::size_t i = 0; i < p_.consts.size(); ++i) resolve_const(i);
    build_variables();
    m_.formulas.resize(p_.formulas.size());
    formula_state_.assign(p_.formulas.size(), 0);
    for (std::size_t i = 0; i < p_.formulas.size(); ++i) resolve_formula(i);
    for (auto& l : p_.labels) {
      LabelDef def{l.name, expect_type(resolve(l.condition), Type::Bool, "label"), l.pos};
      for (const auto& other : m_.labels)
        if (other.name == l.name)
          throw ParseError("duplicate label \"" + l.name + "\"", l.pos);
      m_.labels.push_back(std::move(def));
    }
    build_modules();
    build_rewards();
  }

 private:
  enum class Kind { Const, Var, Formula };
  struct Symbol {
    Kind kind;
    std::size_t index;
  };

  Parser& p_;
  SymbolicModel& m_;
  Evaluator eval_;
  std::unordered_map<std::string, Symbol> names_;
  std::vector<int> const_state_;
  std::vector<ExprPtr> const_values_;
  std::vector<int> formula_state_;

  void declare(const std::string& name, Symbol sym, SourcePos pos) {
    if (!names_.emplace(name, sym).second)
      throw ParseError("duplicate identifier '" + name + "'", pos);
  }

  void declare_names() {
    for (std::size_t i = 0; i < p_.consts.size(); ++i)
      declare(p_.consts[i].name, {Kind::Const, i}, p_.consts[i].pos);
    std::size_t v = 0;
    for (const auto& mod : p_.modules)
      for (const auto& var : mod.vars) declare(var.name, {Kind::Var, v++}, var.pos);
    for (std::size_t i = 0; i < p_.formulas.size(); ++i)
      declare(p_.formulas[i].name, {Kind::Formula, i}, p_.formulas[i].pos);
    std::set<std::string> module_names;
    for (const auto& mod : p_.modules)
      if (!module_names.insert(mod.name).second)
        throw ParseError("duplicate module '" + mod.name + "'", mod.pos);
    const_state_.assign(p_.consts.size(), 0);
    const_values_.assign(p_.consts.size(), nullptr);
  }

  ExprPtr resolve_const(std::size_t i) {
    if (const_state_[i] == 2) return const_values_[i];
    const auto& c = p_.consts[i];
    if (const_state_[i] == 1) throw ParseError("cyclic definition of constant '" + c.name + "'", c.pos);
    const_state_[i] = 1;
    ExprPtr e = resolve(c.value);
    if (!e->constant) throw ParseError("constant '" + c.name + "' depends on a variable", c.pos);
    if (c.type == Type::Bool && e->type != Type::Bool)
      throw ParseError("constant '" + c.name + "' must be bool", c.pos);
    if (c.type == Type::Int && e->type != Type::Int)
      throw ParseError("constant '" + c.name + "' must be int", c.pos);
    if (c.type == Type::Double && e->type == Type::Bool)
      throw ParseError("constant '" + c.name + "' must be numeric", c.pos);
    if (c.type == Type::Double && e->type == Type::Int) {
      auto copy = std::make_shared<Expr>(*e);
      copy->type = Type::Double;
      e = copy;
    }
    const_values_[i] = e;
    const_state_[i] = 2;
    m_.constants.push_back({c.name, c.type, e, c.pos});
    return e;
  }

  void resolve_formula(std::size_t i) {
    if (formula_state_[i] == 2) return;
    const auto& f = p_.formulas[i];
    if (formula_state_[i] == 1) throw ParseError("cyclic definition of formula '" + f.name + "'", f.pos);
    formula_state_[i] = 1;
    m_.formulas[i] = {f.name, resolve(f.value), f.pos};
    formula_state_[i] = 2;
  }

  std::int32_t const_int(const ExprPtr& raw, const char* what, SourcePos pos) {
    ExprPtr e = resolve(raw);
    if (!e->constant || e->type != Type::Int)
      throw ParseError(std::string(what) + " must be a constant integer expression", pos);
    return static_cast<std::int32_t>(e->value);
  }

  void build_variables() {
    for (std::size_t mi = 0; mi < p_.modules.size(); ++mi) {
      for (const auto& rv : p_.modules[mi].vars) {
        VariableDecl v;
        v.name = rv.name;
        v.pos = rv.pos;
        v.module = static_cast<int>(mi);
        v.is_bool = rv.is_bool;
        if (rv.is_bool) {
          v.lo = 0;
          v.hi = 1;
          v.initial = 0;
          if (rv.init) {
            ExprPtr e = resolve(rv.init);
            if (!e->constant || e->type != Type::Bool)
              throw ParseError("initial value of '" + v.name + "' must be a constant bool", rv.pos);
            v.initial = e->value != 0.0 ? 1 : 0;
          }
        } else {
          v.lo = const_int(rv.lo, "range bound", rv.pos);
          v.hi = const_int(rv.hi, "range bound", rv.pos);
          if (v.lo > v.hi)
            throw ParseError("empty range for '" + v.name + "'", rv.pos);
          v.initial = rv.init ? const_int(rv.init, "initial value", rv.pos) : v.lo;
          if (v.initial < v.lo || v.initial > v.hi)
            throw ParseError("initial value of '" + v.name + "' outside its range", rv.pos);
        }
        m_.variables.push_back(std::move(v));
      }
    }
  }

  void build_modules() {
    std::size_t var_base = 0;
    for (std::size_t mi = 0; mi < p_.modules.size(); ++mi) {
      const auto& rm = p_.modules[mi];
      ModuleDef mod;
      mod.name = rm.name;
      mod.pos = rm.pos;
      for (std::size_t k = 0; k < rm.vars.size(); ++k)
        mod.variables.push_back(static_cast<int>(var_base + k));
      var_base += rm.vars.size();
      for (const auto& rc : rm.commands) mod.commands.push_back(build_command(rc, static_cast<int>(mi)));
      m_.modules.push_back(std::move(mod));
    }
  }

  Command build_command(const RawCommand& rc, int module) {
    Command c;
    c.action = rc.action;
    c.pos = rc.pos;
    c.module = module;
    c.guard = expect_type(resolve(rc.guard), Type::Bool, "guard");
    if (rc.updates.size() > 1)
      for (const auto& u : rc.updates)
        if (!u.probability) throw ParseError("every update of a multi-update command needs a probability", u.pos);

    bool all_constant = true;
    Rational total = 0;
    for (const auto& ru : rc.updates) {
      Update u;
      if (ru.probability) {
        u.probability = resolve(ru.probability);
        if (!numeric(u.probability->type))
          throw ParseError("probability must be numeric", ru.pos);
        if (u.probability->constant) {
          Rational p;
          try {
            p = eval_.eval_exact(*u.probability);
          } catch (const ModelError&) {
            throw ParseError("probability is not an exact rational", ru.pos);
          }
          if (p < 0 || p > 1)
            throw ParseError("probability " + format_rational(p) + " outside [0,1]", ru.pos);
          u.exact_probability = p;
          u.probability_value = rational_to_double(p);
          total += p;
        } else {
          all_constant = false;
        }
      } else {
        u.exact_probability = Rational(1);
        total += 1;
      }
      std::set<int> assigned;
      for (const auto& ra : ru.assignments) {
        auto it = names_.find(ra.var);
        if (it == names_.end() || it->second.kind != Kind::Var)
          throw ParseError("undeclared variable '" + ra.var + "'", ra.pos);
        int vi = static_cast<int>(it->second.index);
        const auto& decl = m_.variables[static_cast<std::size_t>(vi)];
        if (decl.module != module)
          throw ParseError("variable '" + ra.var + "' belongs to another module", ra.pos);
        if (!assigned.insert(vi).second)
          throw ParseError("variable '" + ra.var + "' assigned twice in one update", ra.pos);
        ExprPtr value = resolve(ra.value);
        if (decl.is_bool && value->type != Type::Bool)
          throw ParseError("bool variable '" + ra.var + "' needs a bool value", ra.pos);
        if (!decl.is_bool && value->type != Type::Int)
          throw ParseError("int variable '" + ra.var + "' needs an int value, got " +
                               type_name(value->type),
                           ra.pos);
        u.assignments.push_back({vi, value});
      }
      c.updates.push_back(std::move(u));
    }
    if (all_constant && total != 1)
      throw ParseError("probabilities sum to " + format_rational(total), rc.pos);
    return c;
  }

  void build_rewards() {
    std::set<std::string> seen;
    for (auto& r : p_.rewards) {
      if (!seen.insert(r.name).second)
        throw ParseError("duplicate reward structure \"" + r.name + "\"", r.pos);
      RewardDef def{r.name, {}, r.pos};
      for (const auto& item : r.items) {
        RewardItem out = item;
        out.guard = expect_type(resolve(item.guard), Type::Bool, "reward guard");
        out.value = resolve(item.value);
        if (!numeric(out.value->type)) throw ParseError("reward value must be numeric", item.pos);
        def.items.push_back(std::move(out));
      }
      m_.rewards.push_back(std::move(def));
    }
  }

  ExprPtr expect_type(ExprPtr e, Type t, const char* what) {
    if (e->type != t)
      throw ParseError(std::string(what) + " must be " + type_name(t) + ", got " + type_name(e->type), e->pos);
    return e;
  }

  [[noreturn]] void type_error(const Expr& e, const std::string& msg) {
    throw ParseError(msg, e.pos);
  }

  ExprPtr resolve(const ExprPtr& raw) {
    if (raw->op == Op::Literal) return raw;
    if (raw->op == Op::Ident) {
      auto it = names_.find(raw->name);
      if (it == names_.end()) throw ParseError("undeclared identifier '" + raw->name + "'", raw->pos);
      switch (it->second.kind) {
        case Kind::Const: return resolve_const(it->second.index);
        case Kind::Var: {
          auto e = std::make_shared<Expr>();
          e->op = Op::Var;
          e->name = raw->name;
          e->index = static_cast<int>(it->second.index);
          if (it->second.index >= m_.variables.size())
            throw ParseError("variable '" + raw->name + "' used in a constant context", raw->pos);
          e->type = m_.variables[it->second.index].is_bool ? Type::Bool : Type::Int;
          e->constant = false;
          e->pos = raw->pos;
          return e;
        }
        case Kind::Formula: {
          if (m_.formulas.size() <= it->second.index)
            throw ParseError("formula '" + raw->name + "' used in a constant context", raw->pos);
          resolve_formula(it->second.index);
          const auto& def = m_.formulas[it->second.index];
          if (def.value->constant) return def.value;
          auto e = std::make_shared<Expr>();
          e->op = Op::Formula;
          e->name = raw->name;
          e->index = static_cast<int>(it->second.index);
          e->type = def.value->type;
          e->constant = false;
          e->pos = raw->pos;
          return e;
        }
      }
    }

    auto e = std::make_shared<Expr>(*raw);
    for (auto& a : e->args) a = resolve(a);
    const auto& a = e->args;
    auto arity = [&](std::size_t n) {
      if (a.size() != n) type_error(*e, "wrong number of arguments");
    };
    auto all_numeric = [&] {
      for (const auto& x : a)
        if (!numeric(x->type)) type_error(*x, "expected a numeric expression");
    };
    auto all_int = [&] {
      for (const auto& x : a)
        if (x->type != Type::Int) return false;
      return true;
    };

    switch (e->op) {
      case Op::Neg: all_numeric(); e->type = a[0]->type; break;
      case Op::Abs: arity(1); all_numeric(); e->type = a[0]->type; break;
      case Op::Not:
        if (a[0]->type != Type::Bool) type_error(*a[0], "'!' needs a bool operand");
        e->type = Type::Bool;
        break;
      case Op::Add:
      case Op::Sub:
      case Op::Mul: all_numeric(); e->type = all_int() ? Type::Int : Type::Double; break;
      case Op::Div: all_numeric(); e->type = Type::Double; break;
      case Op::Eq:
      case Op::Ne:
        if (numeric(a[0]->type) != numeric(a[1]->type)) type_error(*e, "cannot compare bool with number");
        e->type = Type::Bool;
        break;
      case Op::Lt:
      case Op::Le:
      case Op::Gt:
      case Op::Ge: all_numeric(); e->type = Type::Bool; break;
      case Op::And:
      case Op::Or:
      case Op::Implies:
        for (const auto& x : a)
          if (x->type != Type::Bool) type_error(*x, "expected a bool expression");
        e->type = Type::Bool;
        break;
      case Op::Ite:
        if (a[0]->type != Type::Bool) type_error(*a[0], "condition must be bool");
        if (numeric(a[1]->type) != numeric(a[2]->type)) type_error(*e, "branches have different types");
        if (a[1]->type == Type::Bool) e->type = Type::Bool;
        else e->type = (a[1]->type == Type::Int && a[2]->type == Type::Int) ? Type::Int : Type::Double;
        break;
      case Op::Min:
      case Op::Max:
        if (a.empty()) type_error(*e, "wrong number of arguments");
        all_numeric();
        e->type = all_int() ? Type::Int : Type::Double;
        break;
      case Op::Floor:
      case Op::Ceil:
      case Op::Round: arity(1); all_numeric(); e->type = Type::Int; break;
      case Op::Pow: arity(2); all_numeric(); e->type = all_int() ? Type::Int : Type::Double; break;
      case Op::Mod:
        arity(2);
        if (!all_int()) type_error(*e, "mod needs int operands");
        e->type = Type::Int;
        break;
      default: break;
    }

    e->constant = std::all_of(a.begin(), a.end(), [](const ExprPtr& x) { return x->constant; });
    if (!e->constant) return e;

    // fold constant subtrees to literals, keeping exact values when available
    double v = eval_.eval(*e);
    std::optional<Rational> exact;
    if (e->type != Type::Bool) {
      try {
        exact = eval_.eval_exact(*e);
      } catch (const ModelError&) {
      }
    }
    if (e->type == Type::Int && std::isfinite(v) && v != std::floor(v))
      type_error(*e, "integer expression has a fractional value");
    return make_literal(v, e->type, std::move(exact), e->pos);
  }
};

}  // namespace

SymbolicModel parse_model(std::string_view text) {
  Parser p(tokenize(text));
  p.parse();
  SymbolicModel m;
  Resolver r(p, m);
  r.run();
  return m;
}

}  // namespace windcheck::gcl
