#include "windcheck/gcl/expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "windcheck/gcl/eval.hpp"

namespace windcheck::gcl {

using boost::multiprecision::cpp_int;

const char* type_name(Type t) {
  switch (t) {
    case Type::Bool: return "bool";
    case Type::Int: return "int";
    case Type::Double: return "double";
  }
  return "?";
}

ExprPtr make_literal(double value, Type type, std::optional<Rational> exact, SourcePos pos) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Literal;
  e->type = type;
  e->value = value;
  e->exact = std::move(exact);
  e->pos = pos;
  return e;
}

ExprPtr make_node(Op op, std::vector<ExprPtr> args, SourcePos pos) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->args = std::move(args);
  e->pos = pos;
  return e;
}

Rational parse_decimal(const std::string& text) {
  std::string mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string::npos) {
    mantissa = text.substr(0, e);
    exponent = std::strtol(text.c_str() + e + 1, nullptr, 10);
  }
  std::string digits;
  for (char c : mantissa) {
    if (c == '.') continue;
    digits.push_back(c);
  }
  if (auto dot = mantissa.find('.'); dot != std::string::npos)
    exponent -= static_cast<long>(mantissa.size() - dot - 1);
  // a leading zero would make cpp_int read the digits as octal
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
  if (digits.empty()) digits = "0";
  cpp_int num(digits);
  cpp_int scale = 1;
  for (long k = 0; k < std::labs(exponent); ++k) scale *= 10;
  if (exponent >= 0) return Rational(num * scale);
  return Rational(num, scale);
}

std::string format_rational(const Rational& r) {
  cpp_int num = boost::multiprecision::numerator(r);
  cpp_int den = boost::multiprecision::denominator(r);
  cpp_int d = den;
  int twos = 0;
  int fives = 0;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  if (d != 1) return num.str() + "/" + den.str();

  int places = std::max(twos, fives);
  cpp_int scale = 1;
  for (int k = 0; k < places; ++k) scale *= 10;
  cpp_int scaled = num * (scale / den);
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string s = scaled.str();
  if (places > 0) {
    if (static_cast<int>(s.size()) <= places)
      s.insert(0, static_cast<std::size_t>(places - static_cast<int>(s.size()) + 1), '0');
    s.insert(s.size() - static_cast<std::size_t>(places), ".");
  }
  return negative ? "-" + s : s;
}

double rational_to_double(const Rational& r) {
  cpp_int num = boost::multiprecision::numerator(r);
  cpp_int den = boost::multiprecision::denominator(r);
  const cpp_int limit = cpp_int(1) << 53;
  if (abs(num) <= limit && den <= limit)
    return num.convert_to<double>() / den.convert_to<double>();
  return r.convert_to<double>();
}

// ---------------------------------------------------------------------------

Evaluator::Evaluator(const SymbolicModel& model)
    : model_(model), memo_(model.formulas.size()), stamp_(model.formulas.size(), 0) {}

void Evaluator::bind(std::span<const std::int32_t> state) {
  state_ = state;
  if (++generation_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    generation_ = 1;
  }
}

namespace {

double to_type(double v, Type t) { return t == Type::Bool ? (v != 0.0 ? 1.0 : 0.0) : v; }

}  // namespace

double Evaluator::eval(const Expr& e) {
  const auto& a = e.args;
  switch (e.op) {
    case Op::Literal: return e.value;
    case Op::Var: return static_cast<double>(state_[static_cast<std::size_t>(e.index)]);
    case Op::Formula: {
      auto slot = static_cast<std::size_t>(e.index);
      if (stamp_[slot] != generation_) {
        memo_[slot] = eval(*model_.formulas[slot].value);
        stamp_[slot] = generation_;
      }
      return memo_[slot];
    }
    case Op::Ident:
      throw ModelError("unresolved identifier '" + e.name + "'");
    case Op::Neg: return -eval(*a[0]);
    case Op::Not: return eval(*a[0]) != 0.0 ? 0.0 : 1.0;
    case Op::Add: return eval(*a[0]) + eval(*a[1]);
    case Op::Sub: return eval(*a[0]) - eval(*a[1]);
    case Op::Mul: return eval(*a[0]) * eval(*a[1]);
    case Op::Div: {
      double den = eval(*a[1]);
      if (den == 0.0) throw ModelError("division by zero at line " + std::to_string(e.pos.line));
      return eval(*a[0]) / den;
    }
    case Op::Eq: return eval(*a[0]) == eval(*a[1]) ? 1.0 : 0.0;
    case Op::Ne: return eval(*a[0]) != eval(*a[1]) ? 1.0 : 0.0;
    case Op::Lt: return eval(*a[0]) < eval(*a[1]) ? 1.0 : 0.0;
    case Op::Le: return eval(*a[0]) <= eval(*a[1]) ? 1.0 : 0.0;
    case Op::Gt: return eval(*a[0]) > eval(*a[1]) ? 1.0 : 0.0;
    case Op::Ge: return eval(*a[0]) >= eval(*a[1]) ? 1.0 : 0.0;
    case Op::And: return (eval(*a[0]) != 0.0 && eval(*a[1]) != 0.0) ? 1.0 : 0.0;
    case Op::Or: return (eval(*a[0]) != 0.0 || eval(*a[1]) != 0.0) ? 1.0 : 0.0;
    case Op::Implies: return (eval(*a[0]) == 0.0 || eval(*a[1]) != 0.0) ? 1.0 : 0.0;
    case Op::Ite: return to_type(eval(*a[0]) != 0.0 ? eval(*a[1]) : eval(*a[2]), e.type);
    case Op::Min: {
      double m = eval(*a[0]);
      for (std::size_t i = 1; i < a.size(); ++i) m = std::min(m, eval(*a[i]));
      return m;
    }
    case Op::Max: {
      double m = eval(*a[0]);
      for (std::size_t i = 1; i < a.size(); ++i) m = std::max(m, eval(*a[i]));
      return m;
    }
    case Op::Floor: return std::floor(eval(*a[0]));
    case Op::Ceil: return std::ceil(eval(*a[0]));
    case Op::Round: return std::floor(eval(*a[0]) + 0.5);
    case Op::Pow: return std::pow(eval(*a[0]), eval(*a[1]));
    case Op::Mod: {
      double x = eval(*a[0]);
      double m = eval(*a[1]);
      if (m == 0.0) throw ModelError("mod by zero at line " + std::to_string(e.pos.line));
      double r = std::fmod(x, m);
      return (r < 0) ? r + std::fabs(m) : r;
    }
    case Op::Abs: return std::fabs(eval(*a[0]));
  }
  return 0.0;
}

Rational Evaluator::eval_exact(const Expr& e) {
  const auto& a = e.args;
  switch (e.op) {
    case Op::Literal:
      if (e.exact) return *e.exact;
      if (e.type != Type::Double) return Rational(static_cast<long long>(e.value));
      break;
    case Op::Var: return Rational(state_[static_cast<std::size_t>(e.index)]);
    case Op::Formula: return eval_exact(*model_.formulas[static_cast<std::size_t>(e.index)].value);
    case Op::Neg: return -eval_exact(*a[0]);
    case Op::Add: return eval_exact(*a[0]) + eval_exact(*a[1]);
    case Op::Sub: return eval_exact(*a[0]) - eval_exact(*a[1]);
    case Op::Mul: return eval_exact(*a[0]) * eval_exact(*a[1]);
    case Op::Div: {
      Rational den = eval_exact(*a[1]);
      if (den == 0) throw ModelError("division by zero at line " + std::to_string(e.pos.line));
      return eval_exact(*a[0]) / den;
    }
    case Op::Ite: return test(*a[0]) ? eval_exact(*a[1]) : eval_exact(*a[2]);
    case Op::Min:
    case Op::Max: {
      Rational m = eval_exact(*a[0]);
      for (std::size_t i = 1; i < a.size(); ++i) {
        Rational v = eval_exact(*a[i]);
        if (e.op == Op::Min ? v < m : v > m) m = v;
      }
      return m;
    }
    default: break;
  }
  throw ModelError("probability expression at line " + std::to_string(e.pos.line) +
                   " is not exactly representable");
}

}  // namespace windcheck::gcl
