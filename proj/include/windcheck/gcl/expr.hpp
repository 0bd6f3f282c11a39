#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "windcheck/error.hpp"

namespace windcheck::gcl {

using Rational = boost::multiprecision::cpp_rational;

enum class Type : std::uint8_t { Bool, Int, Double };

const char* type_name(Type t);

enum class Op : std::uint8_t {
  Literal,
  Ident,    // unresolved name; replaced during model validation
  Var,
  Formula,
  Neg,
  Not,
  Add,
  Sub,
  Mul,
  Div,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  And,
  Or,
  Implies,
  Ite,
  Min,
  Max,
  Floor,
  Ceil,
  Round,
  Pow,
  Mod,
  Abs,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Expression tree node. Numeric values (including booleans as 0/1) are held
/// as doubles; the static `type` decides integer/boolean semantics.
struct Expr {
  Op op = Op::Literal;
  Type type = Type::Int;
  double value = 0.0;
  std::optional<Rational> exact;  // literals only: exact decimal value
  std::string name;               // Ident/Var/Formula
  int index = -1;                 // Var/Formula slot after resolution
  std::vector<ExprPtr> args;
  SourcePos pos;
  // true when the expression references no variable (directly or via formulas)
  bool constant = true;
};

ExprPtr make_literal(double value, Type type, std::optional<Rational> exact = {},
                     SourcePos pos = {});
ExprPtr make_node(Op op, std::vector<ExprPtr> args, SourcePos pos = {});

/// Exact value of a decimal literal such as "0.125" or "3e-2".
Rational parse_decimal(const std::string& text);

/// Renders a rational as a terminating decimal when possible, else "p/q".
std::string format_rational(const Rational& r);

double rational_to_double(const Rational& r);

}  // namespace windcheck::gcl
