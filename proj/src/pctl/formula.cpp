#include "windcheck/pctl/formula.hpp"

#include <charconv>

namespace windcheck::pctl {

const char* to_string(RelOp op) {
  switch (op) {
    case RelOp::Eq: return "=";
    case RelOp::Ne: return "!=";
    case RelOp::Lt: return "<";
    case RelOp::Le: return "<=";
    case RelOp::Gt: return ">";
    case RelOp::Ge: return ">=";
  }
  return "?";
}

bool is_numeric_query(const Formula& f) {
  return f && (f->kind == StateFormula::Kind::ProbQuery || f->kind == StateFormula::Kind::RewardQuery);
}

namespace {

std::string number(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string wrap(const StateFormula& f) {
  using K = StateFormula::Kind;
  if (f.kind == K::And || f.kind == K::Or) return "(" + to_string(f) + ")";
  return to_string(f);
}

}  // namespace

std::string to_string(const StateFormula& f) {
  using K = StateFormula::Kind;
  switch (f.kind) {
    case K::True: return "true";
    case K::False: return "false";
    case K::Label: return "\"" + f.name + "\"";
    case K::VarCompare: return f.name + to_string(f.op) + std::to_string(f.value);
    case K::Not: return "!" + wrap(*f.lhs);
    case K::And: return wrap(*f.lhs) + " & " + wrap(*f.rhs);
    case K::Or: return wrap(*f.lhs) + " | " + wrap(*f.rhs);
    case K::ProbBound: return std::string("P") + to_string(f.op) + number(f.bound) + " [ " + to_string(*f.path) + " ]";
    case K::ProbQuery: return "P=? [ " + to_string(*f.path) + " ]";
    case K::RewardQuery: return "R{\"" + f.name + "\"}=? [ F " + wrap(*f.rhs) + " ]";
  }
  return "?";
}

std::string to_string(const PathFormula& f) {
  switch (f.kind) {
    case PathFormula::Kind::Next: return "X " + wrap(*f.rhs);
    case PathFormula::Kind::Until:
      if (f.written_as_eventually) return "F " + wrap(*f.rhs);
      return wrap(*f.lhs) + " U " + wrap(*f.rhs);
    case PathFormula::Kind::BoundedUntil:
      if (f.written_as_eventually) return "F<=" + std::to_string(f.steps) + " " + wrap(*f.rhs);
      return wrap(*f.lhs) + " U<=" + std::to_string(f.steps) + " " + wrap(*f.rhs);
  }
  return "?";
}

}  // namespace windcheck::pctl
