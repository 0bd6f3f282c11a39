#include <charconv>
#include <cmath>
#include <optional>

#include "../gcl/lexer.hpp"
#include "windcheck/error.hpp"
#include "windcheck/pctl/formula.hpp"

namespace windcheck::pctl {

namespace {

using gcl::Tok;
using gcl::Token;
using K = StateFormula::Kind;

class FormulaParser {
 public:
  explicit FormulaParser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula parse() {
    Formula f = parse_state(true);
    if (!is(Tok::End)) fail("unexpected trailing input");
    return f;
  }

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;

  const Token& cur() const { return toks_[i_]; }
  const Token& look(std::size_t k) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  bool is(Tok k) const { return cur().kind == k; }
  bool is_word(const char* w) const { return cur().kind == Tok::Ident && cur().text == w; }
  const Token& advance() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    std::string got = cur().kind == Tok::End ? "end of input" : "'" + cur().text + "'";
    throw ParseError(msg + ", found " + got, cur().pos);
  }

  const Token& expect(Tok k, const char* what) {
    if (!is(k)) fail(std::string("expected ") + what);
    return advance();
  }

  static StatePtr node(K kind) {
    auto f = std::make_shared<StateFormula>();
    f->kind = kind;
    return f;
  }

  // `top` is true only for the outermost formula, where numerical queries live
  StatePtr parse_state(bool top) {
    StatePtr lhs = parse_and(top);
    while (is(Tok::Or)) {
      advance();
      auto f = std::make_shared<StateFormula>();
      f->kind = K::Or;
      f->lhs = no_query(lhs);
      f->rhs = no_query(parse_and(false));
      lhs = f;
    }
    return lhs;
  }

  StatePtr no_query(StatePtr f) {
    if (is_numeric_query(f))
      throw ParseError("numerical queries (=?) are only allowed at the top level", cur().pos);
    return f;
  }

  StatePtr parse_and(bool top) {
    StatePtr lhs = parse_not(top);
    while (is(Tok::And)) {
      advance();
      auto f = std::make_shared<StateFormula>();
      f->kind = K::And;
      f->lhs = no_query(lhs);
      f->rhs = no_query(parse_not(false));
      lhs = f;
    }
    return lhs;
  }

  StatePtr parse_not(bool top) {
    if (is(Tok::Not)) {
      advance();
      auto f = std::make_shared<StateFormula>();
      f->kind = K::Not;
      f->lhs = parse_not(false);
      return f;
    }
    return parse_atom(top);
  }

  double parse_number() {
    if (!is(Tok::Int) && !is(Tok::Real)) fail("expected a number");
    const std::string& t = advance().text;
    double v = 0;
    std::from_chars(t.data(), t.data() + t.size(), v);
    return v;
  }

  std::optional<RelOp> relop() const {
    switch (cur().kind) {
      case Tok::Eq: return RelOp::Eq;
      case Tok::Ne: return RelOp::Ne;
      case Tok::Lt: return RelOp::Lt;
      case Tok::Le: return RelOp::Le;
      case Tok::Gt: return RelOp::Gt;
      case Tok::Ge: return RelOp::Ge;
      default: return std::nullopt;
    }
  }

  StatePtr parse_atom(bool top) {
    if (is_word("true")) { advance(); return node(K::True); }
    if (is_word("false")) { advance(); return node(K::False); }
    if (is(Tok::String)) {
      auto f = std::make_shared<StateFormula>();
      f->kind = K::Label;
      f->name = advance().text;
      return f;
    }
    if (is(Tok::LParen)) {
      advance();
      StatePtr inner = parse_state(false);
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (is_word("P") && (look(1).kind == Tok::Eq || relop_at(1))) return parse_prob(top);
    if (is_word("R") && look(1).kind == Tok::LBrace) return parse_reward(top);
    if (is(Tok::Ident)) {
      auto f = std::make_shared<StateFormula>();
      f->kind = K::VarCompare;
      f->name = advance().text;
      auto op = relop();
      if (!op) fail("expected a comparison after variable '" + f->name + "'");
      f->op = *op;
      advance();
      bool negative = false;
      if (is(Tok::Minus)) {
        advance();
        negative = true;
      }
      if (!is(Tok::Int)) fail("expected an integer");
      f->value = std::stoll(advance().text) * (negative ? -1 : 1);
      return f;
    }
    fail("expected a state formula");
  }

  bool relop_at(std::size_t k) const {
    switch (look(k).kind) {
      case Tok::Lt:
      case Tok::Le:
      case Tok::Gt:
      case Tok::Ge: return true;
      default: return false;
    }
  }

  StatePtr parse_prob(bool top) {
    SourcePos pos = cur().pos;
    advance();  // P
    auto f = std::make_shared<StateFormula>();
    if (is(Tok::Eq) && look(1).kind == Tok::Question) {
      advance();
      advance();
      if (!top) throw ParseError("numerical queries (=?) are only allowed at the top level", pos);
      f->kind = K::ProbQuery;
    } else {
      f->kind = K::ProbBound;
      auto op = relop();
      if (!op || *op == RelOp::Eq || *op == RelOp::Ne) fail("expected one of < <= > >= or =?");
      f->op = *op;
      advance();
      f->bound = parse_number();
      if (!(f->bound >= 0.0 && f->bound <= 1.0))
        throw ParseError("probability bound outside [0,1]", pos);
    }
    expect(Tok::LBracket, "'['");
    f->path = parse_path();
    expect(Tok::RBracket, "']'");
    return f;
  }

  StatePtr parse_reward(bool top) {
    SourcePos pos = cur().pos;
    advance();  // R
    expect(Tok::LBrace, "'{'");
    auto f = std::make_shared<StateFormula>();
    f->kind = K::RewardQuery;
    f->name = expect(Tok::String, "reward structure name string").text;
    expect(Tok::RBrace, "'}'");
    if (!(is(Tok::Eq) && look(1).kind == Tok::Question)) fail("expected '=?' (only reward queries are supported)");
    advance();
    advance();
    if (!top) throw ParseError("numerical queries (=?) are only allowed at the top level", pos);
    expect(Tok::LBracket, "'['");
    if (!is_word("F")) fail("expected 'F' (reachability reward)");
    advance();
    f->rhs = parse_state(false);
    expect(Tok::RBracket, "']'");
    return f;
  }

  std::uint64_t parse_bound() {
    if (!is(Tok::Le)) return 0;
    advance();
    if (!is(Tok::Int)) fail("expected a step bound");
    return std::stoull(advance().text);
  }

  PathPtr parse_path() {
    auto p = std::make_shared<PathFormula>();
    if (is_word("X")) {
      advance();
      p->kind = PathFormula::Kind::Next;
      p->rhs = parse_state(false);
      return p;
    }
    if (is_word("F")) {
      advance();
      p->written_as_eventually = true;
      p->lhs = node(K::True);
      if (is(Tok::Le)) {
        p->kind = PathFormula::Kind::BoundedUntil;
        p->steps = parse_bound();
      } else {
        p->kind = PathFormula::Kind::Until;
      }
      p->rhs = parse_state(false);
      return p;
    }
    p->lhs = parse_state(false);
    if (!is_word("U")) fail("expected 'U'");
    advance();
    if (is(Tok::Le)) {
      p->kind = PathFormula::Kind::BoundedUntil;
      p->steps = parse_bound();
    } else {
      p->kind = PathFormula::Kind::Until;
    }
    p->rhs = parse_state(false);
    return p;
  }
};

}  // namespace

Formula parse_formula(std::string_view text) {
  FormulaParser p(gcl::tokenize(text));
  return p.parse();
}

}  // namespace windcheck::pctl
