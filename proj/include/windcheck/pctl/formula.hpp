#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

namespace windcheck::pctl {

enum class RelOp : std::uint8_t { Eq, Ne, Lt, Le, Gt, Ge };

const char* to_string(RelOp op);

struct StateFormula;
struct PathFormula;
using StatePtr = std::shared_ptr<const StateFormula>;
using PathPtr = std::shared_ptr<const PathFormula>;

struct StateFormula {
  enum class Kind : std::uint8_t {
    True,
    False,
    Label,        // "name"
    VarCompare,   // name op value, against state valuations
    Not,
    And,
    Or,
    ProbBound,    // P op bound [ path ]
    ProbQuery,    // P=? [ path ], top level only
    RewardQuery,  // R{"name"}=? [ F target ], top level only
  };
  Kind kind = Kind::True;
  std::string name;
  RelOp op = RelOp::Ge;
  double bound = 0.0;
  std::int64_t value = 0;
  StatePtr lhs;
  StatePtr rhs;
  PathPtr path;
};

struct PathFormula {
  enum class Kind : std::uint8_t { Next, Until, BoundedUntil };
  Kind kind = Kind::Until;
  StatePtr lhs;  // unused for Next
  StatePtr rhs;
  std::uint64_t steps = 0;
  bool written_as_eventually = false;  // printing only: F phi is true U phi
};

/// A whole property. Numerical queries may only appear at the top.
using Formula = StatePtr;

bool is_numeric_query(const Formula& f);

std::string to_string(const StateFormula& f);
std::string to_string(const PathFormula& f);

/// Parses PRISM-style property text, e.g. `P=? [ F "goal" ]`,
/// `P>=0.5 [ X "a" ]`, `P=? [ "a" U<=3 "b" ]`, `R{"mt"}=? [ F "done" ]`.
/// Throws ParseError.
Formula parse_formula(std::string_view text);

}  // namespace windcheck::pctl
