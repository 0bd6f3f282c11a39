#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "windcheck/error.hpp"

namespace windcheck::gcl {

enum class Tok {
  End,
  Ident,
  Int,
  Real,
  String,
  LBracket,
  RBracket,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Semi,
  Colon,
  Comma,
  Arrow,     // ->
  Prime,     // '
  Eq,        // =
  Ne,        // !=
  Lt,
  Le,
  Gt,
  Ge,
  Plus,
  Minus,
  Star,
  Slash,
  And,       // &
  Or,        // |
  Not,       // !
  Implies,   // =>
  Question,
  DotDot,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

/// Splits model text into tokens. `//` comments run to end of line.
std::vector<Token> tokenize(std::string_view text);

const char* token_name(Tok kind);

}  // namespace windcheck::gcl
