#include "lexer.hpp"

#include <cctype>

namespace windcheck::gcl {

const char* token_name(Tok kind) {
  switch (kind) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::Real: return "number";
    case Tok::String: return "string";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Comma: return "','";
    case Tok::Arrow: return "'->'";
    case Tok::Prime: return "'''";
    case Tok::Eq: return "'='";
    case Tok::Ne: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::Not: return "'!'";
    case Tok::Implies: return "'=>'";
    case Tok::Question: return "'?'";
    case Tok::DotDot: return "'..'";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  std::size_t line = 1;
  std::size_t line_start = 0;

  auto here = [&] { return SourcePos{line, i - line_start + 1}; };
  auto peek = [&](std::size_t off) -> char {
    return i + off < text.size() ? text[i + off] : '\0';
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++i;
      ++line;
      line_start = i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && peek(1) == '/') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }

    Token tok;
    tok.pos = here();

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
        ++i;
      tok.kind = Tok::Ident;
      tok.text = std::string(text.substr(start, i - start));
      out.push_back(std::move(tok));
      continue;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      std::size_t start = i;
      bool real = false;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      // "0..5" is a range, not a real literal
      if (i < text.size() && text[i] == '.' && peek(1) != '.') {
        real = true;
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      }
      if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        std::size_t save = i;
        ++i;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
        if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
          real = true;
          while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        } else {
          i = save;
        }
      }
      tok.kind = real ? Tok::Real : Tok::Int;
      tok.text = std::string(text.substr(start, i - start));
      out.push_back(std::move(tok));
      continue;
    }

    if (c == '"') {
      std::size_t start = ++i;
      while (i < text.size() && text[i] != '"' && text[i] != '\n') ++i;
      if (i >= text.size() || text[i] != '"')
        throw ParseError("unterminated string", tok.pos);
      tok.kind = Tok::String;
      tok.text = std::string(text.substr(start, i - start));
      ++i;
      out.push_back(std::move(tok));
      continue;
    }

    auto two = [&](char a, char b) { return c == a && peek(1) == b; };
    std::size_t len = 1;
    if (two('-', '>')) { tok.kind = Tok::Arrow; len = 2; }
    else if (two('!', '=')) { tok.kind = Tok::Ne; len = 2; }
    else if (two('<', '=')) { tok.kind = Tok::Le; len = 2; }
    else if (two('>', '=')) { tok.kind = Tok::Ge; len = 2; }
    else if (two('=', '>')) { tok.kind = Tok::Implies; len = 2; }
    else if (two('.', '.')) { tok.kind = Tok::DotDot; len = 2; }
    else {
      switch (c) {
        case '[': tok.kind = Tok::LBracket; break;
        case ']': tok.kind = Tok::RBracket; break;
        case '(': tok.kind = Tok::LParen; break;
        case ')': tok.kind = Tok::RParen; break;
        case '{': tok.kind = Tok::LBrace; break;
        case '}': tok.kind = Tok::RBrace; break;
        case ';': tok.kind = Tok::Semi; break;
        case ':': tok.kind = Tok::Colon; break;
        case ',': tok.kind = Tok::Comma; break;
        case '\'': tok.kind = Tok::Prime; break;
        case '=': tok.kind = Tok::Eq; break;
        case '<': tok.kind = Tok::Lt; break;
        case '>': tok.kind = Tok::Gt; break;
        case '+': tok.kind = Tok::Plus; break;
        case '-': tok.kind = Tok::Minus; break;
        case '*': tok.kind = Tok::Star; break;
        case '/': tok.kind = Tok::Slash; break;
        case '&': tok.kind = Tok::And; break;
        case '|': tok.kind = Tok::Or; break;
        case '!': tok.kind = Tok::Not; break;
        case '?': tok.kind = Tok::Question; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", tok.pos);
      }
    }
    tok.text = std::string(text.substr(i, len));
    i += len;
    out.push_back(std::move(tok));
  }

  Token end;
  end.kind = Tok::End;
  end.pos = here();
  out.push_back(std::move(end));
  return out;
}

}  // namespace windcheck::gcl
