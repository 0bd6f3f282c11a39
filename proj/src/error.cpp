#include "windcheck/error.hpp"

namespace windcheck {

ParseError::ParseError(const std::string& what, SourcePos pos)
    : Error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + what),
      message_(what),
      pos_(pos) {}

}  // namespace windcheck
