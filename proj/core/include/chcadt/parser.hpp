#pragma once

#include <string>
#include <vector>

#include "chcadt/clause.hpp"

namespace chcadt {

// A parsed problem: declarations plus clauses, already normalized so
// that every basic argument position holds a distinct variable.
struct Program {
  Context ctx;
  ClauseSet store;
  std::vector<int32_t> definite;
  std::vector<int32_t> goals;
};

// Throws ParseError (with position) on malformed input and Error for
// constructs outside the constraint fragment.
Program parse_program(const std::string& text);

}  // namespace chcadt
