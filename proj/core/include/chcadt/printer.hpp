#pragma once

#include <string>
#include <vector>

#include "chcadt/clause.hpp"

namespace chcadt {

std::string print_term(const Term& t, const Context& ctx);
std::string print_atom(const Atom& a, const Context& ctx);
std::string print_constraint(const Constraint& c, const Context& ctx);
std::string print_clause(const Clause& c, const Context& ctx);

}  // namespace chcadt
