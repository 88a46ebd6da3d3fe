#pragma once

// Syntactic unification and one-sided matching.

#include <optional>

#include "chcadt/atom.hpp"

namespace chcadt {

// Extends s to a unifier of a and b, with occurs check. On failure s may
// hold partial bindings and must be discarded. When two unbound variables
// meet, the right one is bound to the left one, so callers that pass
// their own atom on the left keep its variable names in the result.
bool unify_into(Subst& s, const Term& a, const Term& b);
bool unify_into(Subst& s, const Atom& a, const Atom& b);

// Most general unifier, or nullopt if none exists.
std::optional<Subst> unify(const Term& a, const Term& b);
std::optional<Subst> unify(const Atom& a, const Atom& b);

// Extends s so that pattern instantiated by s equals target; binds only
// pattern variables and treats target variables as constants. On failure
// s may hold partial bindings.
bool match_into(Subst& s, const Term& pattern, const Term& target);
bool match_into(Subst& s, const Atom& pattern, const Atom& target);

}  // namespace chcadt
