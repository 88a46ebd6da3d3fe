#include "chcadt/unify.hpp"

namespace chcadt {

namespace {

// Resolves t one step: an s-bound variable becomes its representative
// binding, anything else is returned unchanged.
Term walk_term(const Subst& s, const Term& t) {
  if (!t.is_var()) return t;
  const Term* bound = s.walk(t.var_id());
  return bound ? *bound : t;
}

bool occurs(const Subst& s, int32_t v, const Term& t) {
  Term w = walk_term(s, t);
  switch (w.kind()) {
    case Term::Kind::Var:
      return w.var_id() == v;
    case Term::Kind::Ctor:
      for (const Term& arg : w.args())
        if (occurs(s, v, arg)) return true;
      return false;
    default:
      return false;
  }
}

}  // namespace

bool unify_into(Subst& s, const Term& a, const Term& b) {
  Term x = walk_term(s, a);
  Term y = walk_term(s, b);
  if (x.is_var() && y.is_var()) {
    if (x.var_id() == y.var_id()) return true;
    s.bind(y.var_id(), x);
    return true;
  }
  if (x.is_var() || y.is_var()) {
    const Term& var = x.is_var() ? x : y;
    const Term& other = x.is_var() ? y : x;
    if (occurs(s, var.var_id(), other)) return false;
    s.bind(var.var_id(), other);
    return true;
  }
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case Term::Kind::Ctor: {
      if (x.adt() != y.adt() || x.ctor_id() != y.ctor_id()) return false;
      if (x.args().size() != y.args().size()) return false;
      for (size_t i = 0; i < x.args().size(); ++i)
        if (!unify_into(s, x.args()[i], y.args()[i])) return false;
      return true;
    }
    case Term::Kind::IntConst:
      return x.int_value() == y.int_value();
    case Term::Kind::BoolConst:
      return x.bool_value() == y.bool_value();
    default:
      return false;
  }
}

bool unify_into(Subst& s, const Atom& a, const Atom& b) {
  if (a.pred != b.pred || a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!unify_into(s, a.args[i], b.args[i])) return false;
  return true;
}

std::optional<Subst> unify(const Term& a, const Term& b) {
  Subst s;
  if (!unify_into(s, a, b)) return std::nullopt;
  return s;
}

std::optional<Subst> unify(const Atom& a, const Atom& b) {
  Subst s;
  if (!unify_into(s, a, b)) return std::nullopt;
  return s;
}

bool match_into(Subst& s, const Term& pattern, const Term& target) {
  if (pattern.is_var()) {
    const Term* bound = s.lookup(pattern.var_id());
    if (bound) return *bound == target;
    s.bind(pattern.var_id(), target);
    return true;
  }
  if (pattern.kind() != target.kind()) return false;
  switch (pattern.kind()) {
    case Term::Kind::Ctor: {
      if (pattern.adt() != target.adt() ||
          pattern.ctor_id() != target.ctor_id())
        return false;
      if (pattern.args().size() != target.args().size()) return false;
      for (size_t i = 0; i < pattern.args().size(); ++i)
        if (!match_into(s, pattern.args()[i], target.args()[i])) return false;
      return true;
    }
    case Term::Kind::IntConst:
      return pattern.int_value() == target.int_value();
    case Term::Kind::BoolConst:
      return pattern.bool_value() == target.bool_value();
    default:
      return false;
  }
}

bool match_into(Subst& s, const Atom& pattern, const Atom& target) {
  if (pattern.pred != target.pred || pattern.args.size() != target.args.size())
    return false;
  for (size_t i = 0; i < pattern.args.size(); ++i)
    if (!match_into(s, pattern.args[i], target.args[i])) return false;
  return true;
}

}  // namespace chcadt
