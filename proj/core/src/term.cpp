#include "chcadt/term.hpp"

namespace chcadt {

void Term::collect_vars(std::vector<int32_t>& out) const {
  switch (kind_) {
    case Kind::Var:
      out.push_back(a_);
      break;
    case Kind::Ctor:
      for (const Term& t : args_) t.collect_vars(out);
      break;
    default:
      break;
  }
}

bool Term::contains_var(int32_t v) const {
  switch (kind_) {
    case Kind::Var:
      return a_ == v;
    case Kind::Ctor:
      for (const Term& t : args_)
        if (t.contains_var(v)) return true;
      return false;
    default:
      return false;
  }
}

bool Term::has_nonvar_basic_subterm() const {
  switch (kind_) {
    case Kind::Var:
      return false;
    case Kind::Ctor:
      for (const Term& t : args_)
        if (t.has_nonvar_basic_subterm()) return true;
      return false;
    default:
      return true;  // a basic constant
  }
}

int compare(const Term& a, const Term& b) {
  if (a.kind() != b.kind())
    return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case Term::Kind::Var:
      if (a.var_id() != b.var_id()) return a.var_id() < b.var_id() ? -1 : 1;
      return 0;
    case Term::Kind::Ctor: {
      if (a.adt() != b.adt()) return a.adt() < b.adt() ? -1 : 1;
      if (a.ctor_id() != b.ctor_id()) return a.ctor_id() < b.ctor_id() ? -1 : 1;
      size_t n = std::min(a.args().size(), b.args().size());
      for (size_t i = 0; i < n; ++i) {
        int c = compare(a.args()[i], b.args()[i]);
        if (c != 0) return c;
      }
      if (a.args().size() != b.args().size())
        return a.args().size() < b.args().size() ? -1 : 1;
      return 0;
    }
    default:
      if (a.int_value() != b.int_value())
        return a.int_value() < b.int_value() ? -1 : 1;
      return 0;
  }
}

const Term* Subst::walk(int32_t v) const {
  const Term* t = lookup(v);
  while (t && t->is_var()) {
    if (t->var_id() == v) break;  // tolerate an identity binding
    const Term* next = lookup(t->var_id());
    if (!next) break;
    v = t->var_id();
    t = next;
  }
  return t;
}

Term Subst::apply(const Term& t) const {
  switch (t.kind()) {
    case Term::Kind::Var: {
      const Term* bound = lookup(t.var_id());
      if (!bound) return t;
      if (bound->is_var() && bound->var_id() == t.var_id()) return t;
      return apply(*bound);
    }
    case Term::Kind::Ctor: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const Term& arg : t.args()) args.push_back(apply(arg));
      return Term::ctor(t.adt(), t.ctor_id(), std::move(args));
    }
    default:
      return t;
  }
}

Term Subst::apply_flat(const Term& t) const {
  switch (t.kind()) {
    case Term::Kind::Var: {
      const Term* bound = lookup(t.var_id());
      return bound ? *bound : t;
    }
    case Term::Kind::Ctor: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const Term& arg : t.args()) args.push_back(apply_flat(arg));
      return Term::ctor(t.adt(), t.ctor_id(), std::move(args));
    }
    default:
      return t;
  }
}

}  // namespace chcadt
