#include "chcadt/clause.hpp"

#include <algorithm>
#include <set>

namespace chcadt {

bool Clause::has_basic_types(const Context& ctx) const {
  if (head && atom_has_adt_arg(*head, ctx)) return false;
  for (const Atom& a : body)
    if (atom_has_adt_arg(a, ctx)) return false;
  return true;
}

std::vector<int32_t> Clause::all_vars() const {
  std::vector<int32_t> out;
  std::set<int32_t> seen;
  auto take = [&](int32_t v) {
    if (seen.insert(v).second) out.push_back(v);
  };
  std::vector<int32_t> tmp;
  if (head)
    for (const Term& t : head->args) t.collect_vars(tmp);
  for (const Atom& a : body)
    for (const Term& t : a.args) t.collect_vars(tmp);
  for (int32_t v : tmp) take(v);
  for (int32_t v : constraint.vars()) take(v);
  return out;
}

bool Clause::is_normalized(const Context& ctx) const {
  if (head && !atom_is_normalized(*head, ctx)) return false;
  for (const Atom& a : body)
    if (!atom_is_normalized(a, ctx)) return false;
  return true;
}

Clause rename_apart(const Clause& c, Context& ctx,
                    std::map<int32_t, int32_t>* renaming) {
  std::map<int32_t, int32_t> ren;
  Subst s;
  for (int32_t v : c.all_vars()) {
    int32_t fresh = ctx.vars.fresh(ctx.vars.name(v), ctx.vars.type(v));
    ren[v] = fresh;
    s.bind(v, Term::var(fresh, ctx.vars.type(v)));
  }
  Clause out;
  out.mark = c.mark;
  if (c.head) out.head = apply(s, *c.head);
  for (const Atom& a : c.body) out.body.push_back(apply(s, a));
  out.constraint = c.constraint.renamed(ren);
  if (renaming) *renaming = std::move(ren);
  return out;
}

namespace {

Term normalize_term(const Term& t, std::set<int32_t>& seen_basic, Clause& c,
                    Context& ctx) {
  switch (t.kind()) {
    case Term::Kind::IntConst: {
      int32_t v = ctx.vars.fresh("K", Type::integer());
      c.constraint.add(make_atom(CmpOp::Eq, LinearExpr::variable(v),
                                 LinearExpr::literal(t.int_value())));
      seen_basic.insert(v);
      return Term::var(v, Type::integer());
    }
    case Term::Kind::BoolConst: {
      int32_t v = ctx.vars.fresh("B", Type::boolean());
      c.constraint.add(BoolLit{v, t.bool_value()});
      seen_basic.insert(v);
      return Term::var(v, Type::boolean());
    }
    case Term::Kind::Var: {
      if (!t.type().is_basic()) return t;
      if (seen_basic.insert(t.var_id()).second) return t;
      if (t.type().kind == TypeKind::Bool)
        throw Error("repeated boolean variable " +
                    ctx.vars.name(t.var_id()) +
                    " in one atom cannot be normalized");
      int32_t v = ctx.vars.fresh(ctx.vars.name(t.var_id()), t.type());
      c.constraint.add(make_atom(CmpOp::Eq, LinearExpr::variable(v),
                                 LinearExpr::variable(t.var_id())));
      seen_basic.insert(v);
      return Term::var(v, t.type());
    }
    case Term::Kind::Ctor: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const Term& arg : t.args())
        args.push_back(normalize_term(arg, seen_basic, c, ctx));
      return Term::ctor(t.adt(), t.ctor_id(), std::move(args));
    }
  }
  return t;
}

void normalize_atom(Atom& a, Clause& c, Context& ctx) {
  std::set<int32_t> seen_basic;
  for (Term& t : a.args) t = normalize_term(t, seen_basic, c, ctx);
}

}  // namespace

void normalize_atoms(Clause& c, Context& ctx) {
  if (c.head) normalize_atom(*c.head, c, ctx);
  for (Atom& a : c.body) normalize_atom(a, c, ctx);
}

void simplify_constraint(Clause& c) {
  std::set<int32_t> live;
  {
    std::vector<int32_t> vs;
    if (c.head)
      for (const Term& t : c.head->args) t.collect_vars(vs);
    for (const Atom& a : c.body)
      for (const Term& t : a.args) t.collect_vars(vs);
    live.insert(vs.begin(), vs.end());
  }
  if (c.constraint.is_bottom()) return;

  std::vector<LinearAtom> atoms = c.constraint.atoms();
  std::vector<BoolLit> bools = c.constraint.bools();

  // Substitute away dead variables defined by unit-coefficient
  // equalities; exact over the integers.
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < atoms.size(); ++i) {
      if (atoms[i].rel != LinearAtom::Rel::Eq) continue;
      int32_t x = -1;
      Coeff a = 0;
      for (const auto& [v, coeff] : atoms[i].coeffs) {
        if (!live.count(v) && (coeff == 1 || coeff == -1)) {
          x = v;
          a = coeff;
          break;
        }
      }
      if (x < 0) continue;
      LinearAtom eq = atoms[i];
      atoms.erase(atoms.begin() + i);
      // x = (constant - rest) / a with a in {1,-1}.
      for (LinearAtom& other : atoms) {
        auto it = other.coeffs.find(x);
        if (it == other.coeffs.end()) continue;
        Coeff b = it->second;
        other.coeffs.erase(it);
        Coeff scale = b * a;  // a inverse equals a for unit coefficients
        for (const auto& [v, coeff] : eq.coeffs) {
          if (v == x) continue;
          other.coeffs[v] -= scale * coeff;
          if (other.coeffs[v] == 0) other.coeffs.erase(v);
        }
        other.constant -= scale * eq.constant;
        other.normalize();
      }
      changed = true;
      break;
    }
  }

  // Drop vacuous atoms over remaining dead variables.
  changed = true;
  while (changed) {
    changed = false;
    std::set<int32_t> present;
    for (const LinearAtom& a : atoms)
      for (const auto& [v, coeff] : a.coeffs) present.insert(v);
    for (int32_t x : present) {
      if (live.count(x)) continue;
      bool uniform = true;
      int sign = 0;
      for (const LinearAtom& a : atoms) {
        auto it = a.coeffs.find(x);
        if (it == a.coeffs.end()) continue;
        if (a.rel == LinearAtom::Rel::Ne) continue;
        if (a.rel == LinearAtom::Rel::Eq) {
          uniform = false;
          break;
        }
        int s = it->second > 0 ? 1 : -1;
        if (sign == 0)
          sign = s;
        else if (sign != s)
          uniform = false;
      }
      if (!uniform) continue;
      size_t before = atoms.size();
      atoms.erase(std::remove_if(atoms.begin(), atoms.end(),
                                 [&](const LinearAtom& a) {
                                   return a.mentions(x);
                                 }),
                  atoms.end());
      if (atoms.size() != before) changed = true;
    }
  }
  bools.erase(std::remove_if(bools.begin(), bools.end(),
                             [&](const BoolLit& l) {
                               return !live.count(l.var);
                             }),
              bools.end());

  Constraint out;
  for (LinearAtom& a : atoms) out.add(std::move(a));
  for (const BoolLit& l : bools) out.add(l);
  c.constraint = std::move(out);
}

namespace {

struct VarBijection {
  std::map<int32_t, int32_t> fwd, rev;

  bool bind(int32_t a, int32_t b) {
    auto f = fwd.find(a);
    if (f != fwd.end()) return f->second == b;
    auto r = rev.find(b);
    if (r != rev.end()) return false;
    fwd[a] = b;
    rev[b] = a;
    return true;
  }
};

bool variant_terms(VarBijection& m, const Term& a, const Term& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Var:
      return m.bind(a.var_id(), b.var_id());
    case Term::Kind::Ctor: {
      if (a.adt() != b.adt() || a.ctor_id() != b.ctor_id()) return false;
      if (a.args().size() != b.args().size()) return false;
      for (size_t i = 0; i < a.args().size(); ++i)
        if (!variant_terms(m, a.args()[i], b.args()[i])) return false;
      return true;
    }
    case Term::Kind::IntConst:
      return a.int_value() == b.int_value();
    case Term::Kind::BoolConst:
      return a.bool_value() == b.bool_value();
  }
  return false;
}

bool variant_atoms(VarBijection& m, const Atom& a, const Atom& b) {
  if (a.pred != b.pred || a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!variant_terms(m, a.args[i], b.args[i])) return false;
  return true;
}

bool constraints_match(const Constraint& ca, const Constraint& cb,
                       const VarBijection& m) {
  // Extend the bijection over variables that occur only in constraints.
  std::vector<int32_t> ua, ub;
  for (int32_t v : ca.vars())
    if (!m.fwd.count(v)) ua.push_back(v);
  for (int32_t v : cb.vars())
    if (!m.rev.count(v)) ub.push_back(v);
  if (ua.size() != ub.size()) return false;
  if (ua.size() > 8) return false;  // give up rather than blow up
  std::sort(ub.begin(), ub.end());
  do {
    std::map<int32_t, int32_t> ren = m.fwd;
    for (size_t i = 0; i < ua.size(); ++i) ren[ua[i]] = ub[i];
    if (ca.renamed(ren).same_atoms(cb)) return true;
  } while (std::next_permutation(ub.begin(), ub.end()));
  return false;
}

bool match_bodies(const Clause& a, const Clause& b, size_t i,
                  std::vector<bool>& used, VarBijection m) {
  if (i == a.body.size()) return constraints_match(a.constraint, b.constraint, m);
  for (size_t j = 0; j < b.body.size(); ++j) {
    if (used[j]) continue;
    VarBijection next = m;
    if (!variant_atoms(next, a.body[i], b.body[j])) continue;
    used[j] = true;
    if (match_bodies(a, b, i + 1, used, std::move(next))) return true;
    used[j] = false;
  }
  return false;
}

}  // namespace

bool clause_variant_equal(const Clause& a, const Clause& b,
                          const Context& ctx) {
  (void)ctx;
  if (a.is_goal() != b.is_goal()) return false;
  if (a.body.size() != b.body.size()) return false;
  VarBijection m;
  if (a.head && !variant_atoms(m, *a.head, *b.head)) return false;
  std::vector<bool> used(b.body.size(), false);
  return match_bodies(a, b, 0, used, std::move(m));
}

void ClauseSet::remove(int32_t id) {
  clauses_.erase(id);
  order_.erase(std::remove(order_.begin(), order_.end(), id), order_.end());
}

namespace {

bool match_sets(const std::vector<const Clause*>& a,
                const std::vector<const Clause*>& b, size_t i,
                std::vector<bool>& used, const Context& ctx) {
  if (i == a.size()) return true;
  for (size_t j = 0; j < b.size(); ++j) {
    if (used[j]) continue;
    if (!clause_variant_equal(*a[i], *b[j], ctx)) continue;
    used[j] = true;
    if (match_sets(a, b, i + 1, used, ctx)) return true;
    used[j] = false;
  }
  return false;
}

}  // namespace

bool clause_set_variant_equal(const std::vector<const Clause*>& a,
                              const std::vector<const Clause*>& b,
                              const Context& ctx) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  return match_sets(a, b, 0, used, ctx);
}

}  // namespace chcadt
