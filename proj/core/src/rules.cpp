#include "chcadt/rules.hpp"

#include <algorithm>
#include <set>

#include "chcadt/unify.hpp"

namespace chcadt {

namespace {

std::optional<std::map<int32_t, int32_t>> basic_rename_map(
    const Subst& s, const std::vector<int32_t>& vars, const Context& ctx) {
  std::map<int32_t, int32_t> out;
  for (int32_t v : vars) {
    Term image = s.apply(Term::var(v, ctx.vars.type(v)));
    if (!image.is_var()) return std::nullopt;
    out[v] = image.var_id();
  }
  return out;
}

// Like basic_rename_map but for matcher-produced substitutions, which
// must be applied simultaneously.
std::optional<std::map<int32_t, int32_t>> basic_rename_map_flat(
    const Subst& s, const std::vector<int32_t>& vars, const Context& ctx) {
  std::map<int32_t, int32_t> out;
  for (int32_t v : vars) {
    Term image = s.apply_flat(Term::var(v, ctx.vars.type(v)));
    if (!image.is_var()) return std::nullopt;
    out[v] = image.var_id();
  }
  return out;
}

std::optional<Clause> apply_clausewide(const Subst& s, const Clause& c,
                                       const Context& ctx) {
  auto ren = basic_rename_map(s, c.constraint.vars(), ctx);
  if (!ren) return std::nullopt;
  Clause out;
  out.mark = c.mark;
  if (c.head) out.head = apply(s, *c.head);
  for (const Atom& a : c.body) out.body.push_back(apply(s, a));
  out.constraint = c.constraint.renamed(*ren);
  return out;
}

std::vector<Term> input_terms(const Atom& a, const Context& ctx) {
  const PredDecl& decl = ctx.sig.pred(a.pred);
  std::vector<Term> out;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (decl.modes[i] == Mode::In) out.push_back(a.args[i]);
  return out;
}

bool is_subterm(const Term& needle, const Term& hay) {
  if (needle == hay) return true;
  if (hay.kind() != Term::Kind::Ctor) return false;
  for (const Term& arg : hay.args())
    if (is_subterm(needle, arg)) return true;
  return false;
}

size_t term_size(const Term& t) {
  if (t.kind() != Term::Kind::Ctor) return 1;
  size_t n = 1;
  for (const Term& arg : t.args()) n += term_size(arg);
  return n;
}

bool descends(const std::vector<Term>& from, const std::vector<Term>& to) {
  size_t from_size = 0, to_size = 0;
  for (const Term& t : from) from_size += term_size(t);
  for (const Term& t : to) {
    bool covered = false;
    for (const Term& s : from)
      if (is_subterm(t, s)) {
        covered = true;
        break;
      }
    if (!covered) return false;
    to_size += term_size(t);
  }
  return to_size < from_size;
}

void finish_clause(Clause& c, Context& ctx) {
  normalize_atoms(c, ctx);
  simplify_constraint(c);
}

std::vector<int32_t> clause_outside_vars(const Clause& c,
                                         const std::set<size_t>& skip) {
  std::vector<int32_t> vs;
  if (c.head)
    for (const Term& t : c.head->args) t.collect_vars(vs);
  for (size_t i = 0; i < c.body.size(); ++i) {
    if (skip.count(i)) continue;
    for (const Term& t : c.body[i].args) t.collect_vars(vs);
  }
  for (int32_t v : c.constraint.vars()) vs.push_back(v);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

}  // namespace

std::optional<int32_t> rule_define(RuleContext& rc, Clause def) {
  if (!def.head) return std::nullopt;
  std::vector<int32_t> body_preds;
  for (const Atom& a : def.body)
    if (std::find(body_preds.begin(), body_preds.end(), a.pred) ==
        body_preds.end())
      body_preds.push_back(a.pred);
  if (!rc.levels.add_eq_max(def.head->pred, body_preds)) return std::nullopt;
  int32_t pred = def.head->pred;
  int32_t id = rc.store.add(std::move(def));
  rc.ledger.add({StepKind::Define, -1, {id}, pred, id, -1, false});
  return id;
}

UnfoldOut rule_unfold(RuleContext& rc, int32_t id, size_t atom_index,
                      const std::vector<int32_t>& pred_clauses,
                      bool u_discharge) {
  const Clause c = rc.store.get(id);
  const Atom target = c.body[atom_index];
  std::vector<Term> target_inputs = input_terms(target, rc.ctx);

  UnfoldOut out;
  for (int32_t pid : pred_clauses) {
    Clause prog = rename_apart(rc.store.get(pid), rc.ctx);
    std::optional<Subst> sigma = unify(target, *prog.head);
    if (!sigma) continue;

    Clause derived;
    derived.mark = c.mark || prog.mark;
    std::vector<int32_t> origin;
    std::vector<bool> descending;
    if (c.head) derived.head = apply(*sigma, *c.head);

    std::vector<Term> unfolded_inputs;
    for (const Term& t : target_inputs)
      unfolded_inputs.push_back(sigma->apply(t));

    for (size_t i = 0; i < atom_index; ++i) {
      derived.body.push_back(apply(*sigma, c.body[i]));
      origin.push_back(static_cast<int32_t>(i));
      descending.push_back(false);
    }
    for (const Atom& a : prog.body) {
      Atom inst = apply(*sigma, a);
      bool desc = descends(unfolded_inputs, input_terms(inst, rc.ctx));
      derived.body.push_back(std::move(inst));
      origin.push_back(-1);
      descending.push_back(desc);
    }
    for (size_t i = atom_index + 1; i < c.body.size(); ++i) {
      derived.body.push_back(apply(*sigma, c.body[i]));
      origin.push_back(static_cast<int32_t>(i));
      descending.push_back(false);
    }

    Constraint conj = c.constraint;
    conj.conjoin(prog.constraint);
    std::vector<int32_t> cvars = conj.vars();
    auto ren = basic_rename_map(*sigma, cvars, rc.ctx);
    if (!ren) continue;
    derived.constraint = conj.renamed(*ren);

    finish_clause(derived, rc.ctx);
    if (is_satisfiable(derived.constraint) == Sat3::Unsat) continue;

    int32_t nid = rc.store.add(std::move(derived));
    out.clauses.push_back(nid);
    out.origin.push_back(std::move(origin));
    out.descending.push_back(std::move(descending));
  }
  rc.ledger.add({StepKind::Unfold, id, out.clauses, -1, -1,
                 static_cast<int32_t>(atom_index), u_discharge});
  return out;
}

std::optional<int32_t> rule_fold(RuleContext& rc, int32_t id,
                                 const std::vector<size_t>& positions,
                                 int32_t def_clause, const Subst& theta) {
  const Clause c = rc.store.get(id);
  const Clause& def = rc.store.get(def_clause);
  if (!def.head || positions.empty() ||
      positions.size() != def.body.size())
    return std::nullopt;
  for (size_t k = 0; k < positions.size(); ++k) {
    if (positions[k] >= c.body.size()) return std::nullopt;
    if (apply_flat(theta, def.body[k]) != c.body[positions[k]])
      return std::nullopt;
  }

  auto dren = basic_rename_map_flat(theta, def.constraint.vars(), rc.ctx);
  if (!dren) return std::nullopt;
  if (!entails(c.constraint, def.constraint.renamed(*dren)))
    return std::nullopt;

  if (c.head && !rc.levels.add_ge(c.head->pred, def.head->pred))
    return std::nullopt;

  // Existential variables of the definition must land on variables that
  // are fresh with respect to the rest of the clause and each other;
  // otherwise the result may lose counterexamples, so mark it.
  std::set<size_t> folded(positions.begin(), positions.end());
  std::vector<int32_t> outside = clause_outside_vars(c, folded);
  std::vector<int32_t> head_vars;
  for (const Term& t : def.head->args) t.collect_vars(head_vars);
  std::vector<int32_t> exist;
  {
    std::vector<int32_t> vs;
    for (const Atom& a : def.body)
      for (const Term& t : a.args) t.collect_vars(vs);
    for (int32_t v : def.constraint.vars()) vs.push_back(v);
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    for (int32_t v : vs)
      if (std::find(head_vars.begin(), head_vars.end(), v) == head_vars.end())
        exist.push_back(v);
  }
  bool mark = c.mark;
  for (size_t i = 0; i < exist.size() && !mark; ++i) {
    Term image = theta.apply_flat(
        Term::var(exist[i], rc.ctx.vars.type(exist[i])));
    if (!image.is_var()) {
      mark = true;
      break;
    }
    if (std::binary_search(outside.begin(), outside.end(), image.var_id())) {
      mark = true;
      break;
    }
    for (size_t j = 0; j < exist.size(); ++j) {
      if (j == i) continue;
      Term other = theta.apply_flat(
          Term::var(exist[j], rc.ctx.vars.type(exist[j])));
      std::vector<int32_t> ovars;
      other.collect_vars(ovars);
      if (std::find(ovars.begin(), ovars.end(), image.var_id()) !=
          ovars.end()) {
        mark = true;
        break;
      }
    }
  }

  Clause folded_clause;
  folded_clause.head = c.head;
  folded_clause.mark = mark;
  folded_clause.constraint = c.constraint;
  size_t insert_at = *std::min_element(positions.begin(), positions.end());
  for (size_t i = 0; i < c.body.size(); ++i) {
    if (i == insert_at)
      folded_clause.body.push_back(apply_flat(theta, *def.head));
    if (folded.count(i)) continue;
    folded_clause.body.push_back(c.body[i]);
  }
  if (insert_at == c.body.size())
    folded_clause.body.push_back(apply_flat(theta, *def.head));

  finish_clause(folded_clause, rc.ctx);
  int32_t nid = rc.store.add(std::move(folded_clause));
  rc.ledger.add({StepKind::Fold, id, {nid}, def.head->pred, def_clause, -1,
                 false});
  return nid;
}

bool rule_delete_unsat(RuleContext& rc, int32_t id) {
  if (is_satisfiable(rc.store.get(id).constraint) != Sat3::Unsat) return false;
  rc.ledger.add({StepKind::DeleteClause, id, {}, -1, -1, -1, false});
  return true;
}

RewriteOut rule_functionality(RuleContext& rc, int32_t id) {
  const Clause c = rc.store.get(id);
  for (size_t i = 0; i < c.body.size(); ++i) {
    const PredDecl& decl = rc.ctx.sig.pred(c.body[i].pred);
    if (!decl.functional) continue;
    for (size_t j = i + 1; j < c.body.size(); ++j) {
      if (c.body[j].pred != c.body[i].pred) continue;
      bool same_inputs = true;
      std::vector<std::pair<Term, Term>> outs;
      for (size_t k = 0; k < c.body[i].args.size(); ++k) {
        if (decl.modes[k] == Mode::In) {
          if (c.body[i].args[k] != c.body[j].args[k]) {
            same_inputs = false;
            break;
          }
        } else {
          outs.emplace_back(c.body[i].args[k], c.body[j].args[k]);
        }
      }
      if (!same_inputs) continue;

      Subst sigma;
      bool unified = true;
      for (auto& [u1, u2] : outs)
        if (!unify_into(sigma, u1, u2)) {
          unified = false;
          break;
        }
      if (!unified) {
        // Output shapes clash, so the two atoms cannot both hold.
        rc.ledger.add({StepKind::Functionality, id, {}, -1, -1, -1, false});
        return {RewriteOut::Kind::Deleted, -1};
      }

      Clause merged = c;
      merged.body.erase(merged.body.begin() + j);
      auto applied = apply_clausewide(sigma, merged, rc.ctx);
      if (!applied) continue;
      finish_clause(*applied, rc.ctx);
      int32_t nid = rc.store.add(std::move(*applied));
      rc.ledger.add({StepKind::Functionality, id, {nid}, -1, -1, -1, false});
      return {RewriteOut::Kind::Rewritten, nid};
    }
  }
  return {RewriteOut::Kind::NoChange, -1};
}

RewriteOut rule_totality(RuleContext& rc, int32_t id) {
  const Clause c = rc.store.get(id);
  for (size_t i = 0; i < c.body.size(); ++i) {
    const PredDecl& decl = rc.ctx.sig.pred(c.body[i].pred);
    if (!decl.total) continue;
    std::vector<int32_t> outs;
    bool plain = true;
    for (size_t k = 0; k < c.body[i].args.size(); ++k) {
      if (decl.modes[k] == Mode::In) continue;
      const Term& t = c.body[i].args[k];
      if (!t.is_var()) {
        plain = false;
        break;
      }
      outs.push_back(t.var_id());
    }
    if (!plain || outs.empty()) continue;
    std::sort(outs.begin(), outs.end());
    if (std::adjacent_find(outs.begin(), outs.end()) != outs.end()) continue;

    std::vector<int32_t> rest = clause_outside_vars(c, {i});
    std::vector<int32_t> own_inputs;
    for (const Term& t : input_terms(c.body[i], rc.ctx))
      t.collect_vars(own_inputs);
    bool free = true;
    for (int32_t v : outs) {
      if (std::binary_search(rest.begin(), rest.end(), v) ||
          std::find(own_inputs.begin(), own_inputs.end(), v) !=
              own_inputs.end()) {
        free = false;
        break;
      }
    }
    if (!free) continue;

    Clause trimmed = c;
    trimmed.body.erase(trimmed.body.begin() + i);
    finish_clause(trimmed, rc.ctx);
    int32_t nid = rc.store.add(std::move(trimmed));
    rc.ledger.add({StepKind::Totality, id, {nid}, -1, -1, -1, false});
    return {RewriteOut::Kind::Rewritten, nid};
  }
  return {RewriteOut::Kind::NoChange, -1};
}

std::optional<int32_t> rule_diff_replace(RuleContext& rc, int32_t id,
                                         const DiffReplaceSpec& spec) {
  const Clause c = rc.store.get(id);
  if (spec.replaced.empty()) return std::nullopt;
  if (!entails(c.constraint, spec.entailed)) return std::nullopt;
  if (c.head && !rc.levels.add_gt(c.head->pred, spec.diff_pred))
    return std::nullopt;

  bool mark = c.mark;
  std::set<int32_t> r_in(spec.r_inputs.begin(), spec.r_inputs.end());
  for (int32_t v : spec.entailed.vars()) r_in.insert(v);
  for (int32_t y : spec.f_outputs)
    if (r_in.count(y)) mark = true;

  std::set<size_t> replaced(spec.replaced.begin(), spec.replaced.end());
  std::vector<int32_t> outside = clause_outside_vars(c, replaced);
  for (int32_t y : spec.f_outputs) {
    if (!rc.ctx.vars.type(y).is_adt()) continue;
    if (std::binary_search(outside.begin(), outside.end(), y)) mark = true;
  }

  Clause rewritten;
  rewritten.head = c.head;
  rewritten.mark = mark;
  rewritten.constraint = c.constraint;
  size_t insert_at =
      *std::min_element(spec.replaced.begin(), spec.replaced.end());
  for (size_t i = 0; i < c.body.size(); ++i) {
    if (i == insert_at)
      for (const Atom& a : spec.with_atoms) rewritten.body.push_back(a);
    if (replaced.count(i)) continue;
    rewritten.body.push_back(c.body[i]);
  }
  if (insert_at == c.body.size())
    for (const Atom& a : spec.with_atoms) rewritten.body.push_back(a);

  finish_clause(rewritten, rc.ctx);
  int32_t nid = rc.store.add(std::move(rewritten));
  rc.ledger.add({StepKind::DiffReplace, id, {nid}, spec.diff_pred, -1, -1,
                 false});
  return nid;
}

bool head_instance(const Atom& a, const std::vector<const Clause*>& pred_clauses,
                   Context& ctx) {
  std::vector<int32_t> in_vars;
  for (const Term& t : input_terms(a, ctx)) t.collect_vars(in_vars);
  std::sort(in_vars.begin(), in_vars.end());
  in_vars.erase(std::unique(in_vars.begin(), in_vars.end()), in_vars.end());

  for (const Clause* pc : pred_clauses) {
    if (!pc->head || pc->head->pred != a.pred) continue;
    Clause prog = rename_apart(*pc, ctx);
    std::optional<Subst> sigma = unify(a, *prog.head);
    if (!sigma) continue;
    std::set<int32_t> images;
    for (int32_t v : in_vars) {
      Term image = sigma->apply(Term::var(v, ctx.vars.type(v)));
      if (!image.is_var()) return false;
      if (!images.insert(image.var_id()).second) return false;
    }
  }
  return true;
}

}  // namespace chcadt
