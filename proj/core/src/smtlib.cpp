#include "chcadt/smtlib.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "chcadt/printer.hpp"

namespace chcadt {

namespace {

const std::set<std::string>& reserved_symbols() {
  static const std::set<std::string> words = {
      "Bool", "Int",    "Real",   "Array", "true",  "false", "and",
      "or",   "not",    "xor",    "ite",   "let",   "forall", "exists",
      "as",   "is",     "distinct", "select", "store", "div", "mod",
      "abs",  "assert", "par",    "_",     "match", "exit",
  };
  return words;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string num(const Coeff& c) {
  if (c < 0) return "(- " + Coeff(-c).str() + ")";
  return c.str();
}

std::string num(int64_t v) {
  if (v < 0) return "(- " + std::to_string(-v) + ")";
  return std::to_string(v);
}

class Emitter {
public:
  Emitter(const Context& ctx, const ClauseSet& store) : ctx_(ctx), store_(store) {}

  std::string run(const std::vector<int32_t>& clause_ids,
                  const std::optional<FunDiffGoal>& fun_diff) {
    collect_preds(clause_ids, fun_diff);
    os_ << "(set-logic HORN)\n";
    emit_datatypes();
    emit_pred_decls();
    for (int32_t id : clause_ids) emit_clause(id);
    if (fun_diff) emit_fun_diff(fun_diff->pred);
    os_ << "(check-sat)\n";
    return os_.str();
  }

private:
  void collect_preds(const std::vector<int32_t>& clause_ids,
                     const std::optional<FunDiffGoal>& fun_diff) {
    for (int32_t id : clause_ids) {
      const Clause& c = store_.get(id);
      if (c.head) note_pred(c.head->pred);
      for (const Atom& a : c.body) note_pred(a.pred);
    }
    if (fun_diff) note_pred(fun_diff->pred);
  }

  void note_pred(int32_t p) {
    if (pred_names_.count(p)) return;
    pred_order_.push_back(p);
    pred_names_[p] = unique_name(ctx_.sig.pred(p).name, used_);
    if (ctx_.sig.pred(p).has_adt_arg()) needs_datatypes_ = true;
  }

  std::string unique_name(const std::string& raw, std::set<std::string>& used) {
    std::string s;
    for (char ch : raw) {
      if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')
        s += ch;
      else
        s += '_';
    }
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0])))
      s = "x_" + s;
    if (reserved_symbols().count(s)) s = "s_" + s;
    std::string candidate = s;
    for (int k = 2; used.count(candidate); ++k)
      candidate = s + "_" + std::to_string(k);
    used.insert(candidate);
    return candidate;
  }

  std::string sort_of(const Type& t) {
    switch (t.kind) {
      case TypeKind::Int: return "Int";
      case TypeKind::Bool: return "Bool";
      case TypeKind::Adt: return sort_names_.at(t.adt);
    }
    return "Int";
  }

  // Declares every ADT in one mutually recursive block; references
  // between the ADTs make a per-use selection fiddly for no gain.
  void emit_datatypes() {
    if (!needs_datatypes_ || ctx_.sig.n_adts() == 0) return;
    for (int32_t a = 0; a < ctx_.sig.n_adts(); ++a)
      sort_names_[a] = unique_name(ctx_.sig.adt(a).name, used_);
    for (int32_t a = 0; a < ctx_.sig.n_adts(); ++a) {
      const AdtDecl& d = ctx_.sig.adt(a);
      for (size_t k = 0; k < d.ctors.size(); ++k)
        ctor_names_[{a, static_cast<int32_t>(k)}] =
            unique_name(d.ctors[k].name, used_);
    }
    std::vector<std::string> heads, bodies;
    for (int32_t a = 0; a < ctx_.sig.n_adts(); ++a) {
      const AdtDecl& d = ctx_.sig.adt(a);
      heads.push_back("(" + sort_names_[a] + " 0)");
      std::vector<std::string> ctors;
      for (size_t k = 0; k < d.ctors.size(); ++k) {
        const Constructor& c = d.ctors[k];
        const std::string& cname = ctor_names_[{a, static_cast<int32_t>(k)}];
        std::string entry = "(" + cname;
        for (size_t i = 0; i < c.args.size(); ++i)
          entry += " (" + cname + "_" + std::to_string(i) + " " +
                   sort_of(c.args[i]) + ")";
        entry += ")";
        ctors.push_back(entry);
      }
      bodies.push_back("(" + join(ctors, " ") + ")");
    }
    os_ << "(declare-datatypes (" << join(heads, " ") << ") ("
        << join(bodies, " ") << "))\n";
  }

  void emit_pred_decls() {
    for (int32_t p : pred_order_) {
      const PredDecl& d = ctx_.sig.pred(p);
      if (d.name != pred_names_[p])
        os_ << "; predicate " << d.name << " -> " << pred_names_[p] << "\n";
      std::vector<std::string> sorts;
      for (const Type& t : d.arg_types) sorts.push_back(sort_of(t));
      os_ << "(declare-fun " << pred_names_[p] << " (" << join(sorts, " ")
          << ") Bool)\n";
    }
  }

  std::string sexp_term(const Term& t,
                        const std::map<int32_t, std::string>& names) {
    switch (t.kind()) {
      case Term::Kind::Var:
        return names.at(t.var_id());
      case Term::Kind::IntConst:
        return num(t.int_value());
      case Term::Kind::BoolConst:
        return t.bool_value() ? "true" : "false";
      case Term::Kind::Ctor: {
        const std::string& c = ctor_names_.at({t.adt(), t.ctor_id()});
        if (t.args().empty()) return c;
        std::vector<std::string> parts = {c};
        for (const Term& a : t.args()) parts.push_back(sexp_term(a, names));
        return "(" + join(parts, " ") + ")";
      }
    }
    return "0";
  }

  std::string sexp_atom(const Atom& a,
                        const std::map<int32_t, std::string>& names) {
    if (a.args.empty()) return pred_names_.at(a.pred);
    std::vector<std::string> parts = {pred_names_.at(a.pred)};
    for (const Term& t : a.args) parts.push_back(sexp_term(t, names));
    return "(" + join(parts, " ") + ")";
  }

  std::string sexp_linear(const LinearAtom& a,
                          const std::map<int32_t, std::string>& names) {
    std::vector<std::string> terms;
    for (const auto& [v, c] : a.coeffs) {
      if (c == 1)
        terms.push_back(names.at(v));
      else
        terms.push_back("(* " + num(c) + " " + names.at(v) + ")");
    }
    std::string lhs = terms.empty() ? "0"
                      : terms.size() == 1
                          ? terms[0]
                          : "(+ " + join(terms, " ") + ")";
    std::string rhs = num(a.constant);
    switch (a.rel) {
      case LinearAtom::Rel::Le: return "(<= " + lhs + " " + rhs + ")";
      case LinearAtom::Rel::Eq: return "(= " + lhs + " " + rhs + ")";
      case LinearAtom::Rel::Ne: return "(not (= " + lhs + " " + rhs + "))";
    }
    return "true";
  }

  void emit_assert(const std::string& name,
                   const std::vector<std::pair<std::string, Type>>& vars,
                   const std::vector<std::string>& body_parts,
                   const std::string& head) {
    std::string body = body_parts.empty() ? "true"
                       : body_parts.size() == 1
                           ? body_parts[0]
                           : "(and " + join(body_parts, " ") + ")";
    std::string expr = "(=> " + body + " " + head + ")";
    if (!vars.empty()) {
      std::vector<std::string> bindings;
      for (const auto& [n, t] : vars)
        bindings.push_back("(" + n + " " + sort_of(t) + ")");
      expr = "(forall (" + join(bindings, " ") + ") " + expr + ")";
    }
    os_ << "(assert (! " << expr << " :named " << name << "))\n";
  }

  void emit_clause(int32_t id) {
    const Clause& c = store_.get(id);
    os_ << "; cl" << id << ": " << print_clause(c, ctx_) << "\n";
    std::map<int32_t, std::string> names;
    std::vector<std::pair<std::string, Type>> bound;
    std::set<std::string> local = used_;
    for (int32_t v : c.all_vars()) {
      names[v] = unique_name(ctx_.vars.name(v), local);
      bound.emplace_back(names[v], ctx_.vars.type(v));
    }
    std::vector<std::string> parts;
    if (c.constraint.is_bottom()) {
      parts.push_back("false");
    } else {
      for (const LinearAtom& a : c.constraint.atoms())
        parts.push_back(sexp_linear(a, names));
      for (const BoolLit& l : c.constraint.bools())
        parts.push_back(l.positive ? names.at(l.var)
                                   : "(not " + names.at(l.var) + ")");
    }
    for (const Atom& a : c.body) parts.push_back(sexp_atom(a, names));
    std::string head = c.head ? sexp_atom(*c.head, names) : "false";
    emit_assert("cl" + std::to_string(id), bound, parts, head);
  }

  void emit_fun_diff(int32_t pred) {
    const PredDecl& d = ctx_.sig.pred(pred);
    if (d.modes.size() != d.arity()) return;
    std::vector<size_t> outs;
    for (size_t i = 0; i < d.arity(); ++i)
      if (d.modes[i] == Mode::Out) outs.push_back(i);
    if (outs.empty()) return;
    std::set<std::string> local = used_;
    std::vector<std::pair<std::string, Type>> bound;
    std::vector<std::string> args1, args2;
    std::vector<std::string> disagree;
    for (size_t i = 0; i < d.arity(); ++i) {
      if (d.modes[i] == Mode::In) {
        std::string n = unique_name("fd_in" + std::to_string(i), local);
        bound.emplace_back(n, d.arg_types[i]);
        args1.push_back(n);
        args2.push_back(n);
      } else {
        std::string n1 = unique_name("fd_a" + std::to_string(i), local);
        std::string n2 = unique_name("fd_b" + std::to_string(i), local);
        bound.emplace_back(n1, d.arg_types[i]);
        bound.emplace_back(n2, d.arg_types[i]);
        args1.push_back(n1);
        args2.push_back(n2);
        disagree.push_back("(not (= " + n1 + " " + n2 + "))");
      }
    }
    const std::string& p = pred_names_.at(pred);
    std::vector<std::string> parts = {
        "(" + p + " " + join(args1, " ") + ")",
        "(" + p + " " + join(args2, " ") + ")",
        disagree.size() == 1 ? disagree[0]
                             : "(or " + join(disagree, " ") + ")"};
    os_ << "; output-functionality goal for " << d.name << "\n";
    emit_assert("fdgoal", bound, parts, "false");
  }

  const Context& ctx_;
  const ClauseSet& store_;
  std::ostringstream os_;
  std::map<int32_t, std::string> pred_names_;
  std::vector<int32_t> pred_order_;
  std::map<int32_t, std::string> sort_names_;
  std::map<std::pair<int32_t, int32_t>, std::string> ctor_names_;
  std::set<std::string> used_;
  bool needs_datatypes_ = false;
};

}  // namespace

std::string emit_smtlib(const Context& ctx, const ClauseSet& store,
                        const std::vector<int32_t>& clause_ids,
                        const std::optional<FunDiffGoal>& fun_diff) {
  Emitter e(ctx, store);
  return e.run(clause_ids, fun_diff);
}

}  // namespace chcadt
