#include "chcadt/printer.hpp"

#include <sstream>

namespace chcadt {

namespace {

// Lists print in bracket form when the ADT is literally named "list".
bool list_sugar(const Term& t, const Context& ctx, std::string& out) {
  if (t.kind() != Term::Kind::Ctor) return false;
  const AdtDecl& decl = ctx.sig.adt(t.adt());
  if (decl.name != "list") return false;
  std::ostringstream os;
  os << '[';
  const Term* cur = &t;
  bool first = true;
  for (;;) {
    const Constructor& c = ctx.sig.constructor(cur->adt(), cur->ctor_id());
    if (c.args.empty()) break;
    if (c.args.size() != 2) return false;
    if (!first) os << ',';
    os << print_term(cur->args()[0], ctx);
    first = false;
    const Term& tail = cur->args()[1];
    if (tail.kind() == Term::Kind::Ctor &&
        ctx.sig.adt(tail.adt()).name == "list") {
      cur = &tail;
      continue;
    }
    os << '|' << print_term(tail, ctx);
    break;
  }
  os << ']';
  out = os.str();
  return true;
}

void print_side(std::ostringstream& os,
                const std::vector<std::pair<int32_t, Coeff>>& terms,
                const Coeff& constant, bool with_constant, const Context& ctx) {
  bool first = true;
  for (const auto& [v, c] : terms) {
    if (!first) os << "+";
    if (c != 1) os << c.str() << "*";
    os << ctx.vars.name(v);
    first = false;
  }
  if (with_constant && (first || constant != 0)) {
    if (!first && constant > 0) os << "+";
    if (!first && constant < 0) {
      os << "-" << Coeff(-constant).str();
    } else {
      os << constant.str();
    }
    first = false;
  }
  if (first) os << "0";
}

std::string print_linear(const LinearAtom& a, const Context& ctx) {
  std::vector<std::pair<int32_t, Coeff>> lhs, rhs;
  for (const auto& [v, c] : a.coeffs) {
    if (c > 0)
      lhs.emplace_back(v, c);
    else
      rhs.emplace_back(v, -c);
  }
  std::ostringstream os;
  print_side(os, lhs, 0, lhs.empty(), ctx);
  switch (a.rel) {
    case LinearAtom::Rel::Eq: os << " = "; break;
    case LinearAtom::Rel::Ne: os << " =\\= "; break;
    case LinearAtom::Rel::Le: os << " =< "; break;
  }
  print_side(os, rhs, a.constant, true, ctx);
  return os.str();
}

}  // namespace

std::string print_term(const Term& t, const Context& ctx) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return ctx.vars.name(t.var_id());
    case Term::Kind::IntConst:
      return std::to_string(t.int_value());
    case Term::Kind::BoolConst:
      return t.bool_value() ? "true" : "false";
    case Term::Kind::Ctor: {
      std::string sugar;
      if (list_sugar(t, ctx, sugar)) return sugar;
      const Constructor& c = ctx.sig.constructor(t.adt(), t.ctor_id());
      if (t.args().empty()) return c.name;
      std::string out = c.name + "(";
      for (size_t i = 0; i < t.args().size(); ++i) {
        if (i) out += ",";
        out += print_term(t.args()[i], ctx);
      }
      return out + ")";
    }
  }
  return "?";
}

std::string print_atom(const Atom& a, const Context& ctx) {
  std::string out = ctx.sig.pred(a.pred).name;
  if (a.args.empty()) return out;
  out += "(";
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ",";
    out += print_term(a.args[i], ctx);
  }
  return out + ")";
}

std::string print_constraint(const Constraint& c, const Context& ctx) {
  if (c.is_bottom()) return "0 = 1";
  std::string out;
  for (const LinearAtom& a : c.atoms()) {
    if (!out.empty()) out += ", ";
    out += print_linear(a, ctx);
  }
  for (const BoolLit& l : c.bools()) {
    if (!out.empty()) out += ", ";
    out += l.positive ? ctx.vars.name(l.var)
                      : "not(" + ctx.vars.name(l.var) + ")";
  }
  return out;
}

std::string print_clause(const Clause& c, const Context& ctx) {
  std::string head = c.head ? print_atom(*c.head, ctx) : "false";
  std::string body = print_constraint(c.constraint, ctx);
  for (const Atom& a : c.body) {
    if (!body.empty()) body += ", ";
    body += print_atom(a, ctx);
  }
  if (body.empty()) return head + ".";
  return head + " :- " + body + ".";
}

}  // namespace chcadt
