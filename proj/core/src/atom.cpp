#include "chcadt/atom.hpp"

#include <algorithm>
#include <set>

namespace chcadt {

int compare(const Atom& a, const Atom& b) {
  if (a.pred != b.pred) return a.pred < b.pred ? -1 : 1;
  size_t n = std::min(a.args.size(), b.args.size());
  for (size_t i = 0; i < n; ++i) {
    int c = compare(a.args[i], b.args[i]);
    if (c != 0) return c;
  }
  if (a.args.size() != b.args.size())
    return a.args.size() < b.args.size() ? -1 : 1;
  return 0;
}

std::vector<int32_t> atom_vars(const Atom& a) {
  std::vector<int32_t> out;
  for (const Term& t : a.args) t.collect_vars(out);
  return out;
}

std::vector<int32_t> atom_vars_unique(const Atom& a) {
  std::vector<int32_t> all = atom_vars(a);
  std::vector<int32_t> out;
  std::set<int32_t> seen;
  for (int32_t v : all)
    if (seen.insert(v).second) out.push_back(v);
  return out;
}

std::vector<int32_t> atom_adt_vars(const Atom& a, const Context& ctx) {
  std::vector<int32_t> out;
  for (int32_t v : atom_vars_unique(a))
    if (ctx.vars.type(v).is_adt()) out.push_back(v);
  return out;
}

bool atom_has_adt_arg(const Atom& a, const Context& ctx) {
  return ctx.sig.pred(a.pred).has_adt_arg();
}

AtomIo atom_io(const Atom& a, const Context& ctx) {
  const PredDecl& decl = ctx.sig.pred(a.pred);
  AtomIo io;
  std::set<int32_t> seen_in, seen_out;
  for (size_t i = 0; i < a.args.size(); ++i) {
    std::vector<int32_t> vs;
    a.args[i].collect_vars(vs);
    auto& side = decl.modes[i] == Mode::In ? io.inputs : io.outputs;
    auto& seen = decl.modes[i] == Mode::In ? seen_in : seen_out;
    for (int32_t v : vs)
      if (seen.insert(v).second) side.push_back(v);
  }
  return io;
}

bool atom_is_normalized(const Atom& a, const Context& ctx) {
  std::set<int32_t> basic_seen;
  for (const Term& t : a.args) {
    if (t.has_nonvar_basic_subterm()) return false;
    std::vector<int32_t> vs;
    t.collect_vars(vs);
    for (int32_t v : vs) {
      if (ctx.vars.type(v).is_basic() && !basic_seen.insert(v).second)
        return false;
    }
  }
  return true;
}

Atom apply(const Subst& s, const Atom& a) {
  Atom out;
  out.pred = a.pred;
  out.args.reserve(a.args.size());
  for (const Term& t : a.args) out.args.push_back(s.apply(t));
  return out;
}

Atom apply_flat(const Subst& s, const Atom& a) {
  Atom out;
  out.pred = a.pred;
  out.args.reserve(a.args.size());
  for (const Term& t : a.args) out.args.push_back(s.apply_flat(t));
  return out;
}

}  // namespace chcadt
