#pragma once

// Atoms: predicate applications over terms.

#include <cstdint>
#include <vector>

#include "chcadt/term.hpp"
#include "chcadt/types.hpp"

namespace chcadt {

struct Atom {
  int32_t pred = -1;
  std::vector<Term> args;

  friend bool operator==(const Atom&, const Atom&) = default;
};

int compare(const Atom& a, const Atom& b);

// Variables in occurrence order, duplicates kept.
std::vector<int32_t> atom_vars(const Atom& a);
// Deduplicated, occurrence order.
std::vector<int32_t> atom_vars_unique(const Atom& a);
// Variables of ADT type, deduplicated, occurrence order.
std::vector<int32_t> atom_adt_vars(const Atom& a, const Context& ctx);
bool atom_has_adt_arg(const Atom& a, const Context& ctx);

// Input and output variables of an atom per the declared modes: the
// variables of input-moded argument positions and of output-moded ones.
// A variable can appear on both sides only in malformed clauses; the
// transformation keeps input and output positions variable-disjoint.
struct AtomIo {
  std::vector<int32_t> inputs;
  std::vector<int32_t> outputs;
};
AtomIo atom_io(const Atom& a, const Context& ctx);

// Checks the atom normal form: every basic-typed subterm is a variable
// and no basic variable occurs twice in the atom.
bool atom_is_normalized(const Atom& a, const Context& ctx);

Atom apply(const Subst& s, const Atom& a);
// Simultaneous application; see Subst::apply_flat.
Atom apply_flat(const Subst& s, const Atom& a);

}  // namespace chcadt
