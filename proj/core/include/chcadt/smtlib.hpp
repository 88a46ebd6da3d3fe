#pragma once

// SMT-LIB 2 rendering of clause sets in the HORN fragment.
//
// Every emitted assertion is named cl<id> after its clause so that a
// solver able to report unsat cores can point back at the clauses that
// participate in a refutation. Identifiers are mangled to the SMT-LIB
// simple-symbol alphabet; a comment table at the top of the script maps
// the originals to their mangled forms.

#include <optional>
#include <string>
#include <vector>

#include "chcadt/clause.hpp"
#include "chcadt/types.hpp"

namespace chcadt {

// Extra goal asserting that some predicate maps equal inputs to two
// distinct output tuples. Proving the resulting system satisfiable
// certifies that the predicate is output-functional.
struct FunDiffGoal {
  int32_t pred = -1;
};

std::string emit_smtlib(
    const Context& ctx, const ClauseSet& store,
    const std::vector<int32_t>& clause_ids,
    const std::optional<FunDiffGoal>& fun_diff = std::nullopt);

}  // namespace chcadt
