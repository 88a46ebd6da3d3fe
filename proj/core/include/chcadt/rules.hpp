#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chcadt/clause.hpp"
#include "chcadt/ledger.hpp"
#include "chcadt/level_store.hpp"

namespace chcadt {

// Shared state the transformation rules act on. The clause store is the
// id authority: every clause ever derived is added and kept, so ledger
// entries stay resolvable; callers track which ids are live.
struct RuleContext {
  Context& ctx;
  ClauseSet& store;
  LevelStore& levels;
  Ledger& ledger;
};

// Introduce a definition clause. Its head predicate level is pinned to
// the maximum of the body predicate levels. Returns the clause id.
std::optional<int32_t> rule_define(RuleContext& rc, Clause def);

struct UnfoldOut {
  std::vector<int32_t> clauses;
  // Per derived clause, per body atom: position in the input clause body
  // the atom was inherited from, or -1 for atoms of the unfolding clause.
  std::vector<std::vector<int32_t>> origin;
  // Per derived clause, per body atom: true for introduced atoms whose
  // input terms are subterms of the unfolded atom's inputs, at least one
  // strictly. Inherited atoms get false.
  std::vector<std::vector<bool>> descending;
};

// Unfold clause `id` at body position `atom_index` against `pred_clauses`
// (store ids of the clauses defining that predicate). Derived clauses
// with unsatisfiable constraints are dropped. `u_discharge` tags the
// ledger entry as the level-matched unfold of a definition.
UnfoldOut rule_unfold(RuleContext& rc, int32_t id, size_t atom_index,
                      const std::vector<int32_t>& pred_clauses,
                      bool u_discharge);

// Fold: the body atoms of clause `id` at `positions` must be, in order,
// the instance under `theta` of the body of definition `def_clause`;
// they are replaced by the instantiated definition head. Fails when the
// clause constraint does not entail the instantiated definition
// constraint or the level side condition is refused. Violations of the
// existential-variable conditions only set the completeness mark on the
// result. Returns the folded clause id.
std::optional<int32_t> rule_fold(RuleContext& rc, int32_t id,
                                 const std::vector<size_t>& positions,
                                 int32_t def_clause, const Subst& theta);

// Delete the clause when its constraint is unsatisfiable.
bool rule_delete_unsat(RuleContext& rc, int32_t id);

struct RewriteOut {
  enum class Kind { NoChange, Rewritten, Deleted };
  Kind kind = Kind::NoChange;
  int32_t clause = -1;
};

// One functionality step: two body atoms of the same functional
// predicate with equal input terms are merged by unifying their outputs;
// an output clash deletes the clause.
RewriteOut rule_functionality(RuleContext& rc, int32_t id);

// One totality step: drop a body atom of a total predicate whose outputs
// are distinct variables used nowhere else in the clause.
RewriteOut rule_totality(RuleContext& rc, int32_t id);

struct DiffReplaceSpec {
  std::vector<size_t> replaced;   // positions of the replaced conjunction
  std::vector<Atom> with_atoms;   // replacement instances, then diff atom
  int32_t diff_pred = -1;
  Constraint entailed;            // instantiated diff definition constraint
  std::vector<int32_t> f_outputs;  // outputs of the replaced conjunction
  std::vector<int32_t> r_inputs;   // inputs of the replacement conjunction
};

// Differential replacement. Fails when the entailment or the level side
// condition (clause head strictly above the diff predicate) does not
// hold; the output-variable separation conditions only set the
// completeness mark. Returns the rewritten clause id.
std::optional<int32_t> rule_diff_replace(RuleContext& rc, int32_t id,
                                         const DiffReplaceSpec& spec);

// True when every program clause head unifiable with `a` matches it up
// to an injective renaming of the atom's input variables.
bool head_instance(const Atom& a, const std::vector<const Clause*>& pred_clauses,
                   Context& ctx);

}  // namespace chcadt
