#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace chcadt {

// One applied transformation step. Clause ids refer to the ClauseSet the
// run works in; predicate ids refer to the signature.
enum class StepKind : uint8_t {
  Define,
  Unfold,
  Fold,
  DeleteClause,
  Functionality,
  Totality,
  DiffReplace,
};

struct Step {
  StepKind kind;
  int32_t clause_in = -1;
  std::vector<int32_t> clauses_out;
  int32_t def_pred = -1;    // Define, Fold, DiffReplace: predicate involved
  int32_t def_clause = -1;  // Define: the definition; Fold: definition used
  int32_t atom_index = -1;  // Unfold: body position unfolded
  bool u_discharge = false;  // Unfold of a definition at a level-equal atom
};

class Ledger {
 public:
  void add(Step step) { steps_.push_back(std::move(step)); }
  const std::vector<Step>& steps() const { return steps_; }

  struct UAudit {
    bool ok = true;
    std::vector<int32_t> offending_defs;  // definition clauses never
                                          // unfolded at a level-equal atom
                                          // but used for folding
  };
  UAudit audit_fold_definitions_unfolded() const;

  // Every clause in `finals` must be derivable through recorded steps
  // from `roots` (input clauses and introduced definitions).
  bool audit_connected(const std::set<int32_t>& roots,
                       const std::set<int32_t>& finals) const;

 private:
  std::vector<Step> steps_;
};

std::string to_string(StepKind kind);

}  // namespace chcadt
