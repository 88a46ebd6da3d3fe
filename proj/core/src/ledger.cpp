#include "chcadt/ledger.hpp"

#include <algorithm>

namespace chcadt {

std::string to_string(StepKind kind) {
  switch (kind) {
    case StepKind::Define: return "define";
    case StepKind::Unfold: return "unfold";
    case StepKind::Fold: return "fold";
    case StepKind::DeleteClause: return "delete";
    case StepKind::Functionality: return "functionality";
    case StepKind::Totality: return "totality";
    case StepKind::DiffReplace: return "diff-replace";
  }
  return "?";
}

Ledger::UAudit Ledger::audit_fold_definitions_unfolded() const {
  std::set<int32_t> discharged;
  for (const Step& s : steps_)
    if (s.kind == StepKind::Unfold && s.u_discharge)
      discharged.insert(s.clause_in);
  UAudit audit;
  std::set<int32_t> reported;
  for (const Step& s : steps_) {
    if (s.kind != StepKind::Fold || s.def_clause < 0) continue;
    if (discharged.count(s.def_clause)) continue;
    if (reported.insert(s.def_clause).second)
      audit.offending_defs.push_back(s.def_clause);
  }
  audit.ok = audit.offending_defs.empty();
  return audit;
}

bool Ledger::audit_connected(const std::set<int32_t>& roots,
                             const std::set<int32_t>& finals) const {
  std::set<int32_t> reachable = roots;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Step& s : steps_) {
      bool in_ok = s.clause_in < 0 || reachable.count(s.clause_in);
      if (s.kind == StepKind::Define) in_ok = true;
      if (!in_ok) continue;
      if (s.kind == StepKind::Define && s.def_clause >= 0)
        if (reachable.insert(s.def_clause).second) changed = true;
      for (int32_t out : s.clauses_out)
        if (reachable.insert(out).second) changed = true;
    }
  }
  return std::all_of(finals.begin(), finals.end(),
                     [&](int32_t id) { return reachable.count(id) > 0; });
}

}  // namespace chcadt
