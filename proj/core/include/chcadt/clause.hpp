#pragma once

// Constrained Horn clauses and clause sets.
//
// A clause is head <- constraint, body where the head is an atom or
// false (represented as an empty optional) and the body is a
// conjunction of atoms. Clauses in the model observe the atom normal
// form: basic-typed argument positions hold pairwise distinct
// variables, with the arithmetic in the constraint.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chcadt/atom.hpp"
#include "chcadt/constraint.hpp"

namespace chcadt {

struct Clause {
  std::optional<Atom> head;  // empty: the head is false (a goal)
  Constraint constraint;
  std::vector<Atom> body;
  int32_t id = -1;
  // Completeness mark: set when the clause was produced through a rule
  // application that preserves soundness but possibly not completeness.
  bool mark = false;

  bool is_goal() const { return !head.has_value(); }
  // True when no atom of the clause carries an ADT-typed argument.
  bool has_basic_types(const Context& ctx) const;
  // All variables in occurrence order (head, body, then constraint),
  // deduplicated.
  std::vector<int32_t> all_vars() const;
  bool is_normalized(const Context& ctx) const;
};

// Fresh copy whose variables are renamed apart from everything else in
// the pool. Returns the renaming used.
Clause rename_apart(const Clause& c, Context& ctx,
                    std::map<int32_t, int32_t>* renaming = nullptr);

// Enforces the atom normal form: every basic-typed non-variable subterm
// and every repeated basic variable in an atom is replaced by a fresh
// variable with a defining constraint. Left-to-right, deterministic.
void normalize_atoms(Clause& c, Context& ctx);

// Removes constraint variables that occur in no atom when they can be
// eliminated exactly: unit-coefficient equalities are substituted away,
// dead boolean literals and one-sided bounds are dropped. Keeps the
// constraint equivalent up to existential quantification of dead
// variables over the integers.
void simplify_constraint(Clause& c);

// Variant equality: a bijective variable renaming mapping one clause
// onto the other, allowing body atom reordering. Constraints must agree
// as normalized atom sets under the renaming.
bool clause_variant_equal(const Clause& a, const Clause& b,
                          const Context& ctx);

// Clauses are kept in insertion order; ids are stable and never reused.
class ClauseSet {
public:
  int32_t add(Clause c) {
    int32_t id = next_id_++;
    c.id = id;
    order_.push_back(id);
    clauses_.emplace(id, std::move(c));
    return id;
  }
  bool contains(int32_t id) const { return clauses_.count(id) != 0; }
  const Clause& get(int32_t id) const { return clauses_.at(id); }
  Clause& get(int32_t id) { return clauses_.at(id); }
  void remove(int32_t id);
  size_t size() const { return clauses_.size(); }
  bool empty() const { return clauses_.empty(); }
  const std::vector<int32_t>& ids() const { return order_; }
  // Skips removed ids.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (int32_t id : order_) {
      auto it = clauses_.find(id);
      if (it != clauses_.end()) fn(it->second);
    }
  }
  std::vector<const Clause*> all() const {
    std::vector<const Clause*> out;
    out.reserve(clauses_.size());
    for_each([&](const Clause& c) { out.push_back(&c); });
    return out;
  }

private:
  std::map<int32_t, Clause> clauses_;
  std::vector<int32_t> order_;
  int32_t next_id_ = 0;
};

// True if the two sets can be matched one-to-one by clause variants.
bool clause_set_variant_equal(const std::vector<const Clause*>& a,
                              const std::vector<const Clause*>& b,
                              const Context& ctx);

}  // namespace chcadt
