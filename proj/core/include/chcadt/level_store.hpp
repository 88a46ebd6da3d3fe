#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace chcadt {

// Integer level assignments for predicates, kept symbolic. Constraints
// are differences (>=, >, =) plus lazy "level equals max of these
// levels" equations realized by case choice when checking. Every add
// first tests the extended system; an addition that would make it
// unsatisfiable is refused and leaves the store unchanged. The store is
// a value type, so callers can copy it to trial a batch of additions.
class LevelStore {
 public:
  bool add_ge(int32_t pred, int32_t lower);
  bool add_gt(int32_t pred, int32_t lower);
  bool add_eq(int32_t pred, int32_t other);
  bool add_eq_max(int32_t pred, std::vector<int32_t> of);

  bool check() const;

  // Concrete small non-negative levels satisfying all constraints.
  std::optional<std::map<int32_t, int>> solve() const;

 private:
  struct Edge {
    int32_t from, to;
    int weight;  // level(to) >= level(from) + weight
  };
  struct MaxEq {
    int32_t pred;
    std::vector<int32_t> of;
  };

  bool feasible(const std::vector<Edge>& extra,
                std::map<int32_t, int>* model) const;
  bool search(size_t eq_index, std::vector<Edge>& extra,
              std::map<int32_t, int>* model) const;
  bool try_add(std::vector<Edge> edges);

  std::vector<Edge> edges_;
  std::vector<MaxEq> max_eqs_;
  std::vector<int32_t> preds_;
  void note(int32_t pred);
};

}  // namespace chcadt
