#include "chcadt/level_store.hpp"

#include <algorithm>

namespace chcadt {

void LevelStore::note(int32_t pred) {
  if (std::find(preds_.begin(), preds_.end(), pred) == preds_.end())
    preds_.push_back(pred);
}

bool LevelStore::try_add(std::vector<Edge> edges) {
  std::vector<Edge> all = edges_;
  all.insert(all.end(), edges.begin(), edges.end());
  std::vector<Edge> saved = std::move(edges_);
  edges_ = std::move(all);
  if (check()) {
    for (const Edge& e : edges_) {
      note(e.from);
      note(e.to);
    }
    return true;
  }
  edges_ = std::move(saved);
  return false;
}

bool LevelStore::add_ge(int32_t pred, int32_t lower) {
  return try_add({{lower, pred, 0}});
}

bool LevelStore::add_gt(int32_t pred, int32_t lower) {
  return try_add({{lower, pred, 1}});
}

bool LevelStore::add_eq(int32_t pred, int32_t other) {
  return try_add({{other, pred, 0}, {pred, other, 0}});
}

bool LevelStore::add_eq_max(int32_t pred, std::vector<int32_t> of) {
  if (of.empty()) return true;
  std::vector<Edge> lower;
  for (int32_t q : of) lower.push_back({q, pred, 0});
  std::vector<Edge> saved_edges = edges_;
  std::vector<MaxEq> saved_eqs = max_eqs_;
  edges_.insert(edges_.end(), lower.begin(), lower.end());
  max_eqs_.push_back({pred, of});
  if (check()) {
    note(pred);
    for (int32_t q : of) note(q);
    return true;
  }
  edges_ = std::move(saved_edges);
  max_eqs_ = std::move(saved_eqs);
  return false;
}

bool LevelStore::feasible(const std::vector<Edge>& extra,
                          std::map<int32_t, int>* model) const {
  std::vector<int32_t> nodes = preds_;
  auto add_node = [&](int32_t p) {
    if (std::find(nodes.begin(), nodes.end(), p) == nodes.end())
      nodes.push_back(p);
  };
  for (const Edge& e : edges_) {
    add_node(e.from);
    add_node(e.to);
  }
  for (const Edge& e : extra) {
    add_node(e.from);
    add_node(e.to);
  }
  std::map<int32_t, size_t> index;
  for (size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = i;

  // Longest-path relaxation from a zero base; a positive cycle means the
  // difference system has no solution.
  size_t n = nodes.size();
  std::vector<int> dist(n, 0);
  auto relax = [&]() {
    bool changed = false;
    for (const Edge& e : edges_) {
      int cand = dist[index[e.from]] + e.weight;
      if (cand > dist[index[e.to]]) {
        dist[index[e.to]] = cand;
        changed = true;
      }
    }
    for (const Edge& e : extra) {
      int cand = dist[index[e.from]] + e.weight;
      if (cand > dist[index[e.to]]) {
        dist[index[e.to]] = cand;
        changed = true;
      }
    }
    return changed;
  };
  for (size_t round = 0; round <= n; ++round) {
    if (!relax()) {
      if (model) {
        model->clear();
        for (size_t i = 0; i < n; ++i) (*model)[nodes[i]] = dist[i] + 1;
      }
      return true;
    }
  }
  return false;
}

bool LevelStore::search(size_t eq_index, std::vector<Edge>& extra,
                        std::map<int32_t, int>* model) const {
  if (!feasible(extra, nullptr)) return false;
  if (eq_index == max_eqs_.size()) return feasible(extra, model);
  const MaxEq& eq = max_eqs_[eq_index];
  for (int32_t q : eq.of) {
    // Realize level(pred) = max(...) by picking the argument it equals.
    extra.push_back({eq.pred, q, 0});
    if (search(eq_index + 1, extra, model)) {
      extra.pop_back();
      return true;
    }
    extra.pop_back();
  }
  return false;
}

bool LevelStore::check() const {
  std::vector<Edge> extra;
  return search(0, extra, nullptr);
}

std::optional<std::map<int32_t, int>> LevelStore::solve() const {
  std::vector<Edge> extra;
  std::map<int32_t, int> model;
  if (!search(0, extra, &model)) return std::nullopt;
  return model;
}

}  // namespace chcadt
