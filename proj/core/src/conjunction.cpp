#include "chcadt/conjunction.hpp"

#include <algorithm>
#include <set>

namespace chcadt {

VarPartition partition_vars(const std::vector<Atom>& atoms,
                            const Context& ctx) {
  VarPartition out;
  std::set<int32_t> seen;
  for (const Atom& a : atoms) {
    std::vector<int32_t> vs;
    for (const Term& t : a.args) t.collect_vars(vs);
    for (int32_t v : vs) {
      if (!seen.insert(v).second) continue;
      if (ctx.vars.type(v).is_basic())
        out.basic.push_back(v);
      else
        out.adt.push_back(v);
    }
  }
  return out;
}

namespace {

struct UnionFind {
  std::vector<size_t> parent;

  explicit UnionFind(size_t n) : parent(n) {
    for (size_t i = 0; i < n; ++i) parent[i] = i;
  }
  size_t find(size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void join(size_t a, size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<std::vector<size_t>> sharing_blocks(const std::vector<Atom>& atoms,
                                                const Context& ctx) {
  UnionFind uf(atoms.size());
  std::map<int32_t, size_t> owner;
  for (size_t i = 0; i < atoms.size(); ++i) {
    for (int32_t v : atom_adt_vars(atoms[i], ctx)) {
      auto [it, fresh] = owner.emplace(v, i);
      if (!fresh) uf.join(i, it->second);
    }
  }
  std::vector<std::vector<size_t>> blocks;
  std::map<size_t, size_t> index;
  for (size_t i = 0; i < atoms.size(); ++i) {
    size_t root = uf.find(i);
    auto [it, fresh] = index.emplace(root, blocks.size());
    if (fresh) blocks.emplace_back();
    blocks[it->second].push_back(i);
  }
  return blocks;
}

std::optional<ComposedIo> compose_io(const std::vector<Atom>& atoms,
                                     const Context& ctx) {
  if (atoms.empty()) return std::nullopt;
  std::vector<AtomIo> ios;
  std::set<int32_t> all_outputs;
  for (const Atom& a : atoms) {
    const PredDecl& decl = ctx.sig.pred(a.pred);
    if (!decl.total || !decl.functional) return std::nullopt;
    AtomIo io = atom_io(a, ctx);
    for (int32_t v : io.outputs) {
      if (!all_outputs.insert(v).second) return std::nullopt;
      if (std::find(io.inputs.begin(), io.inputs.end(), v) != io.inputs.end())
        return std::nullopt;
    }
    ios.push_back(std::move(io));
  }

  ComposedIo result;
  std::set<int32_t> defined;
  for (size_t i = 0; i < atoms.size(); ++i)
    for (int32_t v : ios[i].inputs)
      if (!all_outputs.count(v) && defined.insert(v).second)
        result.inputs.push_back(v);

  // Order atoms so each one reads only already-defined variables.
  std::vector<bool> placed(atoms.size(), false);
  for (size_t placed_count = 0; placed_count < atoms.size();) {
    bool progress = false;
    for (size_t i = 0; i < atoms.size(); ++i) {
      if (placed[i]) continue;
      bool ready = true;
      for (int32_t v : ios[i].inputs)
        if (!defined.count(v)) {
          ready = false;
          break;
        }
      if (!ready) continue;
      placed[i] = true;
      ++placed_count;
      progress = true;
      for (int32_t v : ios[i].outputs) {
        defined.insert(v);
        result.outputs.push_back(v);
      }
    }
    if (!progress) return std::nullopt;
  }
  return result;
}

std::vector<int32_t> source_adt_vars(const std::vector<Atom>& atoms,
                                     const Context& ctx) {
  std::set<int32_t> outputs;
  for (const Atom& a : atoms) {
    AtomIo io = atom_io(a, ctx);
    outputs.insert(io.outputs.begin(), io.outputs.end());
  }
  std::vector<int32_t> result;
  std::set<int32_t> seen;
  for (const Atom& a : atoms) {
    AtomIo io = atom_io(a, ctx);
    for (int32_t v : io.inputs) {
      if (!ctx.vars.type(v).is_adt()) continue;
      if (outputs.count(v)) continue;
      if (seen.insert(v).second) result.push_back(v);
    }
  }
  return result;
}

}  // namespace chcadt
