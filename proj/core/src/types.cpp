#include "chcadt/types.hpp"

namespace chcadt {

int32_t Signature::add_adt(const std::string& name) {
  if (adt_index_.count(name))
    throw Error("duplicate ADT declaration: " + name);
  int32_t id = static_cast<int32_t>(adts_.size());
  adts_.push_back(AdtDecl{name, {}});
  adt_index_[name] = id;
  return id;
}

void Signature::add_constructor(int32_t adt, const std::string& name,
                                std::vector<Type> args) {
  if (ctor_index_.count(name))
    throw Error("duplicate constructor name: " + name);
  AdtDecl& decl = adts_.at(adt);
  int32_t idx = static_cast<int32_t>(decl.ctors.size());
  decl.ctors.push_back(Constructor{name, std::move(args)});
  ctor_index_[name] = {adt, idx};
}

int32_t Signature::add_pred(PredDecl decl) {
  if (pred_index_.count(decl.name))
    throw Error("duplicate predicate declaration: " + decl.name);
  if (decl.modes.size() != decl.arg_types.size())
    throw Error("mode list arity mismatch for predicate " + decl.name);
  int32_t id = static_cast<int32_t>(preds_.size());
  pred_index_[decl.name] = id;
  preds_.push_back(std::move(decl));
  return id;
}

std::optional<int32_t> Signature::find_adt(const std::string& name) const {
  auto it = adt_index_.find(name);
  if (it == adt_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int32_t> Signature::find_pred(const std::string& name) const {
  auto it = pred_index_.find(name);
  if (it == pred_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::pair<int32_t, int32_t>> Signature::find_constructor(
    const std::string& name) const {
  auto it = ctor_index_.find(name);
  if (it == ctor_index_.end()) return std::nullopt;
  return it->second;
}

std::string Signature::fresh_pred_name(const std::string& base) const {
  if (!pred_index_.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (!pred_index_.count(candidate)) return candidate;
  }
}

int32_t VarPool::make(std::string name, Type type) {
  int32_t id = static_cast<int32_t>(entries_.size());
  name_uses_[name] += 1;
  entries_.push_back(Entry{std::move(name), type});
  return id;
}

int32_t VarPool::fresh(const std::string& base, Type type) {
  auto it = name_uses_.find(base);
  if (it == name_uses_.end()) return make(base, type);
  for (int i = it->second;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (!name_uses_.count(candidate)) return make(candidate, type);
  }
}

}  // namespace chcadt
