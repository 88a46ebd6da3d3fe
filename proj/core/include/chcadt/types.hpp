#pragma once

// Sorts, ADT declarations and predicate signatures with modes.
//
// A problem talks about two basic sorts (Int, Bool) plus any number of
// user-declared algebraic data types. Predicates carry their argument
// sorts, an input/output mode per argument, and optional totality and
// functionality annotations for the induced input->output relation.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chcadt {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SourcePos {
  int line = 0;
  int column = 0;
};

class ParseError : public Error {
public:
  ParseError(SourcePos pos, const std::string& what)
      : Error("line " + std::to_string(pos.line) + ":" +
              std::to_string(pos.column) + ": " + what),
        pos(pos) {}
  SourcePos pos;
};

enum class TypeKind : uint8_t { Int, Bool, Adt };

struct Type {
  TypeKind kind = TypeKind::Int;
  int32_t adt = -1;  // index into Signature::adt() when kind == Adt

  static Type integer() { return {TypeKind::Int, -1}; }
  static Type boolean() { return {TypeKind::Bool, -1}; }
  static Type adt_of(int32_t id) { return {TypeKind::Adt, id}; }

  bool is_basic() const { return kind != TypeKind::Adt; }
  bool is_adt() const { return kind == TypeKind::Adt; }

  friend bool operator==(const Type&, const Type&) = default;
};

struct Constructor {
  std::string name;
  std::vector<Type> args;  // empty for nullary constructors
};

struct AdtDecl {
  std::string name;
  std::vector<Constructor> ctors;
};

enum class Mode : uint8_t { In, Out };

struct PredDecl {
  std::string name;
  std::vector<Type> arg_types;
  std::vector<Mode> modes;  // one per argument
  bool total = false;
  bool functional = false;

  size_t arity() const { return arg_types.size(); }
  bool has_adt_arg() const {
    for (const Type& t : arg_types)
      if (t.is_adt()) return true;
    return false;
  }
};

// Declaration tables for one problem. Constructor names are global: two
// ADTs may not share a constructor name, which keeps the clause syntax
// unambiguous.
class Signature {
public:
  int32_t add_adt(const std::string& name);
  void add_constructor(int32_t adt, const std::string& name,
                       std::vector<Type> args);
  int32_t add_pred(PredDecl decl);

  std::optional<int32_t> find_adt(const std::string& name) const;
  std::optional<int32_t> find_pred(const std::string& name) const;
  // Returns (adt index, constructor index) for a constructor name.
  std::optional<std::pair<int32_t, int32_t>> find_constructor(
      const std::string& name) const;

  const AdtDecl& adt(int32_t id) const { return adts_.at(id); }
  const PredDecl& pred(int32_t id) const { return preds_.at(id); }
  PredDecl& pred(int32_t id) { return preds_.at(id); }
  const Constructor& constructor(int32_t adt, int32_t ctor) const {
    return adts_.at(adt).ctors.at(ctor);
  }
  int32_t n_adts() const { return static_cast<int32_t>(adts_.size()); }
  int32_t n_preds() const { return static_cast<int32_t>(preds_.size()); }

  // Produces "base", "base_1", "base_2", ... avoiding declared predicates.
  std::string fresh_pred_name(const std::string& base) const;

private:
  std::vector<AdtDecl> adts_;
  std::vector<PredDecl> preds_;
  std::map<std::string, int32_t> adt_index_;
  std::map<std::string, int32_t> pred_index_;
  std::map<std::string, std::pair<int32_t, int32_t>> ctor_index_;
};

// Variable store for one problem. Clauses refer to variables by index;
// names are kept for diagnostics and printing and need not be unique.
class VarPool {
public:
  int32_t make(std::string name, Type type);
  // A variant of `base` that no existing variable uses.
  int32_t fresh(const std::string& base, Type type);

  const std::string& name(int32_t v) const { return entries_.at(v).name; }
  Type type(int32_t v) const { return entries_.at(v).type; }
  int32_t size() const { return static_cast<int32_t>(entries_.size()); }

private:
  struct Entry {
    std::string name;
    Type type;
  };
  std::vector<Entry> entries_;
  std::map<std::string, int> name_uses_;
};

// Mutable per-run state shared by the transformation machinery.
struct Context {
  Signature sig;
  VarPool vars;
};

}  // namespace chcadt
