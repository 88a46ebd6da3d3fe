#pragma once

// First-order terms and substitutions.
//
// A term is a variable, a constructor application, or a basic constant.
// After clause normalization, constants and compound basic expressions
// never occur inside atoms: every basic-typed position holds a variable
// and the arithmetic lives in the clause constraint.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "chcadt/types.hpp"

namespace chcadt {

class Term {
public:
  enum class Kind : uint8_t { Var, Ctor, IntConst, BoolConst };

  static Term var(int32_t v, Type t) {
    Term r;
    r.kind_ = Kind::Var;
    r.type_ = t;
    r.a_ = v;
    return r;
  }
  static Term ctor(int32_t adt, int32_t ctor, std::vector<Term> args) {
    Term r;
    r.kind_ = Kind::Ctor;
    r.type_ = Type::adt_of(adt);
    r.a_ = adt;
    r.b_ = ctor;
    r.args_ = std::move(args);
    return r;
  }
  static Term int_const(long long k) {
    Term r;
    r.kind_ = Kind::IntConst;
    r.type_ = Type::integer();
    r.k_ = k;
    return r;
  }
  static Term bool_const(bool b) {
    Term r;
    r.kind_ = Kind::BoolConst;
    r.type_ = Type::boolean();
    r.k_ = b ? 1 : 0;
    return r;
  }

  Kind kind() const { return kind_; }
  Type type() const { return type_; }
  bool is_var() const { return kind_ == Kind::Var; }

  int32_t var_id() const { return a_; }
  int32_t adt() const { return a_; }
  int32_t ctor_id() const { return b_; }
  const std::vector<Term>& args() const { return args_; }
  long long int_value() const { return k_; }
  bool bool_value() const { return k_ != 0; }

  // Appends variables in occurrence order; duplicates are kept.
  void collect_vars(std::vector<int32_t>& out) const;
  bool contains_var(int32_t v) const;
  // True if some subterm (including this term) is of basic type and is
  // not a variable, i.e. the term violates the atom normal form.
  bool has_nonvar_basic_subterm() const;

  friend bool operator==(const Term& a, const Term& b) {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
      case Kind::Var:
        return a.a_ == b.a_;
      case Kind::Ctor:
        return a.a_ == b.a_ && a.b_ == b.b_ && a.args_ == b.args_;
      default:
        return a.k_ == b.k_;
    }
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

private:
  Kind kind_ = Kind::Var;
  Type type_;
  int32_t a_ = -1;  // variable id, or ADT id for constructor terms
  int32_t b_ = -1;  // constructor index
  long long k_ = 0;
  std::vector<Term> args_;
};

// Total order on terms, used for canonical forms. Compares kinds first,
// then ids and arguments lexicographically.
int compare(const Term& a, const Term& b);

// Finite map from variables to terms with triangular bindings: apply()
// chases variable chains, so bind(X, Y) followed by bind(Y, t) behaves
// like binding X to t.
class Subst {
public:
  void bind(int32_t v, Term t) { map_.insert_or_assign(v, std::move(t)); }
  const Term* lookup(int32_t v) const {
    auto it = map_.find(v);
    return it == map_.end() ? nullptr : &it->second;
  }
  // Resolves v through variable-to-variable chains to its representative
  // binding, or null if v is unbound.
  const Term* walk(int32_t v) const;

  Term apply(const Term& t) const;
  // Simultaneous application: a bound variable is replaced by its image
  // verbatim, with no substitution inside the image. This is the right
  // application for matcher-produced maps, whose images live in a clause
  // that may reuse the very variable ids being mapped.
  Term apply_flat(const Term& t) const;
  bool empty() const { return map_.empty(); }
  size_t size() const { return map_.size(); }
  const std::map<int32_t, Term>& bindings() const { return map_; }

private:
  std::map<int32_t, Term> map_;
};

}  // namespace chcadt
