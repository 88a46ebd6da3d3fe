#pragma once

// Linear integer arithmetic constraints with boolean literals.
//
// A constraint is a conjunction of linear atoms over Int variables plus
// boolean literals, or the explicit false constraint. Atoms are kept in
// a normal form: <= / = / != with arbitrary-precision coefficients
// reduced by the gcd of coefficients and constant; strict < over the
// integers is turned into <= with the constant decreased by one at
// construction time.
//
// The decision procedures reason over the rationals, so unsat answers
// are sound for integer semantics; sat answers are only given when an
// integer witness has been found and checked.

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <map>
#include <optional>
#include <vector>

#include "chcadt/types.hpp"

namespace chcadt {

using Coeff = boost::multiprecision::cpp_int;

// Sum of coeff * var compared against a constant.
struct LinearAtom {
  enum class Rel : uint8_t { Le, Eq, Ne };

  Rel rel = Rel::Le;
  std::map<int32_t, Coeff> coeffs;  // nonzero entries only once normalized
  Coeff constant = 0;

  // Divides through by the gcd of coefficients and constant and, for
  // = and !=, makes the leading coefficient positive. Ground atoms
  // (empty coefficient map) are left for Constraint::add to fold away.
  void normalize();
  // Value of a ground atom; only meaningful when coeffs is empty.
  bool ground_value() const;
  bool mentions(int32_t v) const { return coeffs.count(v) != 0; }

  friend bool operator==(const LinearAtom&, const LinearAtom&) = default;
  friend std::strong_ordering operator<=>(const LinearAtom& a,
                                          const LinearAtom& b);
};

struct BoolLit {
  int32_t var = -1;
  bool positive = true;

  friend bool operator==(const BoolLit&, const BoolLit&) = default;
  friend auto operator<=>(const BoolLit&, const BoolLit&) = default;
};

// Linear expression builder used by the parser and by tests.
struct LinearExpr {
  std::map<int32_t, Coeff> coeffs;
  Coeff constant = 0;

  static LinearExpr variable(int32_t v);
  static LinearExpr literal(Coeff k);
  LinearExpr& operator+=(const LinearExpr& o);
  LinearExpr& operator-=(const LinearExpr& o);
  LinearExpr& operator*=(const Coeff& k);
};

// Comparison operators accepted by the builder; Lt/Gt become non-strict
// atoms over the integers.
enum class CmpOp { Eq, Ne, Le, Lt, Ge, Gt };

LinearAtom make_atom(CmpOp op, const LinearExpr& lhs, const LinearExpr& rhs);

class Constraint {
public:
  static Constraint top() { return Constraint(); }
  static Constraint bottom() {
    Constraint c;
    c.bottom_ = true;
    return c;
  }

  bool is_bottom() const { return bottom_; }
  bool is_top() const { return !bottom_ && atoms_.empty() && bools_.empty(); }

  // Adding normalizes, folds ground atoms, drops exact duplicates and
  // collapses complementary boolean literals to false.
  void add(LinearAtom a);
  void add(BoolLit l);
  void conjoin(const Constraint& o);

  const std::vector<LinearAtom>& atoms() const { return atoms_; }
  const std::vector<BoolLit>& bools() const { return bools_; }

  std::vector<int32_t> vars() const;  // sorted, deduplicated
  bool mentions(int32_t v) const;

  // Renames variables; the map must send variables to variables not in
  // the image of any other mapped variable's atom, i.e. it is applied
  // simultaneously.
  Constraint renamed(const std::map<int32_t, int32_t>& ren) const;

  // Structural equality on the normalized atom and literal multisets,
  // ignoring order.
  bool same_atoms(const Constraint& o) const;

  friend bool operator==(const Constraint&, const Constraint&) = default;

private:
  bool bottom_ = false;
  std::vector<LinearAtom> atoms_;
  std::vector<BoolLit> bools_;
};

enum class Sat3 { Sat, Unsat, Unknown };

struct SolveLimits {
  // Upper bound on atoms produced while eliminating one variable.
  size_t projection_ceiling = 512;
  // Upper bound on != case-split branches explored.
  size_t branch_limit = 4096;
  // Upper bound on rounding combinations tried for an integer witness.
  size_t rounding_limit = 1024;
};

// Satisfiability over the integers: Unsat only if rationally
// unsatisfiable, Sat only with a verified integer witness.
Sat3 is_satisfiable(const Constraint& c, const SolveLimits& limits = {});
std::optional<std::map<int32_t, Coeff>> integer_witness(
    const Constraint& c, const SolveLimits& limits = {});

// Sound entailment: returns true only if every integer model of c
// satisfies d.
bool entails(const Constraint& c, const Constraint& d,
             const SolveLimits& limits = {});

// Existential projection onto `keep`: eliminates all other variables.
// The result mentions only kept variables and is entailed by c;
// precision may be lost when the elimination ceiling is hit or across
// != atoms.
Constraint project(const Constraint& c, const std::vector<int32_t>& keep,
                   const SolveLimits& limits = {});

// Constraint generalization: splits each equality of c1 into a pair of
// inequalities and keeps exactly the parts entailed by c2. The result
// is entailed by both arguments.
Constraint widen(const Constraint& c1, const Constraint& c2,
                 const SolveLimits& limits = {});

// Checks a full integer assignment against c; variables missing from
// the assignment default to zero.
bool evaluate(const Constraint& c, const std::map<int32_t, Coeff>& model,
              const std::map<int32_t, bool>& bool_model = {});

}  // namespace chcadt
