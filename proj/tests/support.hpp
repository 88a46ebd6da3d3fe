#pragma once

// Shared fixtures and helpers for the test suite.

#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "chcadt/constraint.hpp"
#include "chcadt/parser.hpp"
#include "test_config.hpp"

namespace chcadt::testing {

// The list-reverse length problem: satisfiable, needs a difference
// predicate to terminate.
inline constexpr const char* kReverseProgram = R"(
:- adt list = nil | cons(int, list).

:- pred append(list, list, list).
:- mode append(in, in, out).
:- total_functional append/3.

:- pred reverse(list, list).
:- mode reverse(in, out).
:- total_functional reverse/2.

:- pred snoc(list, int, list).
:- mode snoc(in, in, out).
:- total_functional snoc/3.

:- pred len(list, int).
:- mode len(in, out).
:- total_functional len/2.

false :- N2 =\= N0+N1, append(Xs,Ys,Zs), reverse(Zs,Rs), len(Xs,N0), len(Ys,N1), len(Rs,N2).
append([],Ys,Ys).
append([X|Xs],Ys,[X|Zs]) :- append(Xs,Ys,Zs).
reverse([],[]).
reverse([X|Xs],Rs) :- reverse(Xs,Ts), snoc(Ts,X,Rs).
snoc([],Y,[Y]).
snoc([X|Xs],Y,[X|Zs]) :- snoc(Xs,Y,Zs).
len([],0).
len([H|T],N) :- N = M+1, len(T,M).
)";

// Same program with the goal relation flipped to a false claim, so the
// system is unsatisfiable.
inline constexpr const char* kReverseProgramUnsat = R"(
:- adt list = nil | cons(int, list).

:- pred append(list, list, list).
:- mode append(in, in, out).
:- total_functional append/3.

:- pred reverse(list, list).
:- mode reverse(in, out).
:- total_functional reverse/2.

:- pred snoc(list, int, list).
:- mode snoc(in, in, out).
:- total_functional snoc/3.

:- pred len(list, int).
:- mode len(in, out).
:- total_functional len/2.

false :- N2 =\= N0-N1, append(Xs,Ys,Zs), reverse(Zs,Rs), len(Xs,N0), len(Ys,N1), len(Rs,N2).
append([],Ys,Ys).
append([X|Xs],Ys,[X|Zs]) :- append(Xs,Ys,Zs).
reverse([],[]).
reverse([X|Xs],Rs) :- reverse(Xs,Ts), snoc(Ts,X,Rs).
snoc([],Y,[Y]).
snoc([X|Xs],Y,[X|Zs]) :- snoc(Xs,Y,Zs).
len([],0).
len([H|T],N) :- N = M+1, len(T,M).
)";

inline int32_t pred_id(const Context& ctx, const std::string& name) {
  auto id = ctx.sig.find_pred(name);
  if (!id) throw Error("no predicate named " + name);
  return *id;
}

// Solver command for tests needing a live backend: environment override
// first, then the build-tree default. Empty when neither is available.
inline std::string solver_command() {
  if (const char* env = std::getenv("CHCADT_SOLVER_CMD")) return env;
  return kDefaultSolverCommand;
}

// --- Random constraint generation for the property suites ------------

struct ConstraintGen {
  std::mt19937 rng;
  int n_vars;
  explicit ConstraintGen(uint32_t seed, int n_vars = 3)
      : rng(seed), n_vars(n_vars) {}

  int roll(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  }

  LinearAtom atom() {
    LinearAtom a;
    switch (roll(0, 5)) {
      case 0:
        a.rel = LinearAtom::Rel::Eq;
        break;
      case 1:
        a.rel = LinearAtom::Rel::Ne;
        break;
      default:
        a.rel = LinearAtom::Rel::Le;
        break;
    }
    int terms = roll(1, n_vars);
    for (int t = 0; t < terms; ++t) {
      int v = roll(0, n_vars - 1);
      int c = roll(-3, 3);
      if (c != 0) a.coeffs[v] += c;
    }
    for (auto it = a.coeffs.begin(); it != a.coeffs.end();)
      it = it->second == 0 ? a.coeffs.erase(it) : std::next(it);
    if (a.coeffs.empty()) a.coeffs[roll(0, n_vars - 1)] = 1;
    a.constant = roll(-6, 6);
    a.normalize();
    return a;
  }

  Constraint constraint(int max_atoms = 4) {
    Constraint c;
    int n = roll(1, max_atoms);
    for (int i = 0; i < n; ++i) c.add(atom());
    return c;
  }
};

// --- Golden output for the reverse problem ---------------------------

// The seven basic-typed clauses the reverse problem transforms into,
// built in a context that already holds the predicates new, new_1 and
// diff from a completed run. Variable identities are fresh; comparisons
// must go through the variant check.
inline std::vector<Clause> expected_reverse_output(Context& ctx) {
  Type list = Type::adt_of(*ctx.sig.find_adt("list"));
  int32_t pnew = pred_id(ctx, "new");
  int32_t pnew1 = pred_id(ctx, "new_1");
  int32_t pdiff = pred_id(ctx, "diff");
  auto iv = [&] { return ctx.vars.fresh("G", Type::integer()); };
  auto lv = [&] { return ctx.vars.fresh("Gs", list); };
  auto V = [&](int32_t v) { return Term::var(v, ctx.vars.type(v)); };
  auto eq_const = [](int32_t v, int k) {
    return make_atom(CmpOp::Eq, LinearExpr::variable(v),
                     LinearExpr::literal(k));
  };
  auto eq_succ = [](int32_t v, int32_t w) {
    LinearExpr rhs = LinearExpr::variable(w);
    rhs += LinearExpr::literal(1);
    return make_atom(CmpOp::Eq, LinearExpr::variable(v), rhs);
  };

  std::vector<Clause> out;
  {  // false :- C =\= A+B, new(A, B, C).
    int32_t a = iv(), b = iv(), c = iv();
    Clause g;
    LinearExpr sum = LinearExpr::variable(a);
    sum += LinearExpr::variable(b);
    g.constraint.add(make_atom(CmpOp::Ne, LinearExpr::variable(c), sum));
    g.body = {Atom{pnew, {V(a), V(b), V(c)}}};
    out.push_back(std::move(g));
  }
  {  // new(A, B, C) :- A = 0, new_1(B, C).
    int32_t a = iv(), b = iv(), c = iv();
    Clause d;
    d.head = Atom{pnew, {V(a), V(b), V(c)}};
    d.constraint.add(eq_const(a, 0));
    d.body = {Atom{pnew1, {V(b), V(c)}}};
    out.push_back(std::move(d));
  }
  {  // new(A, B, C) :- A = M+1, new(M, B, C1), diff(X, C1, C).
    int32_t a = iv(), b = iv(), c = iv(), m = iv(), c1 = iv(), x = lv();
    Clause d;
    d.head = Atom{pnew, {V(a), V(b), V(c)}};
    d.constraint.add(eq_succ(a, m));
    d.body = {Atom{pnew, {V(m), V(b), V(c1)}},
              Atom{pdiff, {V(x), V(c1), V(c)}}};
    out.push_back(std::move(d));
  }
  {  // new_1(A, B) :- A = 0, B = 0.
    int32_t a = iv(), b = iv();
    Clause d;
    d.head = Atom{pnew1, {V(a), V(b)}};
    d.constraint.add(eq_const(a, 0));
    d.constraint.add(eq_const(b, 0));
    out.push_back(std::move(d));
  }
  {  // new_1(A, B) :- A = M+1, new_1(M, B1), diff(X, B1, B).
    int32_t a = iv(), b = iv(), m = iv(), b1 = iv(), x = lv();
    Clause d;
    d.head = Atom{pnew1, {V(a), V(b)}};
    d.constraint.add(eq_succ(a, m));
    d.body = {Atom{pnew1, {V(m), V(b1)}}, Atom{pdiff, {V(x), V(b1), V(b)}}};
    out.push_back(std::move(d));
  }
  {  // diff(X, A, B) :- B = 1, A = 0.
    int32_t a = iv(), b = iv(), x = lv();
    Clause d;
    d.head = Atom{pdiff, {V(x), V(a), V(b)}};
    d.constraint.add(eq_const(b, 1));
    d.constraint.add(eq_const(a, 0));
    out.push_back(std::move(d));
  }
  {  // diff(X, A, B) :- B = M1+1, A = M2+1, diff(X, M2, M1).
    int32_t a = iv(), b = iv(), m1 = iv(), m2 = iv(), x = lv();
    Clause d;
    d.head = Atom{pdiff, {V(x), V(a), V(b)}};
    d.constraint.add(eq_succ(b, m1));
    d.constraint.add(eq_succ(a, m2));
    d.body = {Atom{pdiff, {V(x), V(m2), V(m1)}}};
    out.push_back(std::move(d));
  }
  return out;
}

// Exhaustive search for an integer model with all variables in
// [-bound, bound]; the reference oracle for the solver properties.
inline std::optional<std::map<int32_t, Coeff>> grid_model(
    const Constraint& c, int n_vars, int bound = 5) {
  std::map<int32_t, Coeff> model;
  std::vector<int> vals(n_vars, -bound);
  for (;;) {
    for (int i = 0; i < n_vars; ++i) model[i] = vals[i];
    if (evaluate(c, model)) return model;
    int i = 0;
    for (; i < n_vars; ++i) {
      if (vals[i] < bound) {
        ++vals[i];
        break;
      }
      vals[i] = -bound;
    }
    if (i == n_vars) return std::nullopt;
  }
}

}  // namespace chcadt::testing
