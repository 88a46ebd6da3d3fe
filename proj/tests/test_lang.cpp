// Surface syntax: parsing, printing, and SMT-LIB rendering.

#include <gtest/gtest.h>

#include "chcadt/parser.hpp"
#include "chcadt/printer.hpp"
#include "chcadt/smtlib.hpp"
#include "support.hpp"

using namespace chcadt;
using chcadt::testing::kReverseProgram;

namespace {

// Parse, print every clause, re-parse under the same declarations, and
// require the clause sets to be variants of each other.
void expect_round_trip(const std::string& header, const std::string& clauses) {
  Program p1 = parse_program(header + clauses);
  std::string printed;
  p1.store.for_each(
      [&](const Clause& c) { printed += print_clause(c, p1.ctx) + "\n"; });
  Program p2 = parse_program(header + printed);
  ASSERT_EQ(p1.store.size(), p2.store.size()) << printed;
  EXPECT_TRUE(
      clause_set_variant_equal(p1.store.all(), p2.store.all(), p2.ctx))
      << "round trip changed the clauses:\n"
      << printed;
}

}  // namespace

TEST(Parser, ReverseProgramShape) {
  Program p = parse_program(kReverseProgram);
  EXPECT_EQ(p.goals.size(), 1u);
  EXPECT_EQ(p.definite.size(), 8u);
  const Clause& goal = p.store.get(p.goals[0]);
  EXPECT_TRUE(goal.is_goal());
  EXPECT_EQ(goal.body.size(), 5u);
  ASSERT_EQ(goal.constraint.atoms().size(), 1u);
  EXPECT_EQ(goal.constraint.atoms()[0].rel, LinearAtom::Rel::Ne);
  for (int32_t id : p.definite) {
    const Clause& c = p.store.get(id);
    EXPECT_TRUE(c.is_normalized(p.ctx));
    EXPECT_FALSE(c.is_goal());
  }
  const PredDecl& len = p.ctx.sig.pred(chcadt::testing::pred_id(p.ctx, "len"));
  EXPECT_TRUE(len.total);
  EXPECT_TRUE(len.functional);
  ASSERT_EQ(len.modes.size(), 2u);
  EXPECT_EQ(len.modes[0], Mode::In);
  EXPECT_EQ(len.modes[1], Mode::Out);
}

TEST(Parser, ListSugarAndNestedConstructors) {
  Program p = parse_program(R"(
:- adt list = nil | cons(int, list).
:- pred q(list).
q([]).
q([X]).
q([X, Y | T]).
q(cons(X, cons(Y, T))).
)");
  const Clause& empty = p.store.get(p.definite[0]);
  EXPECT_EQ(empty.head->args[0].kind(), Term::Kind::Ctor);
  EXPECT_TRUE(empty.head->args[0].args().empty());
  const Clause& sugar = p.store.get(p.definite[2]);
  const Clause& plain = p.store.get(p.definite[3]);
  EXPECT_TRUE(clause_variant_equal(sugar, plain, p.ctx));
}

TEST(Parser, BooleanLiteralsAndWildcards) {
  Program p = parse_program(R"(
:- pred flag(bool, bool).
:- pred q(int).
q(X) :- X = 1, flag(B, C), B, not(C).
q(X) :- X = 2, flag(_, _).
)");
  const Clause& c = p.store.get(p.definite[0]);
  ASSERT_EQ(c.constraint.bools().size(), 2u);
  EXPECT_TRUE(c.constraint.bools()[0].positive);
  EXPECT_FALSE(c.constraint.bools()[1].positive);
  const Clause& wild = p.store.get(p.definite[1]);
  // Each underscore is a fresh variable.
  EXPECT_NE(wild.body[0].args[0], wild.body[0].args[1]);
}

TEST(Parser, ArithmeticGrammar) {
  Program p = parse_program(R"(
:- pred q(int, int).
q(X, Y) :- 2*X + 3 =< Y - 1.
q(X, Y) :- X = -4, Y >= -(X + 1).
q(X, Y) :- X - Y =\= 0, X < Y.
)");
  EXPECT_EQ(p.definite.size(), 3u);
  EXPECT_THROW(parse_program(R"(
:- pred q(int, int).
q(X, Y) :- X * Y = 4.
)"),
               ParseError);
}

TEST(Parser, DiagnosticsCarryPositions) {
  try {
    parse_program(":- pred q(int).\nq(X) :- r(X).\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.pos.line, 2);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(parse_program(":- pred q(int).\nq(1, 2).\n"), ParseError);
  EXPECT_THROW(parse_program(":- pred q(int).\n:- pred q(int).\n"),
               ParseError);
  EXPECT_THROW(parse_program(":- total q/3.\n"), ParseError);
  // Type errors: an integer where a list is expected.
  EXPECT_THROW(parse_program(R"(
:- adt list = nil | cons(int, list).
:- pred q(list).
q(7).
)"),
               ParseError);
  // A variable used at two types.
  EXPECT_THROW(parse_program(R"(
:- adt list = nil | cons(int, list).
:- pred q(list, int).
q(X, X).
)"),
               ParseError);
}

TEST(Parser, DirectiveValidation) {
  // Arity in total/functional directives must match the declaration.
  EXPECT_THROW(parse_program(":- pred p(int).\n:- total_functional p/2.\n"),
               ParseError);
  // Mode directive for an unknown predicate.
  EXPECT_THROW(parse_program(":- mode p(in).\n"), ParseError);
  // List sugar in a non-list position (no list ADT declared).
  EXPECT_THROW(parse_program(":- pred p(int).\np([]).\n"), ParseError);
}

TEST(Printer, RoundTripsParsedPrograms) {
  expect_round_trip(R"(
:- adt list = nil | cons(int, list).
:- pred append(list, list, list).
:- mode append(in, in, out).
:- total_functional append/3.
:- pred len(list, int).
:- mode len(in, out).
:- total_functional len/2.
)",
                    R"(
false :- N =\= M, append(Xs, Ys, Zs), len(Zs, N), len(Xs, M).
append([], Ys, Ys).
append([X|Xs], Ys, [X|Zs]) :- append(Xs, Ys, Zs).
len([], 0).
len([H|T], N) :- N = M+1, len(T, M).
)");
  expect_round_trip(R"(
:- pred flag(bool, int).
:- pred q(int, int).
)",
                    R"(
q(X, Y) :- 2*X + 3*Y =< -7, X =\= Y, flag(B, X), not(B).
q(X, Y) :- X = -2, 0 =< Y + X, flag(B, Y), B.
)");
}

TEST(Printer, ListSugarIsReapplied) {
  Program p = parse_program(R"(
:- adt list = nil | cons(int, list).
:- pred q(list).
q([X, Y | T]).
q([]).
)");
  EXPECT_EQ(print_clause(p.store.get(p.definite[0]), p.ctx),
            "q([X,Y|T]).");
  EXPECT_EQ(print_clause(p.store.get(p.definite[1]), p.ctx), "q([]).");
}

TEST(Printer, GoalAndConstraintForms) {
  Program p = parse_program(R"(
:- pred q(int).
false :- X >= 1, q(X).
)");
  std::string s = print_clause(p.store.get(p.goals[0]), p.ctx);
  EXPECT_EQ(s.substr(0, 9), "false :- ");
  EXPECT_NE(s.find("q(X)"), std::string::npos);
}

TEST(Smtlib, DeclarationsAndNamedAssertions) {
  Program p = parse_program(R"(
:- pred sum(int, int).
:- mode sum(in, out).
sum(N, S) :- N = 0, S = 0.
sum(N, S) :- N = M+1, S = T+N, sum(M, T).
false :- S < N, sum(N, S), N >= 0.
)");
  std::vector<int32_t> ids = p.definite;
  ids.insert(ids.end(), p.goals.begin(), p.goals.end());
  std::string smt = emit_smtlib(p.ctx, p.store, ids);
  EXPECT_NE(smt.find("(set-logic HORN)"), std::string::npos);
  EXPECT_NE(smt.find("(declare-fun sum (Int Int) Bool)"), std::string::npos);
  for (int32_t id : ids)
    EXPECT_NE(smt.find(":named cl" + std::to_string(id)), std::string::npos);
  EXPECT_NE(smt.find("(check-sat)"), std::string::npos);
  // No datatype block for an ADT-free system.
  EXPECT_EQ(smt.find("declare-datatypes"), std::string::npos);
  // Emission is deterministic.
  EXPECT_EQ(smt, emit_smtlib(p.ctx, p.store, ids));
  // Parentheses balance.
  int depth = 0;
  for (char ch : smt) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    ASSERT_GE(depth, 0);
  }
  EXPECT_EQ(depth, 0);
}

TEST(Smtlib, DatatypesForAdtArguments) {
  Program p = parse_program(R"(
:- adt list = nil | cons(int, list).
:- pred len(list, int).
:- mode len(in, out).
len([], 0).
len([H|T], N) :- N = M+1, len(T, M).
)");
  std::string smt = emit_smtlib(p.ctx, p.store, p.definite);
  EXPECT_NE(smt.find("(declare-datatypes ((list 0))"), std::string::npos);
  EXPECT_NE(smt.find("(declare-fun len (list Int) Bool)"), std::string::npos);
  EXPECT_NE(smt.find("(cons (cons_0 Int) (cons_1 list))"), std::string::npos);
}

TEST(Smtlib, FunctionalDisagreementGoal) {
  Program p = parse_program(R"(
:- pred step(int, int, int).
:- mode step(in, out, out).
step(X, Y, Z) :- Y = X+1, Z = X+2.
)");
  int32_t pred = chcadt::testing::pred_id(p.ctx, "step");
  std::string smt = emit_smtlib(p.ctx, p.store, p.definite, FunDiffGoal{pred});
  EXPECT_NE(smt.find(":named fdgoal"), std::string::npos);
  // Two copies of the atom on shared input and an output disagreement.
  EXPECT_NE(smt.find("(or (not (="), std::string::npos);
  size_t first = smt.find("(step fd_in0");
  ASSERT_NE(first, std::string::npos);
  EXPECT_NE(smt.find("(step fd_in0", first + 1), std::string::npos);
}

TEST(Smtlib, HostileNamesAreMangled) {
  Context ctx;
  PredDecl bad;
  bad.name = "not";  // collides with the SMT-LIB core symbol
  bad.arg_types = {Type::integer()};
  bad.modes = {Mode::In};
  int32_t pid = ctx.sig.add_pred(bad);
  PredDecl odd;
  odd.name = "weird pred!";
  odd.arg_types = {};
  odd.modes = {};
  int32_t oid = ctx.sig.add_pred(odd);
  ClauseSet store;
  Clause c;
  c.head = Atom{pid, {Term::var(ctx.vars.fresh("X", Type::integer()),
                                Type::integer())}};
  c.body.push_back(Atom{oid, {}});
  int32_t id = store.add(c);
  std::string smt = emit_smtlib(ctx, store, {id});
  EXPECT_NE(smt.find("s_not"), std::string::npos);
  EXPECT_NE(smt.find("weird_pred_"), std::string::npos);
  EXPECT_EQ(smt.find("(not ("), std::string::npos);
}
