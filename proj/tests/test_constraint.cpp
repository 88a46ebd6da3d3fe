// Property suites for the linear constraint engine, checked against an
// exhaustive grid-search oracle over small integer boxes.

#include <gtest/gtest.h>

#include "chcadt/constraint.hpp"
#include "support.hpp"

using namespace chcadt;
using chcadt::testing::ConstraintGen;
using chcadt::testing::grid_model;

namespace {

constexpr int kCases = 1200;
constexpr int kVars = 3;

LinearAtom atom_of(CmpOp op, std::initializer_list<std::pair<int, int>> terms,
                   int k) {
  LinearExpr lhs;
  for (auto [v, c] : terms) {
    LinearExpr t = LinearExpr::variable(v);
    t *= c;
    lhs += t;
  }
  return make_atom(op, lhs, LinearExpr::literal(k));
}

Constraint of(std::initializer_list<LinearAtom> atoms) {
  Constraint c;
  for (const LinearAtom& a : atoms) c.add(a);
  return c;
}

}  // namespace

TEST(ConstraintSolve, KnownSatisfiableSystems) {
  EXPECT_EQ(is_satisfiable(Constraint::top()), Sat3::Sat);
  // x = 2
  EXPECT_EQ(is_satisfiable(of({atom_of(CmpOp::Eq, {{0, 2}}, 4)})), Sat3::Sat);
  // x <= 3 and x >= -1
  EXPECT_EQ(is_satisfiable(of({atom_of(CmpOp::Le, {{0, 1}}, 3),
                               atom_of(CmpOp::Ge, {{0, 1}}, -1)})),
            Sat3::Sat);
  // x < y, y < z inside a wide box
  EXPECT_EQ(is_satisfiable(of({atom_of(CmpOp::Lt, {{0, 1}, {1, -1}}, 0),
                               atom_of(CmpOp::Lt, {{1, 1}, {2, -1}}, 0)})),
            Sat3::Sat);
  // x != 0 with x bounded
  EXPECT_EQ(is_satisfiable(of({atom_of(CmpOp::Ne, {{0, 1}}, 0),
                               atom_of(CmpOp::Le, {{0, 1}}, 1),
                               atom_of(CmpOp::Ge, {{0, 1}}, -1)})),
            Sat3::Sat);
}

TEST(ConstraintSolve, KnownUnsatisfiableSystems) {
  EXPECT_EQ(is_satisfiable(Constraint::bottom()), Sat3::Unsat);
  // x <= 3 and x >= 4
  EXPECT_EQ(is_satisfiable(of({atom_of(CmpOp::Le, {{0, 1}}, 3),
                               atom_of(CmpOp::Ge, {{0, 1}}, 4)})),
            Sat3::Unsat);
  // cyclic strict order x < y < z < x
  EXPECT_EQ(is_satisfiable(of({atom_of(CmpOp::Lt, {{0, 1}, {1, -1}}, 0),
                               atom_of(CmpOp::Lt, {{1, 1}, {2, -1}}, 0),
                               atom_of(CmpOp::Lt, {{2, 1}, {0, -1}}, 0)})),
            Sat3::Unsat);
  // x = 0 and x != 0
  EXPECT_EQ(is_satisfiable(of({atom_of(CmpOp::Eq, {{0, 1}}, 0),
                               atom_of(CmpOp::Ne, {{0, 1}}, 0)})),
            Sat3::Unsat);
  // 0 <= x <= 1 and x != 0 and x != 1
  EXPECT_EQ(is_satisfiable(of({atom_of(CmpOp::Ge, {{0, 1}}, 0),
                               atom_of(CmpOp::Le, {{0, 1}}, 1),
                               atom_of(CmpOp::Ne, {{0, 1}}, 0),
                               atom_of(CmpOp::Ne, {{0, 1}}, 1)})),
            Sat3::Unsat);
}

TEST(ConstraintSolve, NoRationalWitnessesForIntegerQuestions) {
  // 2x = 1 has a rational solution but no integer one: any answer but
  // Sat is sound here.
  Sat3 r = is_satisfiable(of({atom_of(CmpOp::Eq, {{0, 2}}, 1)}));
  EXPECT_NE(r, Sat3::Sat);
  // 2x = 2y + 1 likewise.
  r = is_satisfiable(of({atom_of(CmpOp::Eq, {{0, 2}, {1, -2}}, 1)}));
  EXPECT_NE(r, Sat3::Sat);
}

TEST(ConstraintSolve, BooleanLiteralHandling) {
  Constraint c;
  c.add(BoolLit{7, true});
  EXPECT_EQ(is_satisfiable(c), Sat3::Sat);
  c.add(BoolLit{7, false});
  EXPECT_TRUE(c.is_bottom());
  EXPECT_EQ(is_satisfiable(c), Sat3::Unsat);

  Constraint d;
  d.add(BoolLit{3, false});
  std::map<int32_t, Coeff> none;
  EXPECT_TRUE(evaluate(d, none, {{3, false}}));
  EXPECT_FALSE(evaluate(d, none, {{3, true}}));
}

TEST(ConstraintSolve, AgreesWithGridSearch) {
  int unsat_seen = 0, sat_seen = 0;
  for (int i = 0; i < kCases; ++i) {
    ConstraintGen gen(10000 + i, kVars);
    Constraint c = gen.constraint();
    auto grid = grid_model(c, kVars);
    Sat3 verdict = is_satisfiable(c);
    if (verdict == Sat3::Unsat) {
      ++unsat_seen;
      EXPECT_FALSE(grid.has_value())
          << "claimed unsatisfiable but the grid has a model (case " << i
          << ")";
    }
    if (grid.has_value())
      EXPECT_NE(verdict, Sat3::Unsat) << "grid model exists (case " << i << ")";
    if (verdict == Sat3::Sat) {
      ++sat_seen;
      auto w = integer_witness(c);
      ASSERT_TRUE(w.has_value()) << "sat without witness (case " << i << ")";
      EXPECT_TRUE(evaluate(c, *w)) << "witness fails (case " << i << ")";
    }
  }
  // The generator must exercise both outcomes heavily for the suite to
  // mean anything.
  EXPECT_GT(unsat_seen, 100);
  EXPECT_GT(sat_seen, 100);
}

TEST(ConstraintProject, ResultEntailedAndRestrictedToKeptVariables) {
  for (int i = 0; i < kCases; ++i) {
    ConstraintGen gen(20000 + i, kVars);
    Constraint c = gen.constraint();
    int keep_mask = 1 + gen.roll(0, (1 << kVars) - 2);
    std::vector<int32_t> keep;
    for (int v = 0; v < kVars; ++v)
      if (keep_mask & (1 << v)) keep.push_back(v);
    Constraint p = project(c, keep);
    for (int32_t v : p.vars())
      EXPECT_TRUE(std::find(keep.begin(), keep.end(), v) != keep.end())
          << "projection mentions an eliminated variable (case " << i << ")";
    auto grid = grid_model(c, kVars);
    if (grid)
      EXPECT_TRUE(evaluate(p, *grid))
          << "model of the source violates the projection (case " << i << ")";
  }
}

TEST(ConstraintEntails, NeverContradictsGridSearch) {
  int held = 0;
  for (int i = 0; i < kCases; ++i) {
    ConstraintGen gen(30000 + i, kVars);
    Constraint c = gen.constraint();
    Constraint d = gen.constraint(2);
    if (!entails(c, d)) continue;
    ++held;
    // Every grid model of c must satisfy d.
    std::map<int32_t, Coeff> model;
    std::vector<int> vals(kVars, -5);
    for (;;) {
      for (int v = 0; v < kVars; ++v) model[v] = vals[v];
      if (evaluate(c, model))
        ASSERT_TRUE(evaluate(d, model))
            << "claimed entailment has a grid countermodel (case " << i << ")";
      int v = 0;
      for (; v < kVars; ++v) {
        if (vals[v] < 5) {
          ++vals[v];
          break;
        }
        vals[v] = -5;
      }
      if (v == kVars) break;
    }
  }
  EXPECT_GT(held, 100);
}

TEST(ConstraintEntails, SubsetAndReflexiveCases) {
  for (int i = 0; i < 200; ++i) {
    ConstraintGen gen(40000 + i, kVars);
    Constraint c = gen.constraint();
    if (is_satisfiable(c) == Sat3::Unsat) continue;
    EXPECT_TRUE(entails(c, c)) << "case " << i;
    EXPECT_TRUE(entails(c, Constraint::top())) << "case " << i;
    // Dropping atoms weakens: c entails every prefix of itself.
    Constraint prefix;
    if (!c.atoms().empty()) prefix.add(c.atoms().front());
    EXPECT_TRUE(entails(c, prefix)) << "case " << i;
  }
  EXPECT_TRUE(entails(Constraint::bottom(),
                      of({atom_of(CmpOp::Eq, {{0, 1}}, 7)})));
}

TEST(ConstraintWiden, ResultEntailedByBothArguments) {
  int nontrivial = 0;
  for (int i = 0; i < kCases; ++i) {
    ConstraintGen gen(50000 + i, kVars);
    Constraint c1 = gen.constraint();
    Constraint c2 = gen.constraint();
    Constraint w = widen(c1, c2);
    if (!w.is_top()) ++nontrivial;
    auto g1 = grid_model(c1, kVars);
    if (g1)
      EXPECT_TRUE(evaluate(w, *g1))
          << "model of the first argument violates the result (case " << i
          << ")";
    auto g2 = grid_model(c2, kVars);
    if (g2)
      EXPECT_TRUE(evaluate(w, *g2))
          << "model of the second argument violates the result (case " << i
          << ")";
    // The generalization must stay usable for folding: the second
    // argument entails it outright.
    EXPECT_TRUE(entails(c2, w)) << "case " << i;
  }
  EXPECT_GT(nontrivial, 100);
}

TEST(ConstraintWiden, KeepsSharedBoundsAndDropsConflicts) {
  // x = 3 widened against x >= 3 keeps x >= 3 and drops x <= 3.
  Constraint c1 = of({atom_of(CmpOp::Eq, {{0, 1}}, 3)});
  Constraint c2 = of({atom_of(CmpOp::Ge, {{0, 1}}, 3)});
  Constraint w = widen(c1, c2);
  std::map<int32_t, Coeff> at3 = {{0, 3}}, at9 = {{0, 9}}, at0 = {{0, 0}};
  EXPECT_TRUE(evaluate(w, at3));
  EXPECT_TRUE(evaluate(w, at9));
  EXPECT_FALSE(evaluate(w, at0));
  // Unrelated constraints widen to top.
  Constraint u = widen(of({atom_of(CmpOp::Eq, {{0, 1}}, 1)}),
                       of({atom_of(CmpOp::Eq, {{1, 1}}, 1)}));
  EXPECT_TRUE(u.is_top());
}

TEST(ConstraintNormalize, GcdReductionAndGroundFolding) {
  LinearAtom a = atom_of(CmpOp::Eq, {{0, 2}}, 4);
  EXPECT_EQ(a.coeffs.at(0), 1);
  EXPECT_EQ(a.constant, 2);
  // 2x < 7 over integers is x <= 3.
  LinearAtom b = atom_of(CmpOp::Lt, {{0, 2}}, 7);
  EXPECT_EQ(b.rel, LinearAtom::Rel::Le);
  EXPECT_EQ(b.coeffs.at(0), 1);
  EXPECT_EQ(b.constant, 3);

  Constraint c;
  c.add(atom_of(CmpOp::Le, {{0, 0}}, 5));  // ground: 0 <= 5
  EXPECT_TRUE(c.is_top());
  c.add(atom_of(CmpOp::Le, {{0, 0}}, -1));  // ground: 0 <= -1
  EXPECT_TRUE(c.is_bottom());
}

TEST(ConstraintProject, EqualityPivotIsExact) {
  // project x onto {y} from {x = y + 2, x <= 5} gives y <= 3.
  Constraint c = of({atom_of(CmpOp::Eq, {{0, 1}, {1, -1}}, 2),
                     atom_of(CmpOp::Le, {{0, 1}}, 5)});
  Constraint p = project(c, {1});
  std::map<int32_t, Coeff> y3 = {{1, 3}}, y4 = {{1, 4}};
  EXPECT_TRUE(evaluate(p, y3));
  EXPECT_FALSE(evaluate(p, y4));
}
