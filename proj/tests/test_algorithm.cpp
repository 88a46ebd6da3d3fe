// End-to-end transformation runs on the reverse problem and variants.

#include <gtest/gtest.h>

#include <set>

#include "chcadt/algorithm.hpp"
#include "chcadt/parser.hpp"
#include "chcadt/printer.hpp"
#include "support.hpp"

using namespace chcadt;
using chcadt::testing::expected_reverse_output;
using chcadt::testing::kReverseProgram;
using chcadt::testing::pred_id;

namespace {

struct RunRig {
  Program p;
  LevelStore levels;
  Ledger ledger;
  RuleContext rc{p.ctx, p.store, levels, ledger};
  RunResult result;

  explicit RunRig(const std::string& text, AlgoConfig config = {})
      : p(parse_program(text)) {
    result = run_transformation(rc, p.definite, p.goals, config);
  }
};

std::string dump(const RunRig& r) {
  std::string out;
  for (int32_t id : r.result.transformed)
    out += print_clause(r.p.store.get(id), r.p.ctx) + "\n";
  return out;
}

}  // namespace

TEST(Transformation, ReverseReachesTheKnownBasicClauseSet) {
  RunRig r(kReverseProgram);
  ASSERT_EQ(r.result.status, RunStatus::Success);
  EXPECT_EQ(r.result.iterations, 3);
  ASSERT_EQ(r.result.transformed.size(), 7u) << dump(r);

  for (int32_t id : r.result.transformed) {
    const Clause& c = r.p.store.get(id);
    EXPECT_TRUE(c.has_basic_types(r.p.ctx)) << print_clause(c, r.p.ctx);
    EXPECT_FALSE(c.mark) << print_clause(c, r.p.ctx);
    EXPECT_TRUE(c.is_normalized(r.p.ctx)) << print_clause(c, r.p.ctx);
  }

  std::vector<Clause> want = expected_reverse_output(r.p.ctx);
  std::vector<const Clause*> got_ptrs, want_ptrs;
  for (int32_t id : r.result.transformed)
    got_ptrs.push_back(&r.p.store.get(id));
  for (const Clause& c : want) want_ptrs.push_back(&c);
  EXPECT_TRUE(clause_set_variant_equal(got_ptrs, want_ptrs, r.p.ctx))
      << dump(r);
}

TEST(Transformation, ReverseIntroducesThreeDefinitions) {
  RunRig r(kReverseProgram);
  ASSERT_EQ(r.result.status, RunStatus::Success);
  ASSERT_EQ(r.result.defs.size(), 3u);

  std::vector<std::string> names;
  for (int32_t id : r.result.defs)
    names.push_back(
        r.p.ctx.sig.pred(r.p.store.get(id).head->pred).name);
  EXPECT_EQ(names, (std::vector<std::string>{"new", "new_1", "diff"}));

  // The difference definition is introduced once and reused for the
  // second replacement.
  ASSERT_EQ(r.result.diff_defs.size(), 1u);
  const Clause& dd = r.p.store.get(r.result.diff_defs[0]);
  const PredDecl& decl = r.p.ctx.sig.pred(dd.head->pred);
  EXPECT_EQ(decl.name, "diff");
  ASSERT_EQ(decl.modes.size(), 3u);
  EXPECT_EQ(decl.modes[0], Mode::In);
  EXPECT_EQ(decl.modes[1], Mode::In);
  EXPECT_EQ(decl.modes[2], Mode::Out);
  // diff(X, N1, N2) :- reverse-shaped body over one list input and the
  // two measured outputs; all three head arguments are variables.
  for (const Term& t : dd.head->args) EXPECT_TRUE(t.is_var());
}

TEST(Transformation, ReverseLevelsAndLedgerAreCoherent) {
  RunRig r(kReverseProgram);
  ASSERT_EQ(r.result.status, RunStatus::Success);
  EXPECT_TRUE(r.levels.solve().has_value());
  EXPECT_TRUE(r.ledger.audit_fold_definitions_unfolded().ok);

  std::set<int32_t> roots(r.p.definite.begin(), r.p.definite.end());
  roots.insert(r.p.goals.begin(), r.p.goals.end());
  for (int32_t id : r.result.defs) roots.insert(id);
  std::set<int32_t> finals(r.result.transformed.begin(),
                           r.result.transformed.end());
  EXPECT_TRUE(r.ledger.audit_connected(roots, finals));

  // Every definition was unfolded with the discharge tag at least once.
  std::set<int32_t> discharged;
  for (const Step& s : r.ledger.steps())
    if (s.kind == StepKind::Unfold && s.u_discharge)
      discharged.insert(s.clause_in);
  for (int32_t id : r.result.defs) EXPECT_TRUE(discharged.count(id)) << id;
}

TEST(Transformation, WithoutDifferencePredicatesReverseDiverges) {
  AlgoConfig config;
  config.use_diff = false;
  config.max_iterations = 20;
  RunRig r(kReverseProgram, config);
  EXPECT_EQ(r.result.status, RunStatus::IterationLimit);
}

TEST(Transformation, IterationBudgetIsRespected) {
  AlgoConfig config;
  config.max_iterations = 1;
  RunRig r(kReverseProgram, config);
  EXPECT_EQ(r.result.status, RunStatus::IterationLimit);
  EXPECT_LE(r.result.iterations, 1);
}

TEST(Transformation, BasicInputsPassThroughUntouched) {
  RunRig r(R"(
:- pred sum(int, int).
:- mode sum(in, out).
sum(N, S) :- N = 0, S = 0.
sum(N, S) :- N = M+1, S = T+N, sum(M, T).
false :- S < N, N >= 0, sum(N, S).
)");
  ASSERT_EQ(r.result.status, RunStatus::Success);
  ASSERT_EQ(r.result.transformed.size(), 1u);
  EXPECT_TRUE(r.result.defs.empty());
  const Clause& g = r.p.store.get(r.result.transformed[0]);
  EXPECT_TRUE(g.is_goal());
  ASSERT_EQ(g.body.size(), 1u);
  EXPECT_EQ(g.body[0].pred, pred_id(r.p.ctx, "sum"));
}

TEST(Transformation, SingleCallGoalsNeedNoDifferencePredicate) {
  RunRig r(R"(
:- adt list = nil | cons(int, list).
:- pred len(list, int).
:- mode len(in, out).
:- total_functional len/2.
false :- N < 0, len(Xs, N).
len([], 0).
len([H|T], N) :- N = M+1, len(T, M).
)");
  ASSERT_EQ(r.result.status, RunStatus::Success);
  EXPECT_TRUE(r.result.diff_defs.empty());
  for (int32_t id : r.result.transformed) {
    const Clause& c = r.p.store.get(id);
    EXPECT_TRUE(c.has_basic_types(r.p.ctx)) << print_clause(c, r.p.ctx);
    EXPECT_FALSE(c.mark);
  }
  EXPECT_TRUE(r.levels.solve().has_value());
}

TEST(Transformation, TwoMeasuresOverOneTraversalTerminate) {
  // Sum and length of the same list: folding shares one definition with
  // two outputs; no difference predicate is required.
  RunRig r(R"(
:- adt list = nil | cons(int, list).
:- pred len(list, int).
:- mode len(in, out).
:- total_functional len/2.
:- pred sum(list, int).
:- mode sum(in, out).
:- total_functional sum/2.
false :- S > 3*N, N = 0, len(Xs, N), sum(Xs, S).
len([], 0).
len([H|T], N) :- N = M+1, len(T, M).
sum([], 0).
sum([H|T], S) :- S = R+H, sum(T, R).
)");
  ASSERT_EQ(r.result.status, RunStatus::Success);
  for (int32_t id : r.result.transformed)
    EXPECT_TRUE(r.p.store.get(id).has_basic_types(r.p.ctx))
        << print_clause(r.p.store.get(id), r.p.ctx);
  EXPECT_TRUE(r.ledger.audit_fold_definitions_unfolded().ok);
}
