// Micro and end-to-end benchmarks for the transformation pipeline.

#include <benchmark/benchmark.h>

#include <string>

#include "chcadt/algorithm.hpp"
#include "chcadt/constraint.hpp"
#include "chcadt/parser.hpp"

namespace {

const std::string kReverse = R"(
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

void BM_ParseReverse(benchmark::State& state) {
  for (auto _ : state) {
    chcadt::Program p = chcadt::parse_program(kReverse);
    benchmark::DoNotOptimize(p.store.size());
  }
}
BENCHMARK(BM_ParseReverse);

void BM_TransformReverse(benchmark::State& state) {
  for (auto _ : state) {
    chcadt::Program p = chcadt::parse_program(kReverse);
    chcadt::LevelStore levels;
    chcadt::Ledger ledger;
    chcadt::RuleContext rc{p.ctx, p.store, levels, ledger};
    chcadt::RunResult run =
        chcadt::run_transformation(rc, p.definite, p.goals, {});
    benchmark::DoNotOptimize(run.transformed.size());
  }
}
BENCHMARK(BM_TransformReverse)->Unit(benchmark::kMillisecond);

chcadt::Constraint medium_constraint() {
  using chcadt::CmpOp;
  using chcadt::LinearExpr;
  chcadt::Constraint c;
  auto var = LinearExpr::variable;
  auto lit = LinearExpr::literal;
  for (int i = 0; i < 5; ++i) {
    LinearExpr lhs = var(i);
    lhs -= var((i + 1) % 6);
    c.add(chcadt::make_atom(CmpOp::Le, lhs, lit(3 - i)));
  }
  LinearExpr sum = var(0);
  for (int i = 1; i < 6; ++i) sum += var(i);
  c.add(chcadt::make_atom(CmpOp::Ge, sum, lit(-4)));
  c.add(chcadt::make_atom(CmpOp::Ne, var(2), lit(1)));
  return c;
}

void BM_Satisfiability(benchmark::State& state) {
  chcadt::Constraint c = medium_constraint();
  for (auto _ : state)
    benchmark::DoNotOptimize(chcadt::is_satisfiable(c));
}
BENCHMARK(BM_Satisfiability);

void BM_Widen(benchmark::State& state) {
  using chcadt::CmpOp;
  using chcadt::LinearExpr;
  chcadt::Constraint a = medium_constraint();
  chcadt::Constraint b = medium_constraint();
  b.add(chcadt::make_atom(CmpOp::Le, LinearExpr::variable(3),
                          LinearExpr::literal(7)));
  for (auto _ : state)
    benchmark::DoNotOptimize(chcadt::widen(a, b).atoms().size());
}
BENCHMARK(BM_Widen);

}  // namespace

BENCHMARK_MAIN();
