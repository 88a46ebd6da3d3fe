#pragma once

// External Horn-solver integration and the final decision procedure.
//
// The transformed, ADT-free clauses are rendered to SMT-LIB and handed
// to a user-configured command. Its verdict is then filtered: an unsat
// answer is only reported when the refutation cannot touch clauses whose
// folding weakened the system, and when every difference predicate the
// refutation may rely on is provably output-functional.

#include <cstdint>
#include <string>
#include <vector>

#include "chcadt/algorithm.hpp"
#include "chcadt/parser.hpp"

namespace chcadt {

struct SolverConfig {
  // Shell command; every "{file}" is replaced by the path of the SMT-LIB
  // script (appended when the placeholder is absent). Empty = no solver.
  std::string command;
  int timeout_secs = 300;
};

enum class SolverVerdict : uint8_t { Sat, Unsat, Unknown };

struct SolverResult {
  SolverVerdict verdict = SolverVerdict::Unknown;
  // Clause ids mentioned as cl<N> after an unsat verdict; empty means the
  // solver did not narrow the refutation down.
  std::vector<int32_t> cex_clauses;
  bool timed_out = false;
};

// Writes the script to a temporary file, runs the command under a
// wall-clock timeout, and parses the first output line (sat | unsat |
// unknown) plus any cl<N> lines that follow an unsat verdict.
SolverResult run_horn_solver(const std::string& smtlib,
                             const SolverConfig& cfg);

// True when the solver certifies that `pred` maps equal inputs to equal
// outputs in the transformed system: its defining clauses (transitively)
// are asserted together with a goal demanding two disagreeing result
// tuples, and the system must come back satisfiable.
bool check_output_functional(const Context& ctx, const ClauseSet& store,
                             const std::vector<int32_t>& transformed,
                             int32_t pred, const SolverConfig& cfg);

struct Decision {
  enum class Kind : uint8_t { Sat, Unsat, Unknown };
  Kind kind = Kind::Unknown;
  std::string reason;  // populated when kind == Unknown
};

// The output clauses plus, for every predicate they call without
// defining, that predicate's clauses from `program`, to a fixpoint.
// Predicates defined nowhere stay unconstrained.
std::vector<int32_t> emission_closure(const ClauseSet& store,
                                      const std::vector<int32_t>& transformed,
                                      const std::vector<int32_t>& program);

// Decides the transformed system. `program` holds the store ids of the
// input's definite clauses; the solver sees the emission closure of the
// transformed clauses over it.
Decision decide_transformed(const Context& ctx, const ClauseSet& store,
                            const RunResult& run,
                            const std::vector<int32_t>& program,
                            const SolverConfig& cfg);

struct DecideOutcome {
  Decision decision;
  RunResult run;
};

// Full pipeline on a parsed program: transform away the ADT arguments,
// then consult the solver on the result. When `ledger` is given the
// transformation steps are recorded there.
DecideOutcome decide_program(Program& prog, const AlgoConfig& acfg,
                             const SolverConfig& scfg,
                             Ledger* ledger = nullptr);

}  // namespace chcadt
