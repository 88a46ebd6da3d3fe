#pragma once

#include <cstdint>
#include <vector>

#include "chcadt/rules.hpp"

namespace chcadt {

struct AlgoConfig {
  int max_iterations = 100;
  // When off, the differential-replacement case is skipped and partial
  // overlaps fall through to projection definitions.
  bool use_diff = true;
};

enum class RunStatus : uint8_t { Success, IterationLimit, LevelUnsat };

struct RunResult {
  RunStatus status = RunStatus::Success;
  std::vector<int32_t> transformed;  // ADT-free output clauses (store ids)
  std::vector<int32_t> defs;         // definitions introduced, in order
  std::vector<int32_t> diff_defs;    // subset of defs: difference definitions
  int iterations = 0;
};

// Transforms the goal clauses of a program with ADT arguments into
// clauses over basic types only, by introducing definitions whose heads
// carry the basic variables, folding with them, unfolding the
// definitions against the program, and replacing recurring functional
// calls through difference predicates.
//
// `program` holds the store ids of the definite source clauses used for
// unfolding; `goals` the goal clauses to transform.
RunResult run_transformation(RuleContext& rc,
                             const std::vector<int32_t>& program,
                             const std::vector<int32_t>& goals,
                             const AlgoConfig& config = {});

}  // namespace chcadt
