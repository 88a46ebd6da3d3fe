#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chcadt/atom.hpp"
#include "chcadt/term.hpp"
#include "chcadt/types.hpp"

namespace chcadt {

struct VarPartition {
  std::vector<int32_t> basic;
  std::vector<int32_t> adt;
};

// Distinct variables of the atoms, in occurrence order, split by type.
VarPartition partition_vars(const std::vector<Atom>& atoms, const Context& ctx);

// Partition of a conjunction into maximal groups connected through shared
// ADT variables. Each group is a list of indices into `atoms`, in the
// original order; groups are listed by first atom occurrence. Atoms with
// no ADT arguments form singleton groups.
std::vector<std::vector<size_t>> sharing_blocks(const std::vector<Atom>& atoms,
                                                const Context& ctx);

// Combined input/output signature of a conjunction treated as one
// relation from inputs to outputs. Defined when every predicate is
// declared total and functional, the per-atom output variable sets are
// pairwise disjoint, and the atoms admit an order where each atom reads
// only from the inputs or from outputs of earlier atoms. Inputs are the
// variables read from outside the conjunction.
struct ComposedIo {
  std::vector<int32_t> inputs;
  std::vector<int32_t> outputs;
};
std::optional<ComposedIo> compose_io(const std::vector<Atom>& atoms,
                                     const Context& ctx);

// ADT variables the conjunction consumes but never produces: they occur
// in some input position and in no output position.
std::vector<int32_t> source_adt_vars(const std::vector<Atom>& atoms,
                                     const Context& ctx);

}  // namespace chcadt
