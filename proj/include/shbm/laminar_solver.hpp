#ifndef SHBM_LAMINAR_SOLVER_HPP
#define SHBM_LAMINAR_SOLVER_HPP

#include "shbm/hypergraph.hpp"

namespace shbm {

struct LaminarSolveOptions {
    // Enables the per-iteration proof-obligation assertions (saturation
    // monotonicity, eviction-set structure, iteration count).
    bool debug_invariants = false;
};

// Stable b-matching for laminar hypergraphs: repeatedly check an
// inclusion-minimal unchecked edge, add it when it blocks, and evict the
// inclusion-maximal family of worst member edges at oversaturated vertices.
// Rejects non-laminar input (names the crossing pair).
BMatching solve_laminar(const HypergraphInstance& inst, const LaminarSolveOptions& opts = {});

} // namespace shbm

#endif
