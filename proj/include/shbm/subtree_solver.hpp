#ifndef SHBM_SUBTREE_SOLVER_HPP
#define SHBM_SUBTREE_SOLVER_HPP

#include "shbm/certificates.hpp"
#include "shbm/hypergraph.hpp"

namespace shbm {

struct SubtreeSolveOptions {
    bool debug_invariants = false;
};

// Stable matching (b == 1) for subtree hypergraphs: repeatedly take the edge
// whose top vertex is farthest from the root, discard the edges its top
// prefers less, then add back in reverse order wherever the top is still
// uncovered. Rejects capacities other than 1 and invalid tree witnesses.
BMatching solve_subtree(const HypergraphInstance& inst, const TreeWitness& tree, VertexId root,
                        const SubtreeSolveOptions& opts = {});

} // namespace shbm

#endif
