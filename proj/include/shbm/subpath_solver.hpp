#ifndef SHBM_SUBPATH_SOLVER_HPP
#define SHBM_SUBPATH_SOLVER_HPP

#include "shbm/certificates.hpp"
#include "shbm/hypergraph.hpp"

#include <cstddef>
#include <vector>

namespace shbm {

struct SubpathSolveOptions {
    bool debug_invariants = false;
    // Hard cap on the DP state-set size per step.
    std::size_t state_cap = 4'000'000;
};

struct SubpathResult {
    bool exists = false; // false: no complete entry survived ("none exists")
    BMatching matching;
    Weight weight = 0;
    std::size_t max_state_set = 0; // largest |S_i| seen, for the bound check
};

// Edge permutation with non-decreasing endpoints l(e) = max position of a
// vertex of e; ties by smaller leftmost position, then edge id.
std::vector<EdgeId> order_edges_by_endpoint(const HypergraphInstance& inst,
                                            const PathOrdering& ordering);

// DP trace for the representative-set tests: the per-step state sets.
struct SubpathDpEntrySnapshot {
    std::vector<EdgeId> strategy;        // per window position; kNoEdge = unsaturated plan
    std::vector<long long> window_loads; // equivalence signature
    Weight weight = 0;
    std::vector<EdgeId> members;         // edge ids of the (sub)instance solved
};

struct SubpathDpTrace {
    // The reduced instance the DP actually ran on (edges incident to
    // 0-capacity vertices stripped), plus its ordering data.
    HypergraphInstance reduced;
    PathOrdering reduced_ordering;
    std::vector<EdgeId> edge_order;                 // reduced edge ids, DP order
    std::vector<std::pair<int, int>> windows;       // inclusive [lo, hi] per step
    std::vector<std::vector<SubpathDpEntrySnapshot>> states; // S_i per step
    std::vector<EdgeId> reduced_to_original;        // member id mapping
};

// Maximum-weight stable b-matching over a subpath hypergraph via the
// strategy/representative-set DP. The certificate is verified first.
SubpathResult solve_subpath_maxw(const HypergraphInstance& inst, const PathOrdering& ordering,
                                 const SubpathSolveOptions& opts = {},
                                 SubpathDpTrace* trace = nullptr);

struct SideConstraints {
    std::vector<EdgeId> forced;
    std::vector<EdgeId> forbidden;
    std::vector<VertexId> saturate;
    std::vector<VertexId> leave_unsaturated;
};

// Max-weight stable b-matching among those containing every forced edge, no
// forbidden edge, and saturating / leaving unsaturated the requested
// vertices. Forced/forbidden are realized by a dominating weight shift,
// saturation by a private dummy edge ranked last by its vertex.
SubpathResult solve_with_side_constraints(const HypergraphInstance& inst,
                                          const PathOrdering& ordering,
                                          const SideConstraints& constraints,
                                          const SubpathSolveOptions& opts = {});

} // namespace shbm

#endif
