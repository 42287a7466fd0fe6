#ifndef SHBM_BIPARTITE_HPP
#define SHBM_BIPARTITE_HPP

#include "shbm/hypergraph.hpp"

#include <vector>

namespace shbm {

// Bipartite instance = hypergraph with 2-vertex edges plus a side marker per
// vertex. Preferences/capacities/weights live on the underlying instance, so
// the stability oracle applies unchanged.
struct BipartiteView {
    const HypergraphInstance* inst = nullptr;
    std::vector<int> side; // 0 or 1 per vertex

    const HypergraphInstance& instance() const { return *inst; }
};

// Validates sides and edge shape (each edge joins the two sides).
BipartiteView make_bipartite_view(const HypergraphInstance& inst, std::vector<int> side);

// Many-to-many deferred acceptance over edge ids; proposer-optimal stable
// b-matching for the proposing side.
BMatching deferred_acceptance(const BipartiteView& view, int proposing_side);

// True iff the two stable b-matchings give every vertex the same load.
// Rejects unstable input.
bool rural_hospitals_check(const BipartiteView& view, const BMatching& m1, const BMatching& m2);

enum class MaxwMethod {
    Auto,      // enumeration when small, rotations when many-to-one
    Enumerate, // exact brute force within the oracle budget
    Rotations, // DA + rotation poset + min-cut closure (many-to-one instances)
};

struct BipartiteMaxwResult {
    BMatching matching;
    Weight weight = 0;
};

// Maximum-weight stable b-matching. A stable b-matching always exists in the
// bipartite case, so the result is unconditional.
BipartiteMaxwResult maxw_stable(const BipartiteView& view, MaxwMethod method = MaxwMethod::Auto);

} // namespace shbm

#endif
