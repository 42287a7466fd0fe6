#ifndef SHBM_HYPERGRAPH_HPP
#define SHBM_HYPERGRAPH_HPP

#include <string>
#include <vector>

namespace shbm {

using VertexId = int;
using EdgeId = int;
using Weight = long long;
using Capacity = long long;

// Sentinel for "no edge" (the unsaturated threshold in strategies).
inline constexpr EdgeId kNoEdge = -1;

struct ValidationReport {
    std::vector<std::string> issues;

    bool ok() const { return issues.empty(); }
    std::string to_string() const;
};

// Instance of stable hypergraph b-matching. Vertices are 0..n_vertices-1 and
// an edge id is its index into `edges`. Parallel edges (distinct ids, same
// vertex set) are allowed; all solver output refers to edge ids.
struct HypergraphInstance {
    int n_vertices = 0;
    std::vector<std::vector<VertexId>> edges; // each sorted, duplicate-free
    std::vector<Capacity> capacities;         // b(v) >= 0
    std::vector<std::vector<EdgeId>> preferences; // best first, exactly the incident edges
    std::vector<Weight> weights;              // empty = unweighted (all zero)
    std::string class_hint;                   // "", "laminar", "subpath", "subtree", "uda", "general"

    // Derived lookup tables, filled by prepare().
    std::vector<std::vector<EdgeId>> incident; // per vertex, ascending edge id
    std::vector<std::vector<int>> pref_rank;   // pref_rank[v][e] = rank (0 best) or -1
    bool prepared = false;

    int edge_count() const { return static_cast<int>(edges.size()); }

    bool incident_to(VertexId v, EdgeId e) const { return pref_rank[v][e] >= 0; }
    int rank_of(VertexId v, EdgeId e) const { return pref_rank[v][e]; }
    // True iff v strictly prefers edge a to edge b (both must be incident to v).
    bool prefers(VertexId v, EdgeId a, EdgeId b) const {
        return pref_rank[v][a] < pref_rank[v][b];
    }
    Weight weight_of(EdgeId e) const { return weights.empty() ? 0 : weights[e]; }
    Weight total_abs_weight() const;
};

// Reports every violated invariant (bad vertex ids, unsorted/duplicate edge
// members, incomplete or non-incident preference lists, negative capacities,
// weight-sum overflow risk). Empty report = instance accepted.
ValidationReport validate(const HypergraphInstance& inst);

// Builds the incidence and rank tables. Throws ValidationError when the
// instance does not validate. Instances are immutable once prepared.
void prepare(HypergraphInstance& inst);

struct DerivedParams {
    int max_edge_size = 0;      // l_max
    int max_degree = 0;         // Delta
    Capacity max_capacity = 0;  // b_max
    Weight max_abs_weight = 0;  // omega
};

DerivedParams derived_params(const HypergraphInstance& inst);

// Edge subset plus per-vertex load counts, kept in sync by add/remove.
struct BMatching {
    std::vector<EdgeId> members; // sorted ascending
    std::vector<long long> loads;

    bool contains(EdgeId e) const;
    void add(const HypergraphInstance& inst, EdgeId e);
    void remove(const HypergraphInstance& inst, EdgeId e);
};

BMatching empty_matching(const HypergraphInstance& inst);
// Builds a matching from arbitrary edge ids (sorted/deduped), recomputing loads.
BMatching matching_from_edges(const HypergraphInstance& inst, std::vector<EdgeId> ids);
bool is_feasible(const HypergraphInstance& inst, const BMatching& m);

} // namespace shbm

#endif
