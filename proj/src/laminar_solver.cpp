#include "shbm/laminar_solver.hpp"

#include "shbm/certificates.hpp"
#include "shbm/errors.hpp"
#include "shbm/oracle.hpp"

#include <algorithm>
#include <string>

namespace shbm {

namespace {

bool strict_subset(const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
    if (a.size() >= b.size()) return false;
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool blocks(const HypergraphInstance& inst, const BMatching& m, EdgeId e) {
    for (VertexId v : inst.edges[e])
        if (is_dominated_at(inst, m, e, v)) return false;
    return true;
}

// Rank of the worst member edge at a saturated vertex (larger = worse).
int worst_member_rank(const HypergraphInstance& inst, const BMatching& m, VertexId v) {
    int worst = -1;
    for (EdgeId f : m.members) {
        int rank = inst.pref_rank[v][f];
        if (rank > worst) worst = rank;
    }
    return worst;
}

} // namespace

BMatching solve_laminar(const HypergraphInstance& inst, const LaminarSolveOptions& opts) {
    if (auto crossing = is_laminar(inst))
        throw ValidationError("solve_laminar: not laminar, edges " +
                              std::to_string(crossing->first) + " and " +
                              std::to_string(crossing->second) + " cross");

    const int m = inst.edge_count();
    BMatching matching = empty_matching(inst);
    std::vector<char> checked(m, 0);
    int iterations = 0;

    // Debug bookkeeping for saturation monotonicity.
    std::vector<long long> prev_loads = matching.loads;
    std::vector<int> prev_worst_rank(inst.n_vertices, -1);

    for (int round = 0; round < m; ++round) {
        ++iterations;
        // Inclusion-wise minimal unchecked edge, lowest id on ties.
        EdgeId picked = kNoEdge;
        for (EdgeId e = 0; e < m && picked == kNoEdge; ++e) {
            if (checked[e]) continue;
            bool minimal = true;
            for (EdgeId f = 0; f < m; ++f) {
                if (f == e || checked[f]) continue;
                if (strict_subset(inst.edges[f], inst.edges[e])) {
                    minimal = false;
                    break;
                }
            }
            if (minimal) picked = e;
        }
        checked[picked] = 1;

        if (blocks(inst, matching, picked)) {
            matching.add(inst, picked);
            // Worst member edge at every oversaturated vertex.
            std::vector<EdgeId> evict_pool;
            for (VertexId v : inst.edges[picked]) {
                if (matching.loads[v] <= inst.capacities[v]) continue;
                EdgeId worst = kNoEdge;
                int worst_rank = -1;
                for (EdgeId f : matching.members) {
                    int rank = inst.pref_rank[v][f];
                    if (rank > worst_rank) {
                        worst_rank = rank;
                        worst = f;
                    }
                }
                evict_pool.push_back(worst);
            }
            std::sort(evict_pool.begin(), evict_pool.end());
            evict_pool.erase(std::unique(evict_pool.begin(), evict_pool.end()), evict_pool.end());

            // Inclusion-wise maximal members; parallel copies collapse to the
            // lowest-id representative so each vertex loses at most one edge.
            std::vector<EdgeId> evicted;
            for (EdgeId e : evict_pool) {
                bool keep = true;
                for (EdgeId f : evict_pool) {
                    if (f == e) continue;
                    if (strict_subset(inst.edges[e], inst.edges[f]) ||
                        (inst.edges[e] == inst.edges[f] && f < e)) {
                        keep = false;
                        break;
                    }
                }
                if (keep) evicted.push_back(e);
            }

            if (opts.debug_invariants) {
                for (std::size_t i = 0; i < evicted.size(); ++i) {
                    if (evicted[i] == picked)
                        throw InternalError("laminar eviction set contains the picked edge");
                    if (!std::includes(inst.edges[picked].begin(), inst.edges[picked].end(),
                                       inst.edges[evicted[i]].begin(), inst.edges[evicted[i]].end()))
                        throw InternalError("laminar eviction member is not inside the picked edge");
                    for (std::size_t j = i + 1; j < evicted.size(); ++j) {
                        const auto& a = inst.edges[evicted[i]];
                        const auto& b = inst.edges[evicted[j]];
                        std::vector<VertexId> common;
                        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                                              std::back_inserter(common));
                        if (!common.empty())
                            throw InternalError("laminar eviction set is not pairwise disjoint");
                    }
                }
            }

            for (EdgeId e : evicted) matching.remove(inst, e);
        }

        if (opts.debug_invariants) {
            if (!is_feasible(inst, matching))
                throw InternalError("laminar solver produced an infeasible matching");
            for (VertexId v = 0; v < inst.n_vertices; ++v) {
                if (matching.loads[v] < prev_loads[v])
                    throw InternalError("laminar saturation monotonicity: load decreased at vertex " +
                                        std::to_string(v));
                if (prev_loads[v] == inst.capacities[v] && prev_worst_rank[v] >= 0) {
                    int now = worst_member_rank(inst, matching, v);
                    if (now > prev_worst_rank[v])
                        throw InternalError("laminar saturation monotonicity: worst rank worsened at vertex " +
                                            std::to_string(v));
                }
                prev_loads[v] = matching.loads[v];
                prev_worst_rank[v] = matching.loads[v] == inst.capacities[v]
                                         ? worst_member_rank(inst, matching, v)
                                         : -1;
            }
        }
    }

    if (opts.debug_invariants && iterations != m)
        throw InternalError("laminar solver iteration count mismatch");
    return matching;
}

} // namespace shbm
