#include "shbm/subtree_solver.hpp"

#include "shbm/errors.hpp"
#include "shbm/oracle.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <string>

namespace shbm {

BMatching solve_subtree(const HypergraphInstance& inst, const TreeWitness& tree, VertexId root,
                        const SubtreeSolveOptions& opts) {
    for (VertexId v = 0; v < inst.n_vertices; ++v)
        if (inst.capacities[v] != 1)
            throw ValidationError("solve_subtree: capacity of vertex " + std::to_string(v) +
                                  " is not 1 (matching case only)");
    CertificateCheck check = verify_certificate(inst, ClassCertificate(tree));
    if (!check.ok) throw ValidationError("solve_subtree: " + check.violation);
    if (root < 0 || root >= inst.n_vertices)
        throw ValidationError("solve_subtree: root out of range");

    // Depths from the requested root; the witness tree is undirected here.
    std::vector<std::vector<VertexId>> adjacency(inst.n_vertices);
    for (VertexId v = 0; v < inst.n_vertices; ++v)
        if (tree.parent[v] != -1) {
            adjacency[v].push_back(tree.parent[v]);
            adjacency[tree.parent[v]].push_back(v);
        }
    std::vector<int> depth(inst.n_vertices, -1);
    std::deque<VertexId> queue{root};
    depth[root] = 0;
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        for (VertexId u : adjacency[v])
            if (depth[u] < 0) {
                depth[u] = depth[v] + 1;
                queue.push_back(u);
            }
    }

    const int m = inst.edge_count();
    std::vector<VertexId> top(m);
    std::vector<int> dist(m);
    for (EdgeId e = 0; e < m; ++e) {
        VertexId best = inst.edges[e].front();
        for (VertexId v : inst.edges[e])
            if (depth[v] < depth[best]) best = v;
        top[e] = best;
        dist[e] = depth[best];
    }

    // Selection order: farthest top first, lowest id on ties. Deleted edges
    // are skipped, which matches re-evaluating the argmax each level.
    std::vector<EdgeId> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
        if (dist[a] != dist[b]) return dist[a] > dist[b];
        return a < b;
    });

    std::vector<char> deleted(m, 0);
    std::vector<std::pair<EdgeId, VertexId>> frames; // (picked edge, its top)
    for (EdgeId f : order) {
        if (deleted[f]) continue;
        VertexId rf = top[f];
        if (opts.debug_invariants) {
            // Every surviving edge intersecting f must contain r_f.
            for (EdgeId e = 0; e < m; ++e) {
                if (deleted[e] || e == f) continue;
                const auto& a = inst.edges[e];
                const auto& b = inst.edges[f];
                bool intersects = false;
                std::size_t i = 0, j = 0;
                while (i < a.size() && j < b.size()) {
                    if (a[i] == b[j]) {
                        intersects = true;
                        break;
                    }
                    a[i] < b[j] ? ++i : ++j;
                }
                if (intersects && !std::binary_search(a.begin(), a.end(), rf))
                    throw InternalError("subtree selection invariant: intersecting edge misses the top");
            }
        }
        deleted[f] = 1;
        for (EdgeId e : inst.incident[rf])
            if (!deleted[e] && inst.prefers(rf, f, e)) deleted[e] = 1;
        frames.emplace_back(f, rf);
    }

    // Unwind: add each picked edge back iff its top is still uncovered.
    BMatching matching = empty_matching(inst);
    for (auto it = frames.rbegin(); it != frames.rend(); ++it) {
        auto [f, rf] = *it;
        if (matching.loads[rf] == 0) {
            matching.add(inst, f);
            if (opts.debug_invariants && !is_feasible(inst, matching))
                throw InternalError("subtree unwind produced an infeasible matching");
        }
    }
    return matching;
}

} // namespace shbm
