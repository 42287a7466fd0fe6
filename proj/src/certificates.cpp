#include "shbm/certificates.hpp"

#include "shbm/errors.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

namespace shbm {

namespace {

// a \ b nonempty, assuming both sorted.
bool has_private_vertex(const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size()) {
        if (j == b.size() || a[i] < b[j]) return true;
        if (a[i] == b[j]) {
            ++i;
            ++j;
        } else {
            ++j;
        }
    }
    return false;
}

bool subset_of(const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
    return !has_private_vertex(a, b);
}

CertificateCheck fail(std::string text) {
    CertificateCheck check;
    check.ok = false;
    check.violation = std::move(text);
    return check;
}

} // namespace

std::string certificate_class(const ClassCertificate& cert) {
    if (std::holds_alternative<PathOrdering>(cert)) return "subpath";
    if (std::holds_alternative<TreeWitness>(cert)) return "subtree";
    if (std::holds_alternative<UdaPartition>(cert)) return "uda";
    return "laminar";
}

std::optional<std::pair<EdgeId, EdgeId>> is_laminar(const HypergraphInstance& inst) {
    const int m = inst.edge_count();
    for (EdgeId e1 = 0; e1 < m; ++e1) {
        for (EdgeId e2 = e1 + 1; e2 < m; ++e2) {
            const auto& a = inst.edges[e1];
            const auto& b = inst.edges[e2];
            // Crossing iff both differences are nonempty and they intersect;
            // two-sided difference alone already implies non-nestedness, and
            // disjoint pairs are allowed, so also require a common vertex.
            if (!has_private_vertex(a, b) || !has_private_vertex(b, a)) continue;
            bool intersect = false;
            std::size_t i = 0, j = 0;
            while (i < a.size() && j < b.size()) {
                if (a[i] == b[j]) {
                    intersect = true;
                    break;
                }
                if (a[i] < b[j])
                    ++i;
                else
                    ++j;
            }
            if (intersect) return std::make_pair(e1, e2);
        }
    }
    return std::nullopt;
}

namespace {

// One level of the List procedure over an explicit edge-id set.
void list_vertices(const HypergraphInstance& inst, std::vector<VertexId> verts,
                   std::vector<EdgeId> edge_ids, std::vector<VertexId>& out) {
    if (edge_ids.empty()) {
        // No structure left; emit in ascending id.
        out.insert(out.end(), verts.begin(), verts.end());
        return;
    }
    // Maximal edge, lowest id among maximal.
    EdgeId emax = kNoEdge;
    for (EdgeId e : edge_ids) {
        bool maximal = true;
        for (EdgeId f : edge_ids) {
            if (f == e) continue;
            if (subset_of(inst.edges[e], inst.edges[f]) &&
                !subset_of(inst.edges[f], inst.edges[e])) {
                maximal = false;
                break;
            }
        }
        if (maximal) {
            emax = e;
            break; // edge_ids ascending, so first maximal = lowest id
        }
    }
    const auto& top = inst.edges[emax];

    // A vertex belongs to emax if no remaining proper sub-edge contains it.
    std::vector<VertexId> belonging, inner;
    for (VertexId v : top) {
        bool covered = false;
        for (EdgeId f : edge_ids) {
            if (f == emax) continue;
            const auto& fv = inst.edges[f];
            if (subset_of(fv, top) && !subset_of(top, fv) &&
                std::binary_search(fv.begin(), fv.end(), v)) {
                covered = true;
                break;
            }
        }
        (covered ? inner : belonging).push_back(v);
    }
    out.insert(out.end(), belonging.begin(), belonging.end());

    std::vector<EdgeId> inside, outside;
    for (EdgeId f : edge_ids) {
        if (f == emax) continue;
        if (subset_of(inst.edges[f], top)) {
            // Parallel copies of the maximal edge span the same block and are
            // intervals whenever it is; drop them with it.
            if (!subset_of(top, inst.edges[f])) inside.push_back(f);
        } else {
            outside.push_back(f);
        }
    }
    list_vertices(inst, std::move(inner), std::move(inside), out);

    std::vector<VertexId> rest;
    for (VertexId v : verts)
        if (!std::binary_search(top.begin(), top.end(), v)) rest.push_back(v);
    list_vertices(inst, std::move(rest), std::move(outside), out);
}

} // namespace

PathOrdering laminar_to_path_ordering(const HypergraphInstance& inst) {
    if (auto crossing = is_laminar(inst)) {
        throw ValidationError("laminar_to_path_ordering: edges " +
                              std::to_string(crossing->first) + " and " +
                              std::to_string(crossing->second) + " cross");
    }
    std::vector<VertexId> verts(inst.n_vertices);
    std::iota(verts.begin(), verts.end(), 0);
    std::vector<EdgeId> edge_ids(inst.edge_count());
    std::iota(edge_ids.begin(), edge_ids.end(), 0);
    PathOrdering ordering;
    ordering.order.reserve(inst.n_vertices);
    list_vertices(inst, std::move(verts), std::move(edge_ids), ordering.order);
    return ordering;
}

LaminarForest build_laminar_forest(const HypergraphInstance& inst) {
    if (auto crossing = is_laminar(inst)) {
        throw ValidationError("build_laminar_forest: edges " + std::to_string(crossing->first) +
                              " and " + std::to_string(crossing->second) + " cross");
    }
    const int m = inst.edge_count();
    LaminarForest forest;
    forest.parent.assign(m, kNoEdge);
    for (EdgeId e = 0; e < m; ++e) {
        EdgeId best = kNoEdge;
        for (EdgeId f = 0; f < m; ++f) {
            if (f == e) continue;
            if (!subset_of(inst.edges[e], inst.edges[f])) continue;
            if (!has_private_vertex(inst.edges[f], inst.edges[e])) continue; // needs strict superset
            if (best == kNoEdge || inst.edges[f].size() < inst.edges[best].size()) best = f;
        }
        forest.parent[e] = best;
    }
    return forest;
}

TreeWitness path_to_tree(const PathOrdering& ordering) {
    TreeWitness tree;
    tree.parent.assign(ordering.order.size(), -1);
    for (std::size_t i = 1; i < ordering.order.size(); ++i)
        tree.parent[ordering.order[i]] = ordering.order[i - 1];
    return tree;
}

namespace {

CertificateCheck verify_path_ordering(const HypergraphInstance& inst, const PathOrdering& cert) {
    const int n = inst.n_vertices;
    if (static_cast<int>(cert.order.size()) != n)
        return fail("path ordering has wrong length");
    std::vector<int> position(n, -1);
    for (int i = 0; i < n; ++i) {
        VertexId v = cert.order[i];
        if (v < 0 || v >= n || position[v] >= 0) return fail("path ordering is not a permutation");
        position[v] = i;
    }
    for (EdgeId e = 0; e < inst.edge_count(); ++e) {
        int lo = n, hi = -1;
        for (VertexId v : inst.edges[e]) {
            lo = std::min(lo, position[v]);
            hi = std::max(hi, position[v]);
        }
        if (hi - lo + 1 != static_cast<int>(inst.edges[e].size())) {
            std::ostringstream out;
            out << "edge " << e << " is not contiguous: spans positions " << lo << ".." << hi
                << " with " << inst.edges[e].size() << " vertices";
            return fail(out.str());
        }
    }
    return {};
}

CertificateCheck check_tree_shape(int n, const std::vector<VertexId>& parent,
                                  std::vector<std::vector<VertexId>>* adjacency_out) {
    if (static_cast<int>(parent.size()) != n) return fail("tree parent array has wrong length");
    int roots = 0;
    for (VertexId v = 0; v < n; ++v) {
        if (parent[v] == -1)
            ++roots;
        else if (parent[v] < 0 || parent[v] >= n || parent[v] == v)
            return fail("tree parent out of range at vertex " + std::to_string(v));
    }
    if (n > 0 && roots != 1) return fail("tree must have exactly one root");
    // Acyclic iff every vertex reaches the root.
    std::vector<int> state(n, 0);
    for (VertexId v = 0; v < n; ++v) {
        VertexId cur = v;
        std::vector<VertexId> trail;
        while (cur != -1 && state[cur] == 0) {
            state[cur] = 1;
            trail.push_back(cur);
            cur = parent[cur];
        }
        if (cur != -1 && state[cur] == 1)
            return fail("parent array contains a cycle through vertex " + std::to_string(cur));
        for (VertexId u : trail) state[u] = 2;
    }
    if (adjacency_out) {
        adjacency_out->assign(n, {});
        for (VertexId v = 0; v < n; ++v)
            if (parent[v] != -1) {
                (*adjacency_out)[v].push_back(parent[v]);
                (*adjacency_out)[parent[v]].push_back(v);
            }
    }
    return {};
}

CertificateCheck verify_tree_witness(const HypergraphInstance& inst, const TreeWitness& cert) {
    std::vector<std::vector<VertexId>> adjacency;
    CertificateCheck shape = check_tree_shape(inst.n_vertices, cert.parent, &adjacency);
    if (!shape.ok) return shape;
    // Every edge must induce a connected subgraph of the tree.
    std::vector<char> in_edge(inst.n_vertices, 0);
    for (EdgeId e = 0; e < inst.edge_count(); ++e) {
        const auto& verts = inst.edges[e];
        for (VertexId v : verts) in_edge[v] = 1;
        std::deque<VertexId> queue{verts.front()};
        std::vector<char> seen(inst.n_vertices, 0);
        seen[verts.front()] = 1;
        std::size_t reached = 0;
        while (!queue.empty()) {
            VertexId v = queue.front();
            queue.pop_front();
            ++reached;
            for (VertexId u : adjacency[v])
                if (in_edge[u] && !seen[u]) {
                    seen[u] = 1;
                    queue.push_back(u);
                }
        }
        for (VertexId v : verts) in_edge[v] = 0;
        if (reached != verts.size())
            return fail("edge " + std::to_string(e) + " does not induce a subtree");
    }
    return {};
}

CertificateCheck verify_uda_partition(const HypergraphInstance& inst, const UdaPartition& cert) {
    const int n = inst.n_vertices;
    if (static_cast<int>(cert.roles.size()) != n || static_cast<int>(cert.program_university.size()) != n)
        return fail("uda partition arrays have wrong length");
    for (VertexId v = 0; v < n; ++v) {
        const bool is_program = cert.roles[v] == UdaPartition::Role::Program;
        const VertexId u = cert.program_university[v];
        if (is_program) {
            if (u < 0 || u >= n || cert.roles[u] != UdaPartition::Role::University)
                return fail("program vertex " + std::to_string(v) + " lacks a university");
        } else if (u != -1) {
            return fail("non-program vertex " + std::to_string(v) + " maps to a university");
        }
        if (cert.roles[v] == UdaPartition::Role::Student && inst.capacities[v] != 1)
            return fail("student vertex " + std::to_string(v) + " must have capacity 1");
    }
    for (EdgeId e = 0; e < inst.edge_count(); ++e) {
        const auto& verts = inst.edges[e];
        if (verts.size() != 3)
            return fail("edge " + std::to_string(e) + " is not a triple");
        VertexId student = -1, university = -1, program = -1;
        for (VertexId v : verts) {
            switch (cert.roles[v]) {
                case UdaPartition::Role::Student: student = v; break;
                case UdaPartition::Role::University: university = v; break;
                case UdaPartition::Role::Program: program = v; break;
            }
        }
        if (student < 0 || university < 0 || program < 0)
            return fail("edge " + std::to_string(e) + " is not a student/university/program triple");
        if (cert.program_university[program] != university)
            return fail("edge " + std::to_string(e) + " pairs a program with a foreign university");
    }
    return {};
}

CertificateCheck verify_laminar_forest(const HypergraphInstance& inst, const LaminarForest& cert) {
    const int m = inst.edge_count();
    if (static_cast<int>(cert.parent.size()) != m) return fail("laminar forest has wrong length");
    for (EdgeId e = 0; e < m; ++e) {
        EdgeId p = cert.parent[e];
        if (p == kNoEdge) continue;
        if (p < 0 || p >= m || p == e) return fail("laminar parent out of range at edge " + std::to_string(e));
        if (!subset_of(inst.edges[e], inst.edges[p]))
            return fail("laminar parent of edge " + std::to_string(e) + " is not a superset");
    }
    // Acyclicity of the parent relation.
    std::vector<int> state(m, 0);
    for (EdgeId e = 0; e < m; ++e) {
        EdgeId cur = e;
        std::vector<EdgeId> trail;
        while (cur != kNoEdge && state[cur] == 0) {
            state[cur] = 1;
            trail.push_back(cur);
            cur = cert.parent[cur];
        }
        if (cur != kNoEdge && state[cur] == 1) return fail("laminar forest contains a cycle");
        for (EdgeId f : trail) state[f] = 2;
    }
    // A forest certifies laminarity only if the family actually is laminar.
    if (auto crossing = is_laminar(inst))
        return fail("edges " + std::to_string(crossing->first) + " and " +
                    std::to_string(crossing->second) + " cross");
    return {};
}

} // namespace

CertificateCheck verify_certificate(const HypergraphInstance& inst, const ClassCertificate& cert) {
    const std::string cls = certificate_class(cert);
    // Within the laminar < subpath < subtree chain any witness is admissible
    // (a laminar instance is also a subpath instance, and so on); only the
    // uda variant is incomparable with the chain.
    const auto chain = [](const std::string& name) {
        return name == "laminar" || name == "subpath" || name == "subtree";
    };
    const std::string& hint = inst.class_hint;
    if (!hint.empty() && hint != "general" && hint != cls && !(chain(hint) && chain(cls)))
        return fail("certificate variant '" + cls + "' does not match class_hint '" + hint + "'");
    if (const auto* path = std::get_if<PathOrdering>(&cert)) return verify_path_ordering(inst, *path);
    if (const auto* tree = std::get_if<TreeWitness>(&cert)) return verify_tree_witness(inst, *tree);
    if (const auto* uda = std::get_if<UdaPartition>(&cert)) return verify_uda_partition(inst, *uda);
    return verify_laminar_forest(inst, std::get<LaminarForest>(cert));
}

IntMatrix incidence_matrix(const HypergraphInstance& inst) {
    IntMatrix matrix(inst.n_vertices, std::vector<int>(inst.edge_count(), 0));
    for (EdgeId e = 0; e < inst.edge_count(); ++e)
        for (VertexId v : inst.edges[e]) matrix[v][e] = 1;
    return matrix;
}

NetworkRepresentation build_network_representation(const HypergraphInstance& inst,
                                                   const UdaPartition& partition) {
    CertificateCheck check = verify_uda_partition(inst, partition);
    if (!check.ok)
        throw ValidationError("build_network_representation: " + check.violation);

    const int n = inst.n_vertices;
    NetworkRepresentation rep;
    rep.n_nodes = n + 1;
    rep.hub = n;
    rep.tree_arcs.resize(n);
    for (VertexId v = 0; v < n; ++v) {
        switch (partition.roles[v]) {
            case UdaPartition::Role::Student: rep.tree_arcs[v] = {rep.hub, v}; break;
            case UdaPartition::Role::University: rep.tree_arcs[v] = {v, rep.hub}; break;
            case UdaPartition::Role::Program:
                rep.tree_arcs[v] = {v, partition.program_university[v]};
                break;
        }
    }
    for (EdgeId e = 0; e < inst.edge_count(); ++e) {
        VertexId student = -1, program = -1;
        for (VertexId v : inst.edges[e]) {
            if (partition.roles[v] == UdaPartition::Role::Student) student = v;
            if (partition.roles[v] == UdaPartition::Role::Program) program = v;
        }
        rep.cotree_arcs.emplace_back(student, program);
    }

    // Tree adjacency: node -> (neighbor, arc row, traversed forward?).
    struct Hop {
        int to;
        int row;
        bool forward;
    };
    std::vector<std::vector<Hop>> adjacency(rep.n_nodes);
    for (VertexId v = 0; v < n; ++v) {
        auto [tail, head] = rep.tree_arcs[v];
        adjacency[tail].push_back({head, v, true});
        adjacency[head].push_back({tail, v, false});
    }

    rep.matrix.assign(n, std::vector<int>(inst.edge_count(), 0));
    for (EdgeId e = 0; e < inst.edge_count(); ++e) {
        auto [tail, head] = rep.cotree_arcs[e];
        // Tree path head -> tail, continuing the direction of the cotree arc.
        std::vector<int> prev_node(rep.n_nodes, -2);
        std::vector<Hop> prev_hop(rep.n_nodes, Hop{-1, -1, false});
        std::deque<int> queue{head};
        prev_node[head] = -1;
        while (!queue.empty()) {
            int cur = queue.front();
            queue.pop_front();
            if (cur == tail) break;
            for (const Hop& hop : adjacency[cur])
                if (prev_node[hop.to] == -2) {
                    prev_node[hop.to] = cur;
                    prev_hop[hop.to] = hop;
                    queue.push_back(hop.to);
                }
        }
        if (prev_node[tail] == -2)
            throw InternalError("network representation: spanning tree is disconnected");
        for (int cur = tail; cur != head; cur = prev_node[cur])
            rep.matrix[prev_hop[cur].row][e] = prev_hop[cur].forward ? 1 : -1;
    }
    return rep;
}

namespace {

long long determinant(IntMatrix sub) {
    const int n = static_cast<int>(sub.size());
    // Fraction-free Gaussian elimination (Bareiss) keeps integers exact.
    std::vector<std::vector<long long>> a(n, std::vector<long long>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = sub[i][j];
    long long sign = 1;
    long long prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int swap_row = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k] != 0) {
                    swap_row = i;
                    break;
                }
            if (swap_row < 0) return 0;
            std::swap(a[k], a[swap_row]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

} // namespace

bool tu_spot_check(const IntMatrix& matrix, int max_order) {
    const int rows = static_cast<int>(matrix.size());
    const int cols = rows == 0 ? 0 : static_cast<int>(matrix[0].size());
    for (int order = 1; order <= max_order; ++order) {
        if (order > rows || order > cols) break;
        std::vector<int> row_pick(order), col_pick(order);
        std::iota(row_pick.begin(), row_pick.end(), 0);
        auto next_combo = [](std::vector<int>& combo, int limit) {
            int k = static_cast<int>(combo.size());
            int i = k - 1;
            while (i >= 0 && combo[i] == limit - k + i) --i;
            if (i < 0) return false;
            ++combo[i];
            for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
            return true;
        };
        do {
            std::iota(col_pick.begin(), col_pick.end(), 0);
            do {
                IntMatrix sub(order, std::vector<int>(order));
                for (int i = 0; i < order; ++i)
                    for (int j = 0; j < order; ++j) sub[i][j] = matrix[row_pick[i]][col_pick[j]];
                long long det = determinant(sub);
                if (det < -1 || det > 1) return false;
            } while (next_combo(col_pick, cols));
        } while (next_combo(row_pick, rows));
    }
    return true;
}

} // namespace shbm
