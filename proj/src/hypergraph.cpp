#include "shbm/hypergraph.hpp"

#include "shbm/errors.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace shbm {

std::string ValidationReport::to_string() const {
    std::ostringstream out;
    for (const auto& issue : issues) out << issue << "\n";
    return out.str();
}

Weight HypergraphInstance::total_abs_weight() const {
    Weight sum = 0;
    for (Weight w : weights) sum += (w < 0 ? -w : w);
    return sum;
}

namespace {

std::string fmt(const char* what, long long a, long long b = -1) {
    std::ostringstream out;
    out << what << " " << a;
    if (b >= 0) out << " / " << b;
    return out.str();
}

} // namespace

ValidationReport validate(const HypergraphInstance& inst) {
    ValidationReport report;
    const int n = inst.n_vertices;
    const int m = inst.edge_count();

    if (n < 0) report.issues.push_back("n_vertices is negative");

    for (EdgeId e = 0; e < m; ++e) {
        const auto& verts = inst.edges[e];
        if (verts.empty()) {
            report.issues.push_back(fmt("edge is empty: edge", e));
            continue;
        }
        if (!std::is_sorted(verts.begin(), verts.end()))
            report.issues.push_back(fmt("edge vertex list not sorted: edge", e));
        if (std::adjacent_find(verts.begin(), verts.end()) != verts.end())
            report.issues.push_back(fmt("edge contains a duplicate vertex: edge", e));
        for (VertexId v : verts)
            if (v < 0 || v >= n)
                report.issues.push_back(fmt("edge vertex id out of range: edge", e, v));
    }

    if (static_cast<int>(inst.capacities.size()) != n) {
        report.issues.push_back(fmt("capacities size mismatch: have",
                                    static_cast<long long>(inst.capacities.size()), n));
    } else {
        for (VertexId v = 0; v < n; ++v)
            if (inst.capacities[v] < 0)
                report.issues.push_back(fmt("negative capacity at vertex", v));
    }

    if (!inst.weights.empty() && static_cast<int>(inst.weights.size()) != m)
        report.issues.push_back(fmt("weights size mismatch: have",
                                    static_cast<long long>(inst.weights.size()), m));

    // Overflow contract: the sum of |w(e)| must be representable (solvers
    // shift by multiples of this sum).
    if (!inst.weights.empty()) {
        const unsigned long long limit =
            static_cast<unsigned long long>(std::numeric_limits<Weight>::max() / 4);
        unsigned long long abs_sum = 0;
        bool overflow = false;
        for (Weight w : inst.weights) {
            unsigned long long a =
                w == std::numeric_limits<Weight>::min()
                    ? static_cast<unsigned long long>(std::numeric_limits<Weight>::max()) + 1
                    : static_cast<unsigned long long>(w < 0 ? -w : w);
            if (a > limit || abs_sum > limit - a) {
                overflow = true;
                break;
            }
            abs_sum += a;
        }
        if (overflow)
            report.issues.push_back("sum of |weights| too large for the 64-bit weight contract");
    }

    // Preference lists: a permutation of exactly the incident edges, best first.
    if (static_cast<int>(inst.preferences.size()) != n) {
        report.issues.push_back(fmt("preferences size mismatch: have",
                                    static_cast<long long>(inst.preferences.size()), n));
        return report;
    }
    std::vector<std::vector<EdgeId>> incident(std::max(n, 0));
    for (EdgeId e = 0; e < m; ++e)
        for (VertexId v : inst.edges[e])
            if (v >= 0 && v < n) incident[v].push_back(e);

    for (VertexId v = 0; v < n; ++v) {
        std::vector<char> seen(m, 0);
        for (EdgeId e : inst.preferences[v]) {
            if (e < 0 || e >= m) {
                report.issues.push_back(fmt("preference of vertex refers to unknown edge: vertex", v, e));
                continue;
            }
            if (seen[e]) {
                report.issues.push_back(fmt("preference of vertex lists edge twice: vertex", v, e));
                continue;
            }
            seen[e] = 1;
            const auto& verts = inst.edges[e];
            if (!std::binary_search(verts.begin(), verts.end(), v))
                report.issues.push_back(fmt("preference of vertex lists non-incident edge: vertex", v, e));
        }
        for (EdgeId e : incident[v])
            if (!seen[e])
                report.issues.push_back(fmt("preference of vertex misses incident edge: vertex", v, e));
    }
    return report;
}

void prepare(HypergraphInstance& inst) {
    ValidationReport report = validate(inst);
    if (!report.ok())
        throw ValidationError("invalid instance:\n" + report.to_string());
    if (inst.capacities.empty() && inst.n_vertices > 0)
        throw ValidationError("capacities missing; fill defaults before prepare()");

    const int n = inst.n_vertices;
    const int m = inst.edge_count();
    inst.incident.assign(n, {});
    inst.pref_rank.assign(n, std::vector<int>(m, -1));
    for (EdgeId e = 0; e < m; ++e)
        for (VertexId v : inst.edges[e]) inst.incident[v].push_back(e);
    for (VertexId v = 0; v < n; ++v)
        for (int r = 0; r < static_cast<int>(inst.preferences[v].size()); ++r)
            inst.pref_rank[v][inst.preferences[v][r]] = r;
    inst.prepared = true;
}

DerivedParams derived_params(const HypergraphInstance& inst) {
    DerivedParams params;
    for (const auto& verts : inst.edges)
        params.max_edge_size = std::max(params.max_edge_size, static_cast<int>(verts.size()));
    std::vector<int> degree(inst.n_vertices, 0);
    for (const auto& verts : inst.edges)
        for (VertexId v : verts) ++degree[v];
    for (int d : degree) params.max_degree = std::max(params.max_degree, d);
    for (Capacity c : inst.capacities) params.max_capacity = std::max(params.max_capacity, c);
    for (Weight w : inst.weights) params.max_abs_weight = std::max(params.max_abs_weight, w < 0 ? -w : w);
    return params;
}

bool BMatching::contains(EdgeId e) const {
    return std::binary_search(members.begin(), members.end(), e);
}

void BMatching::add(const HypergraphInstance& inst, EdgeId e) {
    auto it = std::lower_bound(members.begin(), members.end(), e);
    if (it != members.end() && *it == e)
        throw InternalError("BMatching::add: edge already a member");
    members.insert(it, e);
    for (VertexId v : inst.edges[e]) ++loads[v];
}

void BMatching::remove(const HypergraphInstance& inst, EdgeId e) {
    auto it = std::lower_bound(members.begin(), members.end(), e);
    if (it == members.end() || *it != e)
        throw InternalError("BMatching::remove: edge not a member");
    members.erase(it);
    for (VertexId v : inst.edges[e]) --loads[v];
}

BMatching empty_matching(const HypergraphInstance& inst) {
    BMatching m;
    m.loads.assign(inst.n_vertices, 0);
    return m;
}

BMatching matching_from_edges(const HypergraphInstance& inst, std::vector<EdgeId> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (EdgeId e : ids)
        if (e < 0 || e >= inst.edge_count())
            throw ValidationError("matching refers to unknown edge id " + std::to_string(e));
    BMatching m = empty_matching(inst);
    m.members = std::move(ids);
    for (EdgeId e : m.members)
        for (VertexId v : inst.edges[e]) ++m.loads[v];
    return m;
}

bool is_feasible(const HypergraphInstance& inst, const BMatching& m) {
    for (VertexId v = 0; v < inst.n_vertices; ++v)
        if (m.loads[v] > inst.capacities[v]) return false;
    return true;
}

} // namespace shbm
