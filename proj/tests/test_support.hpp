#ifndef SHBM_TEST_SUPPORT_HPP
#define SHBM_TEST_SUPPORT_HPP

#include "shbm/bipartite.hpp"
#include "shbm/hypergraph.hpp"
#include "shbm/instance_io.hpp"
#include "shbm/uda.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace shbm_test {

using namespace shbm;

// Builds and prepares an instance; empty caps default to 1, empty prefs are
// derived by seed 0.
inline HypergraphInstance build_instance(int n, std::vector<std::vector<VertexId>> edges,
                                         std::vector<std::vector<EdgeId>> prefs = {},
                                         std::vector<Capacity> caps = {},
                                         std::vector<Weight> weights = {}) {
    HypergraphInstance inst;
    inst.n_vertices = n;
    inst.edges = std::move(edges);
    for (auto& verts : inst.edges) std::sort(verts.begin(), verts.end());
    inst.capacities = caps.empty() ? std::vector<Capacity>(n, 1) : std::move(caps);
    inst.preferences =
        prefs.empty() ? seeded_preferences(n, inst.edges, 0) : std::move(prefs);
    inst.weights = std::move(weights);
    prepare(inst);
    return inst;
}

// Definition-level stability re-derivation, independent of the oracle's code
// path: scans incident vertices and member edges directly.
inline bool naive_is_stable(const HypergraphInstance& inst, const std::vector<EdgeId>& members) {
    std::vector<char> in(inst.edge_count(), 0);
    for (EdgeId e : members) in[e] = 1;
    std::vector<long long> loads(inst.n_vertices, 0);
    for (EdgeId e : members)
        for (VertexId v : inst.edges[e]) ++loads[v];
    for (VertexId v = 0; v < inst.n_vertices; ++v)
        if (loads[v] > inst.capacities[v]) return false;
    for (EdgeId e = 0; e < inst.edge_count(); ++e) {
        if (in[e]) continue;
        bool dominated_somewhere = false;
        for (VertexId v : inst.edges[e]) {
            if (loads[v] != inst.capacities[v]) continue;
            bool all_better = true;
            for (EdgeId f : members)
                if (inst.pref_rank[v][f] >= 0 && !inst.prefers(v, f, e)) all_better = false;
            if (all_better) {
                dominated_somewhere = true;
                break;
            }
        }
        if (!dominated_somewhere) return false;
    }
    return true;
}

// Random bipartite instance with complete preference lists over incident
// edges. unit_left forces capacity 1 on side 0 (the many-to-one case).
struct RandomBipartite {
    HypergraphInstance instance;
    std::vector<int> side;
};

inline RandomBipartite gen_random_bipartite(unsigned long long seed, int left, int right,
                                            int max_edges, Capacity bmax, Weight wmax,
                                            bool unit_left = false) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 12345);
    auto below = [&](long long bound) { return static_cast<long long>(rng() % bound); };
    RandomBipartite out;
    HypergraphInstance& inst = out.instance;
    inst.n_vertices = left + right;
    out.side.assign(inst.n_vertices, 0);
    for (int v = left; v < inst.n_vertices; ++v) out.side[v] = 1;

    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < left; ++a)
        for (int b = 0; b < right; ++b) pairs.emplace_back(a, left + b);
    for (std::size_t i = pairs.size(); i > 1; --i) std::swap(pairs[i - 1], pairs[rng() % i]);
    const int m = std::min<int>(max_edges, static_cast<int>(pairs.size()));
    for (int e = 0; e < m; ++e)
        inst.edges.push_back({std::min(pairs[e].first, pairs[e].second),
                              std::max(pairs[e].first, pairs[e].second)});

    inst.capacities.resize(inst.n_vertices);
    for (int v = 0; v < inst.n_vertices; ++v)
        inst.capacities[v] =
            (unit_left && out.side[v] == 0) ? 1 : 1 + below(std::max<Capacity>(1, bmax));
    inst.weights.resize(inst.edge_count());
    for (auto& w : inst.weights) w = wmax == 0 ? 0 : below(2 * wmax + 1) - wmax;
    inst.preferences = seeded_preferences(inst.n_vertices, inst.edges, rng());
    prepare(inst);
    return out;
}

// All feasible assignments of a UDA instance (odometer over acceptable
// programs plus unassigned).
inline std::vector<Assignment> enumerate_assignments(const UdaInstance& inst) {
    std::vector<Assignment> out;
    Assignment current;
    current.program_of.assign(inst.n_students, -1);
    std::vector<long long> load_u(inst.n_universities(), 0), load_p(inst.n_programs(), 0);
    auto recurse = [&](auto&& self, int s) -> void {
        if (s == inst.n_students) {
            out.push_back(current);
            return;
        }
        current.program_of[s] = -1;
        self(self, s + 1);
        for (int p : inst.student_prefs[s]) {
            const int u = inst.program_university[p];
            if (load_p[p] + 1 > inst.program_quota[p]) continue;
            if (load_u[u] + 1 > inst.university_capacity[u]) continue;
            ++load_p[p];
            ++load_u[u];
            current.program_of[s] = p;
            self(self, s + 1);
            current.program_of[s] = -1;
            --load_p[p];
            --load_u[u];
        }
    };
    recurse(recurse, 0);
    return out;
}

inline std::vector<Assignment> stable_assignments(const UdaInstance& inst) {
    std::vector<Assignment> out;
    for (const Assignment& a : enumerate_assignments(inst))
        if (uda_is_stable(inst, a).stable) out.push_back(a);
    return out;
}

// Just enough LP-format parsing to replay an emitted integer program.
struct MiniLp {
    std::vector<std::string> var_names;
    struct Row {
        std::vector<std::pair<int, long long>> terms;
        std::string relation;
        long long rhs = 0;
    };
    std::vector<Row> rows;
};

inline MiniLp parse_mini_lp(const std::string& text) {
    MiniLp lp;
    std::map<std::string, int> var_index;
    std::istringstream in(text);
    std::string line;
    enum class Section { None, Objective, Constraints, Binary } section = Section::None;
    std::vector<std::string> constraint_lines;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '\\') continue;
        if (line == "Maximize") {
            section = Section::Objective;
            continue;
        }
        if (line == "Subject To") {
            section = Section::Constraints;
            continue;
        }
        if (line == "Binary") {
            section = Section::Binary;
            continue;
        }
        if (line == "End") break;
        if (section == Section::Binary) {
            std::string name = line;
            name.erase(0, name.find_first_not_of(' '));
            var_index[name] = static_cast<int>(lp.var_names.size());
            lp.var_names.push_back(name);
        } else if (section == Section::Constraints) {
            constraint_lines.push_back(line);
        } else if (section == Section::None) {
            throw std::runtime_error("LP text outside any section");
        }
    }
    for (const std::string& row_text : constraint_lines) {
        MiniLp::Row row;
        auto colon = row_text.find(':');
        if (colon == std::string::npos) throw std::runtime_error("LP row without a label");
        std::istringstream terms(row_text.substr(colon + 1));
        std::string token;
        long long sign = 1, pending = 1;
        bool have_coeff = false;
        while (terms >> token) {
            if (token == "+") {
                sign = 1;
            } else if (token == "-") {
                sign = -1;
            } else if (token == "<=" || token == ">=" || token == "=") {
                row.relation = token;
                if (!(terms >> row.rhs)) throw std::runtime_error("LP row without rhs");
            } else if (std::isdigit(static_cast<unsigned char>(token[0]))) {
                pending = std::stoll(token);
                have_coeff = true;
            } else {
                auto it = var_index.find(token);
                if (it == var_index.end()) throw std::runtime_error("LP row uses unknown var");
                row.terms.emplace_back(it->second, sign * (have_coeff ? pending : 1));
                sign = 1;
                pending = 1;
                have_coeff = false;
            }
        }
        if (row.relation.empty()) throw std::runtime_error("LP row without relation");
        lp.rows.push_back(std::move(row));
    }
    return lp;
}

inline bool lp_satisfied(const MiniLp& lp, const std::vector<int>& x) {
    for (const auto& row : lp.rows) {
        long long lhs = 0;
        for (auto [var, coeff] : row.terms) lhs += coeff * x[var];
        if (row.relation == "<=" && lhs > row.rhs) return false;
        if (row.relation == ">=" && lhs < row.rhs) return false;
        if (row.relation == "=" && lhs != row.rhs) return false;
    }
    return true;
}

// Round-based student-proposing simulation: each student in turn proposes to
// its best not-yet-tried program that improves on its current seat; programs
// and universities evict per their rankings. Proposal pointers reset per
// round; the assignment carries over.
inline Assignment run_proposal_round(const UdaInstance& inst, const std::vector<int>& order,
                              Assignment current) {
    std::vector<std::set<int>> proposed(inst.n_students);
    bool any = true;
    while (any) {
        any = false;
        for (int s : order) {
            int target = -1;
            for (int p : inst.student_prefs[s]) {
                if (proposed[s].count(p)) continue;
                const int have = current.program_of[s];
                if (have >= 0 && inst.student_rank[s][p] >= inst.student_rank[s][have]) continue;
                target = p;
                break;
            }
            if (target < 0) continue;
            any = true;
            proposed[s].insert(target);
            const int u = inst.program_university[target];
            // Program-level decision (all quotas are 1 in the example).
            int occupant = -1;
            for (int s2 = 0; s2 < inst.n_students; ++s2)
                if (current.program_of[s2] == target) occupant = s2;
            if (occupant >= 0) {
                if (inst.program_rank[target][s] < inst.program_rank[target][occupant])
                    current.program_of[occupant] = -1;
                else
                    continue; // rejected by the program
            }
            current.program_of[s] = target;
            // University-level eviction if oversubscribed.
            std::vector<int> at_u;
            for (int s2 = 0; s2 < inst.n_students; ++s2) {
                int p2 = current.program_of[s2];
                if (p2 >= 0 && inst.program_university[p2] == u) at_u.push_back(s2);
            }
            if (static_cast<int>(at_u.size()) > inst.university_capacity[u]) {
                int worst = at_u.front();
                for (int s2 : at_u)
                    if (inst.university_rank[u][s2] > inst.university_rank[u][worst]) worst = s2;
                current.program_of[worst] = -1;
            }
        }
    }
    return current;
}

// The worked admission example: 4 students, 2 universities (capacities 2,1),
// 4 unit-quota programs; student-proposing rounds cycle on it.
inline UdaInstance example_admission_instance() {
    UdaInstance inst;
    inst.n_students = 4;
    inst.university_capacity = {2, 1};
    inst.program_university = {0, 0, 0, 1}; // p0,p1,p2 at u0; p3 at u1
    inst.program_quota = {1, 1, 1, 1};
    inst.student_prefs = {{0}, {1}, {0, 3}, {3, 2}};
    inst.university_prefs = {{3, 2, 1, 0}, {2, 3}};
    inst.program_prefs = {{0, 2}, {1}, {3}, {2, 3}};
    prepare_uda(inst);
    return inst;
}

} // namespace shbm_test

#endif
