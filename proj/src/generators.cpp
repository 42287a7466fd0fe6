#include "shbm/generators.hpp"

#include "shbm/errors.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

namespace shbm {

Cnf parse_dimacs(const std::string& text) {
    Cnf formula;
    std::istringstream in(text);
    std::string token;
    bool header_seen = false;
    std::vector<int> clause;
    while (in >> token) {
        if (token == "c") {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        if (token == "p") {
            std::string kind;
            int n_clauses = 0;
            if (!(in >> kind >> formula.n_vars >> n_clauses) || kind != "cnf")
                throw ParseError("DIMACS: malformed problem line");
            header_seen = true;
            continue;
        }
        int literal = 0;
        try {
            literal = std::stoi(token);
        } catch (...) {
            throw ParseError("DIMACS: unexpected token '" + token + "'");
        }
        if (!header_seen) throw ParseError("DIMACS: literal before the problem line");
        if (literal == 0) {
            formula.clauses.push_back(clause);
            clause.clear();
        } else {
            if (std::abs(literal) > formula.n_vars)
                throw ParseError("DIMACS: literal out of range: " + token);
            clause.push_back(literal);
        }
    }
    if (!clause.empty()) formula.clauses.push_back(clause);
    return formula;
}

CnfReduction gen_laminar_from_cnf(const Cnf& formula) {
    const int n = formula.n_vars;
    const int m = static_cast<int>(formula.clauses.size());
    if (n <= 0 || m <= 0) throw ValidationError("gen_laminar_from_cnf: empty formula");
    for (const auto& clause : formula.clauses)
        for (int literal : clause)
            if (literal == 0 || std::abs(literal) > n)
                throw ValidationError("gen_laminar_from_cnf: literal out of range");

    // Vertices: z = 0, v_i = 2i-1, vbar_i = 2i.
    // Edges: e_z = 0; e_i = 2i-1, ebar_i = 2i (parallel pairs); f_j = 2n+j.
    HypergraphInstance inst;
    inst.n_vertices = 2 * n + 1;
    inst.capacities.assign(inst.n_vertices, 1);
    const auto pos_v = [](int i) { return 2 * i - 1; };
    const auto neg_v = [](int i) { return 2 * i; };
    const EdgeId e_z = 0;
    const auto pos_e = [](int i) { return 2 * i - 1; };
    const auto neg_e = [](int i) { return 2 * i; };
    const auto clause_e = [n](int j) { return 2 * n + j; };

    inst.edges.resize(2 * n + m + 1);
    inst.edges[e_z] = {0};
    std::vector<VertexId> everyone(inst.n_vertices);
    std::iota(everyone.begin(), everyone.end(), 0);
    for (int i = 1; i <= n; ++i) {
        inst.edges[pos_e(i)] = {pos_v(i), neg_v(i)};
        inst.edges[neg_e(i)] = {pos_v(i), neg_v(i)};
    }
    for (int j = 1; j <= m; ++j) inst.edges[clause_e(j)] = everyone;

    inst.weights.assign(inst.edge_count(), 0);
    inst.weights[e_z] = 1;

    std::vector<std::set<int>> clauses_with_pos(n + 1), clauses_with_neg(n + 1);
    for (int j = 1; j <= m; ++j)
        for (int literal : formula.clauses[j - 1]) {
            if (literal > 0)
                clauses_with_pos[literal].insert(j);
            else
                clauses_with_neg[-literal].insert(j);
        }

    inst.preferences.assign(inst.n_vertices, {});
    auto& z_pref = inst.preferences[0];
    for (int j = 1; j <= m; ++j) z_pref.push_back(clause_e(j));
    z_pref.push_back(e_z);
    for (int i = 1; i <= n; ++i) {
        auto& vp = inst.preferences[pos_v(i)];
        for (int j = 1; j <= m; ++j)
            if (!clauses_with_pos[i].count(j)) vp.push_back(clause_e(j));
        vp.push_back(pos_e(i));
        for (int j : clauses_with_pos[i]) vp.push_back(clause_e(j));
        vp.push_back(neg_e(i));

        auto& vn = inst.preferences[neg_v(i)];
        for (int j = 1; j <= m; ++j)
            if (!clauses_with_neg[i].count(j)) vn.push_back(clause_e(j));
        vn.push_back(neg_e(i));
        for (int j : clauses_with_neg[i]) vn.push_back(clause_e(j));
        vn.push_back(pos_e(i));
    }
    inst.class_hint = "laminar";
    prepare(inst);

    CnfReduction result;
    result.target_edge = e_z;
    result.loaded.certificate = build_laminar_forest(inst);
    result.loaded.instance = std::move(inst);
    return result;
}

CliqueReduction gen_subpath_from_multicolored_clique(const PartitionedGraph& graph, int k) {
    if (k < 1) throw ValidationError("clique generator: k must be positive");
    const int n_g = graph.n_vertices;
    if (static_cast<int>(graph.part.size()) != n_g)
        throw ValidationError("clique generator: partition array has wrong length");
    for (int part : graph.part)
        if (part < 0 || part >= k) throw ValidationError("clique generator: bad partition id");
    std::vector<std::vector<int>> classes(k); // ascending vertex ids per class
    for (int v = 0; v < n_g; ++v) classes[graph.part[v]].push_back(v);
    for (int i = 0; i < k; ++i)
        if (classes[i].empty())
            throw ValidationError("clique generator: partition class " + std::to_string(i) +
                                  " is empty");
    std::set<std::pair<int, int>> adjacency;
    for (auto [a, b] : graph.edges) {
        if (a < 0 || b < 0 || a >= n_g || b >= n_g || a == b)
            throw ValidationError("clique generator: bad graph edge");
        if (graph.part[a] == graph.part[b])
            throw ValidationError("clique generator: partition classes must be independent sets");
        adjacency.insert({std::min(a, b), std::max(a, b)});
    }

    // Complement edges between different classes, in ascending order.
    std::vector<std::pair<int, int>> missing;
    for (int a = 0; a < n_g; ++a)
        for (int b = a + 1; b < n_g; ++b)
            if (graph.part[a] != graph.part[b] && !adjacency.count({a, b}))
                missing.emplace_back(a, b);
    const int n_miss = static_cast<int>(missing.size());

    // Vertex layout along the path: w, z, s_1..s_k, then one segment of
    // 4k r-vertices plus a, a' per complement edge.
    HypergraphInstance inst;
    inst.n_vertices = 2 + k + n_miss * (4 * k + 2);
    const VertexId w = 0, z = 1;
    const auto s_v = [](int i) { return 1 + i; };                       // i in 1..k
    const auto seg = [k](int j) { return 2 + k + (j - 1) * (4 * k + 2); }; // j in 1..n_miss
    const auto r_v = [&](int i, int h, int j) { return seg(j) + 4 * (i - 1) + (h - 1); };
    const auto a_v = [&](int j) { return seg(j) + 4 * k; };
    const auto a2_v = [&](int j) { return seg(j) + 4 * k + 1; };

    // Edge ids: e_w, d_1..d_k, the e^j(v) blocks, the hat/dhat blocks, f_j.
    const EdgeId e_w = 0;
    const auto d_e = [](int i) { return i; };
    const auto sel_e = [&](int j, int v) { return 1 + k + j * n_g + v; }; // j in 0..n_miss
    const int hat0 = 1 + k + (n_miss + 1) * n_g;
    const auto hat_e = [&](int j, int v) { return hat0 + (j - 1) * n_g + v; };
    const int dhat0 = hat0 + n_miss * n_g;
    const auto dhat_e = [&](int j, int v) { return dhat0 + (j - 1) * n_g + v; };
    // One sentinel per class and segment: a parallel {r1, r2} edge ranked
    // best by r1 and worst by r2. It is dominated at r2 exactly when the
    // class carries a segment-j selection edge, and blocks otherwise, which
    // closes the dead-chain escape for classes whose selected vertex is
    // their first (the hat-edge constraints are vacuous at p = 1).
    const int sent0 = dhat0 + n_miss * n_g;
    const auto sent_e = [&](int j, int i) { return sent0 + (j - 1) * k + (i - 1); };
    const int f0 = sent0 + n_miss * k;
    const auto f_e = [&](int j) { return f0 + (j - 1); };
    const int m_total = f0 + n_miss;

    inst.edges.assign(m_total, {});
    inst.edges[e_w] = {w, z};
    for (int i = 1; i <= k; ++i) {
        auto& verts = inst.edges[d_e(i)];
        verts.push_back(z);
        for (int i2 = 1; i2 <= i; ++i2) verts.push_back(s_v(i2));
    }
    for (int v = 0; v < n_g; ++v) {
        const int i = graph.part[v] + 1;
        // Selection edge e^0(v): tail of the s-block plus the head of segment 1.
        auto& sel = inst.edges[sel_e(0, v)];
        for (int i2 = i; i2 <= k; ++i2) sel.push_back(s_v(i2));
        if (n_miss >= 1) {
            for (int i2 = 1; i2 < i; ++i2)
                for (int h = 1; h <= 4; ++h) sel.push_back(r_v(i2, h, 1));
            for (int h = 1; h <= 3; ++h) sel.push_back(r_v(i, h, 1));
        }
        for (int j = 1; j <= n_miss; ++j) {
            auto& verts = inst.edges[sel_e(j, v)];
            for (int h = 2; h <= 4; ++h) verts.push_back(r_v(i, h, j));
            for (int i2 = i + 1; i2 <= k; ++i2)
                for (int h = 1; h <= 4; ++h) verts.push_back(r_v(i2, h, j));
            verts.push_back(a_v(j));
            verts.push_back(a2_v(j));
            if (j < n_miss) {
                for (int i2 = 1; i2 < i; ++i2)
                    for (int h = 1; h <= 4; ++h) verts.push_back(r_v(i2, h, j + 1));
                for (int h = 1; h <= 3; ++h) verts.push_back(r_v(i, h, j + 1));
            }
            inst.edges[hat_e(j, v)] = {r_v(i, 1, j), r_v(i, 2, j)};
            inst.edges[dhat_e(j, v)] = {r_v(i, 3, j), r_v(i, 4, j)};
        }
    }
    for (int j = 1; j <= n_miss; ++j) {
        for (int i = 1; i <= k; ++i) inst.edges[sent_e(j, i)] = {r_v(i, 1, j), r_v(i, 2, j)};
        inst.edges[f_e(j)] = {a_v(j), a2_v(j)};
    }
    for (auto& verts : inst.edges) std::sort(verts.begin(), verts.end());

    inst.capacities.assign(inst.n_vertices, 1);
    for (int i = 1; i <= k; ++i) inst.capacities[s_v(i)] = i;
    for (int j = 1; j <= n_miss; ++j) {
        for (int i = 1; i <= k; ++i) {
            inst.capacities[r_v(i, 1, j)] = k;
            inst.capacities[r_v(i, 2, j)] = k + 1;
            inst.capacities[r_v(i, 3, j)] = k + 1;
            inst.capacities[r_v(i, 4, j)] = k;
        }
        inst.capacities[a_v(j)] = k;
        inst.capacities[a2_v(j)] = k;
    }

    inst.weights.assign(m_total, 0);
    inst.weights[e_w] = 1;

    // Preference lists.
    inst.preferences.assign(inst.n_vertices, {});
    inst.preferences[w] = {e_w};
    for (int i = 1; i <= k; ++i) inst.preferences[z].push_back(d_e(i));
    inst.preferences[z].push_back(e_w);
    for (int i = 1; i <= k; ++i) {
        auto& pref = inst.preferences[s_v(i)];
        for (int i2 = i + 1; i2 <= k; ++i2) pref.push_back(d_e(i2));
        for (int v = 0; v < n_g; ++v)
            if (graph.part[v] + 1 < i) pref.push_back(sel_e(0, v));
        for (int v : classes[i - 1]) pref.push_back(sel_e(0, v));
        pref.push_back(d_e(i));
    }
    // Forward / reversed per-class edge sequences for the merge tails.
    const auto fwd = [&](int i, auto&& id_of) {
        std::vector<EdgeId> out;
        for (int v : classes[i - 1]) out.push_back(id_of(v));
        return out;
    };
    const auto rev = [&](int i, auto&& id_of) {
        std::vector<EdgeId> out = fwd(i, id_of);
        std::reverse(out.begin(), out.end());
        return out;
    };
    const auto merge = [](const std::vector<EdgeId>& a, const std::vector<EdgeId>& b) {
        std::vector<EdgeId> out;
        for (std::size_t idx = 0; idx < a.size(); ++idx) {
            out.push_back(a[idx]);
            out.push_back(b[idx]);
        }
        return out;
    };
    const auto etype_others = [&](int i, int j, bool with_own_j) {
        // Ascending ids of e^j-type edges of other classes plus, optionally,
        // this class's segment-j block: E^j_{<i} and E^{j-1}_{>i} (and E^j_i).
        std::vector<EdgeId> out;
        for (int v = 0; v < n_g; ++v) {
            const int iv = graph.part[v] + 1;
            if (iv < i) out.push_back(sel_e(j, v));
            if (iv > i) out.push_back(sel_e(j - 1, v));
            if (with_own_j && iv == i) out.push_back(sel_e(j, v));
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    for (int j = 1; j <= n_miss; ++j) {
        for (int i = 1; i <= k; ++i) {
            const auto prev_e = [&](int v) { return sel_e(j - 1, v); };
            const auto cur_e = [&](int v) { return sel_e(j, v); };
            const auto hat = [&](int v) { return hat_e(j, v); };
            const auto dhat = [&](int v) { return dhat_e(j, v); };

            auto& p1 = inst.preferences[r_v(i, 1, j)];
            p1.push_back(sent_e(j, i));
            for (EdgeId e : etype_others(i, j, false)) p1.push_back(e);
            for (EdgeId e : merge(fwd(i, prev_e), fwd(i, hat))) p1.push_back(e);

            auto& p2 = inst.preferences[r_v(i, 2, j)];
            p2 = etype_others(i, j, false);
            for (int v : classes[i - 1]) p2.push_back(prev_e(v));
            std::sort(p2.begin(), p2.end());
            for (EdgeId e : merge(rev(i, hat), rev(i, cur_e))) p2.push_back(e);
            p2.push_back(sent_e(j, i));

            auto& p3 = inst.preferences[r_v(i, 3, j)];
            p3 = etype_others(i, j, true);
            for (EdgeId e : merge(rev(i, dhat), rev(i, prev_e))) p3.push_back(e);

            auto& p4 = inst.preferences[r_v(i, 4, j)];
            p4 = etype_others(i, j, false);
            for (EdgeId e : merge(fwd(i, cur_e), fwd(i, dhat))) p4.push_back(e);
        }
        const auto [x, y] = missing[j - 1];
        const int lower = graph.part[x] <= graph.part[y] ? x : y;
        const int higher = lower == x ? y : x;
        auto& pa = inst.preferences[a_v(j)];
        for (int v = 0; v < n_g; ++v)
            if (v != lower) pa.push_back(sel_e(j, v));
        pa.push_back(f_e(j));
        pa.push_back(sel_e(j, lower));
        auto& pb = inst.preferences[a2_v(j)];
        for (int v = 0; v < n_g; ++v)
            if (v != higher) pb.push_back(sel_e(j, v));
        pb.push_back(f_e(j));
        pb.push_back(sel_e(j, higher));
    }

    inst.class_hint = "subpath";
    prepare(inst);

    CliqueReduction result;
    result.target_edge = e_w;
    PathOrdering ordering;
    ordering.order.resize(inst.n_vertices);
    std::iota(ordering.order.begin(), ordering.order.end(), 0);
    result.loaded.certificate = ordering;
    result.loaded.instance = std::move(inst);
    return result;
}

StarReduction gen_subtree_star_from_shbm(const HypergraphInstance& source) {
    for (EdgeId e = 0; e < source.edge_count(); ++e)
        if (source.edges[e].size() > 3)
            throw ValidationError("star generator: edge " + std::to_string(e) +
                                  " has more than 3 vertices");
    HypergraphInstance inst;
    const VertexId center = source.n_vertices;
    inst.n_vertices = source.n_vertices + 1;
    inst.capacities = source.capacities;
    inst.capacities.push_back(source.edge_count() + 1); // never saturated
    for (const auto& verts : source.edges) {
        std::vector<VertexId> extended = verts;
        extended.push_back(center);
        inst.edges.push_back(std::move(extended));
    }
    inst.weights = source.weights;
    inst.preferences = source.preferences;
    inst.preferences.emplace_back();
    for (EdgeId e = 0; e < inst.edge_count(); ++e) inst.preferences[center].push_back(e);
    inst.class_hint = "subtree";
    prepare(inst);

    StarReduction result;
    result.center = center;
    TreeWitness tree;
    tree.parent.assign(inst.n_vertices, center);
    tree.parent[center] = -1;
    result.loaded.certificate = tree;
    result.loaded.instance = std::move(inst);
    return result;
}

UdaInstance gen_uda_from_com_smti(const SmtiInstance& smti) {
    const int n_m = smti.n_men, n_w = smti.n_women;
    if (static_cast<int>(smti.men_prefs.size()) != n_m ||
        static_cast<int>(smti.women_prefs.size()) != n_w)
        throw ValidationError("smti: preference arrays have wrong length");
    for (int man = 0; man < n_m; ++man) {
        std::set<int> seen;
        for (int woman : smti.men_prefs[man])
            if (woman < 0 || woman >= n_w || !seen.insert(woman).second)
                throw ValidationError("smti: man " + std::to_string(man) + " has a bad list");
    }
    std::vector<std::set<int>> lists_w(n_w);
    for (int woman = 0; woman < n_w; ++woman) {
        const auto& entry = smti.women_prefs[woman];
        if (entry.is_tie && entry.men.size() != 2)
            throw ValidationError("smti: a tie must have length exactly two");
        for (int man : entry.men)
            if (man < 0 || man >= n_m || !lists_w[woman].insert(man).second)
                throw ValidationError("smti: woman " + std::to_string(woman) + " has a bad list");
    }

    UdaInstance inst;
    inst.n_students = n_m;
    inst.university_capacity.assign(n_w, 1);
    inst.program_quota.assign(n_w, 1);
    inst.program_university.resize(n_w);
    std::iota(inst.program_university.begin(), inst.program_university.end(), 0);

    auto mutual = [&](int man, int woman) {
        return lists_w[woman].count(man) &&
               std::find(smti.men_prefs[man].begin(), smti.men_prefs[man].end(), woman) !=
                   smti.men_prefs[man].end();
    };
    inst.student_prefs.assign(n_m, {});
    for (int man = 0; man < n_m; ++man)
        for (int woman : smti.men_prefs[man])
            if (mutual(man, woman)) inst.student_prefs[man].push_back(woman);

    inst.university_prefs.assign(n_w, {});
    inst.program_prefs.assign(n_w, {});
    for (int woman = 0; woman < n_w; ++woman) {
        const auto& entry = smti.women_prefs[woman];
        std::vector<int> accepted;
        for (int man : entry.men)
            if (mutual(man, woman)) accepted.push_back(man);
        if (entry.is_tie && accepted.size() == 2) {
            const int lo = std::min(accepted[0], accepted[1]);
            const int hi = std::max(accepted[0], accepted[1]);
            inst.university_prefs[woman] = {lo, hi};
            inst.program_prefs[woman] = {hi, lo};
        } else {
            inst.university_prefs[woman] = accepted;
            inst.program_prefs[woman] = accepted;
        }
    }
    prepare_uda(inst);
    return inst;
}

namespace {

struct Rng {
    std::mt19937_64 engine;

    explicit Rng(unsigned long long seed) : engine(seed) {}
    // Uniform integer in [0, bound).
    long long below(long long bound) { return static_cast<long long>(engine() % bound); }
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i)
            std::swap(items[i - 1], items[engine() % i]);
    }
};

std::vector<VertexId> random_permutation(int n, Rng& rng) {
    std::vector<VertexId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    return perm;
}

void fill_common(HypergraphInstance& inst, Rng& rng, const RandomSpec& spec) {
    inst.capacities.resize(inst.n_vertices);
    for (auto& c : inst.capacities) {
        if (spec.allow_zero_capacity && rng.below(8) == 0)
            c = 0;
        else
            c = 1 + rng.below(std::max<Capacity>(1, spec.max_capacity));
    }
    inst.weights.resize(inst.edge_count());
    for (auto& w : inst.weights)
        w = spec.max_abs_weight == 0 ? 0
                                     : rng.below(2 * spec.max_abs_weight + 1) - spec.max_abs_weight;
    inst.preferences = seeded_preferences(inst.n_vertices, inst.edges,
                                          static_cast<unsigned long long>(rng.engine()));
}

} // namespace

UdaInstance gen_random_uda(unsigned long long seed, const RandomSpec& spec) {
    Rng rng(seed * 2654435761ULL + 1);
    UdaInstance inst;
    inst.n_students = spec.n_students;
    const int n_u = std::max(1, spec.n_universities);
    for (int u = 0; u < n_u; ++u) {
        inst.university_capacity.push_back(1 + rng.below(std::max<Capacity>(1, spec.max_university_capacity)));
        const int programs = 1 + static_cast<int>(rng.below(std::max(1, spec.max_programs_per_university)));
        for (int t = 0; t < programs; ++t) {
            inst.program_university.push_back(u);
            inst.program_quota.push_back(1 + rng.below(std::max<Capacity>(1, spec.max_quota)));
        }
    }
    const int n_p = inst.n_programs();
    inst.student_prefs.assign(inst.n_students, {});
    for (int s = 0; s < inst.n_students; ++s) {
        std::vector<int> programs(n_p);
        std::iota(programs.begin(), programs.end(), 0);
        rng.shuffle(programs);
        const int len = static_cast<int>(rng.below(n_p + 1));
        programs.resize(len);
        inst.student_prefs[s] = programs;
    }
    std::vector<int> students(inst.n_students);
    std::iota(students.begin(), students.end(), 0);
    inst.university_prefs.assign(n_u, {});
    for (int u = 0; u < n_u; ++u) {
        rng.shuffle(students);
        inst.university_prefs[u] = students;
    }
    inst.program_prefs.assign(n_p, {});
    for (int p = 0; p < n_p; ++p) {
        rng.shuffle(students);
        inst.program_prefs[p] = students;
    }
    prepare_uda(inst);
    return inst;
}

LoadedInstance gen_random(const std::string& cls, unsigned long long seed, const RandomSpec& spec) {
    Rng rng(seed * 6364136223846793005ULL + 1442695040888963407ULL);
    const int n = std::max(1, spec.n_vertices);
    const int m = std::max(0, spec.n_edges);
    const int lmax = std::max(1, spec.max_edge_size);

    LoadedInstance loaded;
    HypergraphInstance& inst = loaded.instance;
    inst.n_vertices = n;

    if (cls == "laminar") {
        // Nested random interval subdivision, then a random relabeling.
        std::vector<std::pair<int, int>> intervals;
        auto subdivide = [&](auto&& self, int lo, int hi) -> void {
            if (hi - lo < 1) return;
            intervals.emplace_back(lo, hi);
            if (hi - lo == 1) return;
            const int parts = 2 + static_cast<int>(rng.below(2));
            int cursor = lo;
            for (int piece = 0; piece < parts && cursor < hi; ++piece) {
                int remaining = hi - cursor;
                int len = piece == parts - 1 ? remaining
                                             : 1 + static_cast<int>(rng.below(remaining));
                self(self, cursor, cursor + len);
                cursor += len;
            }
        };
        subdivide(subdivide, 0, n);
        rng.shuffle(intervals);
        const std::vector<VertexId> relabel = random_permutation(n, rng);
        for (int e = 0; e < m; ++e) {
            const auto [lo, hi] = intervals[rng.below(static_cast<long long>(intervals.size()))];
            std::vector<VertexId> verts;
            for (int p = lo; p < hi; ++p) verts.push_back(relabel[p]);
            std::sort(verts.begin(), verts.end());
            inst.edges.push_back(std::move(verts));
        }
        fill_common(inst, rng, spec);
        inst.class_hint = "laminar";
        prepare(inst);
        loaded.certificate = build_laminar_forest(inst);
    } else if (cls == "subpath") {
        PathOrdering ordering;
        ordering.order = random_permutation(n, rng);
        for (int e = 0; e < m; ++e) {
            const int lo = static_cast<int>(rng.below(n));
            const int len = 1 + static_cast<int>(rng.below(std::min(lmax, n - lo)));
            std::vector<VertexId> verts;
            for (int p = lo; p < lo + len; ++p) verts.push_back(ordering.order[p]);
            std::sort(verts.begin(), verts.end());
            inst.edges.push_back(std::move(verts));
        }
        fill_common(inst, rng, spec);
        inst.class_hint = "subpath";
        prepare(inst);
        loaded.certificate = ordering;
    } else if (cls == "subtree") {
        TreeWitness tree;
        tree.parent.assign(n, -1);
        const std::vector<VertexId> relabel = random_permutation(n, rng);
        std::vector<std::vector<VertexId>> adjacency(n);
        for (int v = 1; v < n; ++v) {
            const int parent = static_cast<int>(rng.below(v));
            tree.parent[relabel[v]] = relabel[parent];
            adjacency[relabel[v]].push_back(relabel[parent]);
            adjacency[relabel[parent]].push_back(relabel[v]);
        }
        for (int e = 0; e < m; ++e) {
            std::vector<VertexId> chosen{static_cast<VertexId>(rng.below(n))};
            std::set<VertexId> in_set(chosen.begin(), chosen.end());
            const int target = 1 + static_cast<int>(rng.below(lmax));
            while (static_cast<int>(chosen.size()) < target) {
                std::vector<VertexId> frontier;
                for (VertexId v : chosen)
                    for (VertexId u : adjacency[v])
                        if (!in_set.count(u)) frontier.push_back(u);
                if (frontier.empty()) break;
                VertexId pick = frontier[rng.below(static_cast<long long>(frontier.size()))];
                chosen.push_back(pick);
                in_set.insert(pick);
            }
            std::sort(chosen.begin(), chosen.end());
            inst.edges.push_back(std::move(chosen));
        }
        fill_common(inst, rng, spec);
        inst.class_hint = "subtree";
        prepare(inst);
        loaded.certificate = tree;
    } else if (cls == "uda") {
        UdaInstance uda = gen_random_uda(seed, spec);
        UdaReduction red = reduce_to_shbm(uda);
        loaded.instance = std::move(red.instance);
        loaded.certificate = red.partition;
        return loaded;
    } else if (cls == "general") {
        for (int e = 0; e < m; ++e) {
            std::set<VertexId> verts;
            const int size = 1 + static_cast<int>(rng.below(std::min(lmax, n)));
            while (static_cast<int>(verts.size()) < size)
                verts.insert(static_cast<VertexId>(rng.below(n)));
            inst.edges.emplace_back(verts.begin(), verts.end());
        }
        fill_common(inst, rng, spec);
        inst.class_hint = "general";
        prepare(inst);
    } else {
        throw ValidationError("unknown instance class '" + cls + "'");
    }
    return loaded;
}

} // namespace shbm
