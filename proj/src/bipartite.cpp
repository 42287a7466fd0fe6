#include "shbm/bipartite.hpp"

#include "shbm/errors.hpp"
#include "shbm/oracle.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <string>

namespace shbm {

BipartiteView make_bipartite_view(const HypergraphInstance& inst, std::vector<int> side) {
    if (static_cast<int>(side.size()) != inst.n_vertices)
        throw ValidationError("bipartition has wrong length");
    for (int s : side)
        if (s != 0 && s != 1) throw ValidationError("bipartition entries must be 0 or 1");
    for (EdgeId e = 0; e < inst.edge_count(); ++e) {
        const auto& verts = inst.edges[e];
        if (verts.size() != 2 || side[verts[0]] == side[verts[1]])
            throw ValidationError("edge " + std::to_string(e) +
                                  " does not join the two sides of the bipartition");
    }
    BipartiteView view;
    view.inst = &inst;
    view.side = std::move(side);
    return view;
}

BMatching deferred_acceptance(const BipartiteView& view, int proposing_side) {
    const HypergraphInstance& inst = view.instance();
    if (proposing_side != 0 && proposing_side != 1)
        throw ValidationError("proposing side must be 0 or 1");

    BMatching matching = empty_matching(inst);
    std::vector<std::size_t> cursor(inst.n_vertices, 0);
    std::deque<VertexId> agenda;
    std::vector<char> queued(inst.n_vertices, 0);
    for (VertexId v = 0; v < inst.n_vertices; ++v)
        if (view.side[v] == proposing_side && !inst.preferences[v].empty() &&
            inst.capacities[v] > 0) {
            agenda.push_back(v);
            queued[v] = 1;
        }

    auto other_end = [&](EdgeId e, VertexId v) {
        const auto& verts = inst.edges[e];
        return verts[0] == v ? verts[1] : verts[0];
    };
    auto enqueue = [&](VertexId v) {
        if (!queued[v] && cursor[v] < inst.preferences[v].size() &&
            matching.loads[v] < inst.capacities[v]) {
            agenda.push_back(v);
            queued[v] = 1;
        }
    };

    while (!agenda.empty()) {
        VertexId proposer = agenda.front();
        agenda.pop_front();
        queued[proposer] = 0;
        while (matching.loads[proposer] < inst.capacities[proposer] &&
               cursor[proposer] < inst.preferences[proposer].size()) {
            EdgeId e = inst.preferences[proposer][cursor[proposer]++];
            VertexId receiver = other_end(e, proposer);
            if (inst.capacities[receiver] == 0) continue; // always rejects
            matching.add(inst, e);
            if (matching.loads[receiver] > inst.capacities[receiver]) {
                // Receiver drops its worst held edge.
                EdgeId worst = kNoEdge;
                int worst_rank = -1;
                for (EdgeId f : matching.members) {
                    int rank = inst.pref_rank[receiver][f];
                    if (rank > worst_rank) {
                        worst_rank = rank;
                        worst = f;
                    }
                }
                matching.remove(inst, worst);
                if (worst != e) enqueue(other_end(worst, receiver));
            }
        }
    }
    return matching;
}

bool rural_hospitals_check(const BipartiteView& view, const BMatching& m1, const BMatching& m2) {
    const HypergraphInstance& inst = view.instance();
    if (!find_blocking_edges(inst, m1).stable())
        throw ValidationError("rural_hospitals_check: first matching is not stable");
    if (!find_blocking_edges(inst, m2).stable())
        throw ValidationError("rural_hospitals_check: second matching is not stable");
    return m1.loads == m2.loads;
}

namespace {

// ---- one-to-one rotation machinery (clone market) ----

struct Marriage {
    int n_men = 0;
    int n_women = 0;
    std::vector<std::vector<int>> men_pref;  // women, best first
    std::vector<std::vector<int>> women_pref; // men, best first
    std::vector<std::vector<int>> men_rank;  // men_rank[m][w], INT_MAX if unacceptable
    std::vector<std::vector<int>> women_rank;
};

constexpr int kUnranked = std::numeric_limits<int>::max();

void build_ranks(Marriage& mk) {
    mk.men_rank.assign(mk.n_men, std::vector<int>(mk.n_women, kUnranked));
    mk.women_rank.assign(mk.n_women, std::vector<int>(mk.n_men, kUnranked));
    for (int m = 0; m < mk.n_men; ++m)
        for (int r = 0; r < static_cast<int>(mk.men_pref[m].size()); ++r)
            mk.men_rank[m][mk.men_pref[m][r]] = r;
    for (int w = 0; w < mk.n_women; ++w)
        for (int r = 0; r < static_cast<int>(mk.women_pref[w].size()); ++r)
            mk.women_rank[w][mk.women_pref[w][r]] = r;
}

// Man-proposing DA over (possibly reduced) lists. wife[m] / husband[w] = -1.
void marriage_da(const Marriage& mk, const std::vector<std::vector<int>>& men_lists,
                 std::vector<int>& wife, std::vector<int>& husband) {
    wife.assign(mk.n_men, -1);
    husband.assign(mk.n_women, -1);
    std::vector<std::size_t> cursor(mk.n_men, 0);
    std::deque<int> agenda;
    for (int m = 0; m < mk.n_men; ++m) agenda.push_back(m);
    while (!agenda.empty()) {
        int m = agenda.front();
        agenda.pop_front();
        while (wife[m] < 0 && cursor[m] < men_lists[m].size()) {
            int w = men_lists[m][cursor[m]++];
            int rival = husband[w];
            if (rival < 0) {
                wife[m] = w;
                husband[w] = m;
            } else if (mk.women_rank[w][m] < mk.women_rank[w][rival]) {
                wife[rival] = -1;
                wife[m] = w;
                husband[w] = m;
                agenda.push_back(rival);
            }
        }
    }
}

struct Rotation {
    std::vector<int> men;       // cycle order
    std::vector<int> from_wife; // aligned with men
    std::vector<int> to_wife;
    Weight delta = 0;
};

struct RotationPoset {
    std::vector<Rotation> rotations;               // discovery order
    std::vector<std::vector<int>> predecessors;    // rule-1 + rule-2 edges
    std::vector<int> man_optimal_wife;             // M0
};

// Finds all rotations by exhaustive elimination starting from the
// man-optimal matching on GS-reduced lists.
RotationPoset build_rotation_poset(const Marriage& mk) {
    RotationPoset poset;

    // Man-optimal matching on the full lists.
    std::vector<int> wife0, husband0;
    marriage_da(mk, mk.men_pref, wife0, husband0);
    poset.man_optimal_wife = wife0;

    // Man-side reduction: a matched woman never does worse than her M0
    // partner, so men she ranks below him are deleted. Pairs of unmatched
    // women stay: such a woman blocks any attempt to move a man below her,
    // which the successor scan must see.
    std::vector<std::vector<int>> men_lists(mk.n_men);
    for (int m = 0; m < mk.n_men; ++m) {
        if (wife0[m] < 0) continue; // unmatched in every stable matching
        for (int w : mk.men_pref[m]) {
            if (husband0[w] >= 0 &&
                mk.women_rank[w][husband0[w]] < mk.women_rank[w][m])
                continue;
            men_lists[m].push_back(w);
        }
    }
    // Woman-side reduction via the woman-optimal matching.
    Marriage flipped;
    flipped.n_men = mk.n_women;
    flipped.n_women = mk.n_men;
    flipped.men_pref.assign(mk.n_women, {});
    for (int w = 0; w < mk.n_women; ++w)
        for (int m : mk.women_pref[w])
            if (std::find(men_lists[m].begin(), men_lists[m].end(), w) != men_lists[m].end())
                flipped.men_pref[w].push_back(m);
    flipped.women_pref = men_lists;
    build_ranks(flipped);
    std::vector<int> wifez_w, husbandz_m;
    marriage_da(flipped, flipped.men_pref, wifez_w, husbandz_m);
    // husbandz_m[m] = woman matched to m in the woman-optimal matching.
    std::vector<std::vector<int>> gs(mk.n_men);
    for (int m = 0; m < mk.n_men; ++m) {
        int floor_w = husbandz_m[m];
        for (int w : men_lists[m]) {
            gs[m].push_back(w);
            if (w == floor_w) break; // nothing below the woman-optimal wife survives
        }
    }

    // Position of each woman in each man's GS-list for the rule-2 scan.
    std::vector<std::vector<int>> gs_pos(mk.n_men, std::vector<int>(mk.n_women, -1));
    for (int m = 0; m < mk.n_men; ++m)
        for (int i = 0; i < static_cast<int>(gs[m].size()); ++i) gs_pos[m][gs[m][i]] = i;

    std::vector<int> wife = wife0;
    std::vector<int> husband = husband0;

    // Per-man and per-woman rotation history for precedence edges.
    std::vector<std::vector<int>> man_chain(mk.n_men);   // rotations moving m
    std::vector<std::vector<int>> woman_chain(mk.n_women); // rotations improving w

    auto s_m = [&](int m) -> int {
        if (wife[m] < 0) return -1;
        int start = gs_pos[m][wife[m]];
        for (int i = start + 1; i < static_cast<int>(gs[m].size()); ++i) {
            int w = gs[m][i];
            int current = husband[w];
            // An unmatched woman would block anything below her: dead end.
            if (current < 0) return -1;
            if (mk.women_rank[w][m] < mk.women_rank[w][current]) return w;
        }
        return -1;
    };

    while (true) {
        // Functional graph next(m) = husband of s_M(m); find any cycle.
        std::vector<int> color(mk.n_men, 0);
        std::vector<int> cycle;
        for (int seed = 0; seed < mk.n_men && cycle.empty(); ++seed) {
            if (color[seed] != 0) continue;
            std::vector<int> trail;
            int cur = seed;
            while (cur >= 0 && color[cur] == 0) {
                color[cur] = 1;
                trail.push_back(cur);
                int w = s_m(cur);
                cur = w < 0 ? -1 : husband[w];
            }
            if (cur >= 0 && color[cur] == 1) {
                auto it = std::find(trail.begin(), trail.end(), cur);
                cycle.assign(it, trail.end());
            }
            for (int v : trail) color[v] = 2;
        }
        if (cycle.empty()) break;

        Rotation rot;
        for (int m : cycle) {
            rot.men.push_back(m);
            rot.from_wife.push_back(wife[m]);
            rot.to_wife.push_back(s_m(m));
        }
        const int rot_id = static_cast<int>(poset.rotations.size());
        for (std::size_t i = 0; i < rot.men.size(); ++i) {
            int m = rot.men[i];
            int w_new = rot.to_wife[i];
            wife[m] = w_new;
            husband[w_new] = m;
            man_chain[m].push_back(rot_id);
            woman_chain[w_new].push_back(rot_id);
        }
        // from-wives keep their new (previous-in-cycle) husbands via the
        // assignments above; a from-wife that is nobody's to-wife cannot
        // happen inside a cycle.
        poset.rotations.push_back(std::move(rot));
    }

    // Precedence edges.
    poset.predecessors.assign(poset.rotations.size(), {});
    std::vector<std::vector<int>> man_seen(mk.n_men); // prefix of man_chain while scanning
    // Rebuild chains chronologically: rule 1 uses the previous rotation of m,
    // rule 2 uses the first rotation lifting w strictly above m.
    for (int r = 0; r < static_cast<int>(poset.rotations.size()); ++r) {
        const Rotation& rot = poset.rotations[r];
        for (std::size_t i = 0; i < rot.men.size(); ++i) {
            const int m = rot.men[i];
            // Rule 1: the rotation that moved m onto from_wife.
            const auto& chain = man_chain[m];
            auto self_pos = std::find(chain.begin(), chain.end(), r);
            if (self_pos != chain.begin() && self_pos != chain.end())
                poset.predecessors[r].push_back(*std::prev(self_pos));
            // Rule 2: skipped women must already have been lifted above m.
            const int lo = gs_pos[m][rot.from_wife[i]];
            const int hi = gs_pos[m][rot.to_wife[i]];
            for (int pos = lo + 1; pos < hi; ++pos) {
                const int w = gs[m][pos];
                int lifter = -1;
                for (int candidate : woman_chain[w]) {
                    if (candidate >= r) break;
                    const Rotation& rc = poset.rotations[candidate];
                    for (std::size_t j = 0; j < rc.men.size(); ++j) {
                        if (rc.to_wife[j] == w &&
                            mk.women_rank[w][rc.men[j]] < mk.women_rank[w][m]) {
                            lifter = candidate;
                            break;
                        }
                    }
                    if (lifter >= 0) break;
                }
                if (lifter >= 0) poset.predecessors[r].push_back(lifter);
            }
        }
        auto& preds = poset.predecessors[r];
        std::sort(preds.begin(), preds.end());
        preds.erase(std::unique(preds.begin(), preds.end()), preds.end());
    }
    return poset;
}

// ---- max-weight closure via Dinic ----

struct Dinic {
    struct Arc {
        int to;
        long long cap;
        int rev;
    };
    std::vector<std::vector<Arc>> graph;
    std::vector<int> level, iter;

    explicit Dinic(int n) : graph(n), level(n), iter(n) {}

    void add_arc(int from, int to, long long cap) {
        graph[from].push_back({to, cap, static_cast<int>(graph[to].size())});
        graph[to].push_back({from, 0, static_cast<int>(graph[from].size()) - 1});
    }

    bool bfs(int s, int t) {
        std::fill(level.begin(), level.end(), -1);
        std::deque<int> queue{s};
        level[s] = 0;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (const Arc& arc : graph[v])
                if (arc.cap > 0 && level[arc.to] < 0) {
                    level[arc.to] = level[v] + 1;
                    queue.push_back(arc.to);
                }
        }
        return level[t] >= 0;
    }

    long long dfs(int v, int t, long long flow) {
        if (v == t) return flow;
        for (int& i = iter[v]; i < static_cast<int>(graph[v].size()); ++i) {
            Arc& arc = graph[v][i];
            if (arc.cap <= 0 || level[arc.to] != level[v] + 1) continue;
            long long pushed = dfs(arc.to, t, std::min(flow, arc.cap));
            if (pushed > 0) {
                arc.cap -= pushed;
                graph[arc.to][arc.rev].cap += pushed;
                return pushed;
            }
        }
        return 0;
    }

    long long max_flow(int s, int t) {
        long long total = 0;
        while (bfs(s, t)) {
            std::fill(iter.begin(), iter.end(), 0);
            while (long long pushed = dfs(s, t, std::numeric_limits<long long>::max()))
                total += pushed;
        }
        return total;
    }

    std::vector<char> source_side(int s) {
        std::vector<char> mark(graph.size(), 0);
        std::deque<int> queue{s};
        mark[s] = 1;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (const Arc& arc : graph[v])
                if (arc.cap > 0 && !mark[arc.to]) {
                    mark[arc.to] = 1;
                    queue.push_back(arc.to);
                }
        }
        return mark;
    }
};

// Max-weight subset closed under predecessors.
std::vector<char> max_weight_closure(const std::vector<Weight>& node_weight,
                                     const std::vector<std::vector<int>>& predecessors) {
    const int n = static_cast<int>(node_weight.size());
    Dinic dinic(n + 2);
    const int source = n, sink = n + 1;
    const long long inf = std::numeric_limits<long long>::max() / 4;
    for (int v = 0; v < n; ++v) {
        if (node_weight[v] > 0)
            dinic.add_arc(source, v, node_weight[v]);
        else if (node_weight[v] < 0)
            dinic.add_arc(v, sink, -node_weight[v]);
        for (int p : predecessors[v]) dinic.add_arc(v, p, inf);
    }
    dinic.max_flow(source, sink);
    std::vector<char> mark = dinic.source_side(source);
    mark.resize(n);
    return mark;
}

} // namespace

BipartiteMaxwResult maxw_stable(const BipartiteView& view, MaxwMethod method) {
    const HypergraphInstance& inst = view.instance();

    // Edges touching 0-capacity vertices can never be members and are always
    // dominated there; they play no role in either route.
    std::vector<EdgeId> live;
    for (EdgeId e = 0; e < inst.edge_count(); ++e) {
        bool keep = true;
        for (VertexId v : inst.edges[e])
            if (inst.capacities[v] == 0) keep = false;
        if (keep) live.push_back(e);
    }

    bool parallel_free = true;
    {
        std::map<std::pair<VertexId, VertexId>, int> seen;
        for (EdgeId e : live)
            if (++seen[{inst.edges[e][0], inst.edges[e][1]}] > 1) parallel_free = false;
    }
    auto unit_side = [&](int s) {
        for (EdgeId e : live)
            for (VertexId v : inst.edges[e])
                if (view.side[v] == s && inst.capacities[v] != 1) return false;
        return true;
    };

    if (method == MaxwMethod::Auto) {
        if (static_cast<int>(live.size()) <= 18)
            method = MaxwMethod::Enumerate;
        else if (parallel_free && (unit_side(0) || unit_side(1)))
            method = MaxwMethod::Rotations;
        else
            throw BudgetExceededError(
                "maxw_stable: many-to-many instance beyond the enumeration budget");
    }

    if (method == MaxwMethod::Enumerate) {
        if (static_cast<int>(live.size()) > kDefaultEnumerationBudget)
            throw BudgetExceededError("maxw_stable: instance beyond the enumeration budget");
        // Dead edges prune immediately, so budget by the live count.
        MaxwBruteforceResult brute = maxw_stable_bruteforce(
            inst, std::max(kDefaultEnumerationBudget, inst.edge_count()));
        if (!brute.exists)
            throw InternalError("bipartite instance without a stable b-matching");
        return {brute.matching, brute.weight};
    }

    if (!parallel_free)
        throw ValidationError("maxw_stable rotations: parallel edges are not supported");
    int men_side;
    if (unit_side(0))
        men_side = 0;
    else if (unit_side(1))
        men_side = 1;
    else
        throw ValidationError("maxw_stable rotations: neither side has unit capacities");

    // Clone market: unit-side vertices become men, the other side splits into
    // capacity-many unit clones ranked consecutively. A capacity beyond
    // degree+1 behaves identically to degree+1 (the vertex can never be
    // saturated either way), which bounds the clone count.
    std::vector<int> live_degree(inst.n_vertices, 0);
    for (EdgeId e : live)
        for (VertexId v : inst.edges[e]) ++live_degree[v];
    std::vector<int> eff_cap(inst.n_vertices, 0);
    for (VertexId v = 0; v < inst.n_vertices; ++v)
        eff_cap[v] = static_cast<int>(
            std::min<long long>(inst.capacities[v], live_degree[v] + 1));

    std::vector<int> man_of_vertex(inst.n_vertices, -1);
    std::vector<VertexId> vertex_of_man;
    std::vector<int> clone_base(inst.n_vertices, -1);
    Marriage mk;
    for (VertexId v = 0; v < inst.n_vertices; ++v) {
        if (view.side[v] == men_side) {
            if (live_degree[v] > 0 && inst.capacities[v] > 0) {
                man_of_vertex[v] = mk.n_men++;
                vertex_of_man.push_back(v);
            }
        } else if (eff_cap[v] > 0) {
            clone_base[v] = mk.n_women;
            mk.n_women += eff_cap[v];
        }
    }

    std::vector<char> live_mark(inst.edge_count(), 0);
    for (EdgeId e : live) live_mark[e] = 1;
    auto edge_endpoints = [&](EdgeId e) {
        VertexId a = inst.edges[e][0], b = inst.edges[e][1];
        if (view.side[a] != men_side) std::swap(a, b);
        return std::make_pair(a, b); // (man vertex, woman vertex)
    };

    mk.men_pref.assign(mk.n_men, {});
    mk.women_pref.assign(mk.n_women, {});
    std::map<std::pair<int, int>, EdgeId> pair_edge;
    for (int m = 0; m < mk.n_men; ++m) {
        VertexId v = vertex_of_man[m];
        for (EdgeId e : inst.preferences[v]) {
            if (!live_mark[e]) continue;
            VertexId w = edge_endpoints(e).second;
            for (int t = 0; t < eff_cap[w]; ++t) {
                mk.men_pref[m].push_back(clone_base[w] + t);
                pair_edge[{m, clone_base[w] + t}] = e;
            }
        }
    }
    for (VertexId v = 0; v < inst.n_vertices; ++v) {
        if (clone_base[v] < 0) continue;
        std::vector<int> men_order;
        for (EdgeId e : inst.preferences[v]) {
            if (!live_mark[e]) continue;
            men_order.push_back(man_of_vertex[edge_endpoints(e).first]);
        }
        for (int t = 0; t < eff_cap[v]; ++t) mk.women_pref[clone_base[v] + t] = men_order;
    }
    build_ranks(mk);

    RotationPoset poset = build_rotation_poset(mk);

    std::vector<Weight> rot_weight(poset.rotations.size(), 0);
    auto pair_w = [&](int m, int w) { return inst.weight_of(pair_edge.at({m, w})); };
    for (std::size_t r = 0; r < poset.rotations.size(); ++r) {
        const Rotation& rot = poset.rotations[r];
        for (std::size_t i = 0; i < rot.men.size(); ++i)
            rot_weight[r] += pair_w(rot.men[i], rot.to_wife[i]) - pair_w(rot.men[i], rot.from_wife[i]);
    }
    std::vector<char> chosen = max_weight_closure(rot_weight, poset.predecessors);

    // Eliminate the chosen rotations in discovery order (a linear extension).
    std::vector<int> wife = poset.man_optimal_wife;
    for (std::size_t r = 0; r < poset.rotations.size(); ++r) {
        if (!chosen[r]) continue;
        const Rotation& rot = poset.rotations[r];
        for (std::size_t i = 0; i < rot.men.size(); ++i) wife[rot.men[i]] = rot.to_wife[i];
    }

    std::vector<EdgeId> members;
    for (int m = 0; m < mk.n_men; ++m)
        if (wife[m] >= 0) members.push_back(pair_edge.at({m, wife[m]}));
    BipartiteMaxwResult result;
    result.matching = matching_from_edges(inst, members);
    for (EdgeId e : result.matching.members) result.weight += inst.weight_of(e);
    if (!find_blocking_edges(inst, result.matching).stable())
        throw InternalError("rotation pipeline produced an unstable matching");
    return result;
}

} // namespace shbm
