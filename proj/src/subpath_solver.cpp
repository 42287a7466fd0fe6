#include "shbm/subpath_solver.hpp"

#include "shbm/errors.hpp"
#include "shbm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

namespace shbm {

namespace {

std::vector<int> positions_of(const HypergraphInstance& inst, const PathOrdering& ordering) {
    std::vector<int> position(inst.n_vertices, -1);
    for (int i = 0; i < static_cast<int>(ordering.order.size()); ++i)
        position[ordering.order[i]] = i;
    return position;
}

void require_certificate(const HypergraphInstance& inst, const PathOrdering& ordering) {
    CertificateCheck check = verify_certificate(inst, ClassCertificate(ordering));
    if (!check.ok) throw ValidationError("subpath solver: " + check.violation);
}

struct DpKey {
    std::vector<long long> packed; // strategy followed by loads

    bool operator==(const DpKey& other) const { return packed == other.packed; }
};

struct DpKeyHash {
    std::size_t operator()(const DpKey& key) const {
        std::size_t h = 1469598103934665603ULL;
        for (long long x : key.packed) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

struct DpEntry {
    std::vector<EdgeId> strategy;
    std::vector<long long> loads; // per window position
    Weight weight = 0;
    std::vector<EdgeId> members; // sorted
};

bool lex_less(const std::vector<EdgeId>& a, const std::vector<EdgeId>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void insert_sorted(std::vector<EdgeId>& members, EdgeId e) {
    members.insert(std::upper_bound(members.begin(), members.end(), e), e);
}

// Strips edges incident to 0-capacity vertices (they can never be members and
// are dominated at that vertex by definition) and the 0-capacity vertices
// themselves, renumbering along the ordering.
struct Reduction {
    HypergraphInstance reduced;
    PathOrdering reduced_ordering;
    std::vector<EdgeId> edge_to_original;
};

Reduction reduce_instance(const HypergraphInstance& inst, const PathOrdering& ordering) {
    Reduction red;
    std::vector<VertexId> vertex_map(inst.n_vertices, -1);
    int next = 0;
    for (VertexId v = 0; v < inst.n_vertices; ++v)
        if (inst.capacities[v] > 0) vertex_map[v] = next++;
    red.reduced.n_vertices = next;
    red.reduced.capacities.resize(next);
    for (VertexId v = 0; v < inst.n_vertices; ++v)
        if (vertex_map[v] >= 0) red.reduced.capacities[vertex_map[v]] = inst.capacities[v];

    std::vector<EdgeId> new_id(inst.edge_count(), kNoEdge);
    for (EdgeId e = 0; e < inst.edge_count(); ++e) {
        bool keep = true;
        for (VertexId v : inst.edges[e])
            if (inst.capacities[v] == 0) {
                keep = false;
                break;
            }
        if (!keep) continue;
        new_id[e] = static_cast<EdgeId>(red.edge_to_original.size());
        red.edge_to_original.push_back(e);
        std::vector<VertexId> verts;
        for (VertexId v : inst.edges[e]) verts.push_back(vertex_map[v]);
        std::sort(verts.begin(), verts.end());
        red.reduced.edges.push_back(std::move(verts));
        red.reduced.weights.push_back(inst.weight_of(e));
    }

    red.reduced.preferences.assign(next, {});
    for (VertexId v = 0; v < inst.n_vertices; ++v) {
        if (vertex_map[v] < 0) continue;
        for (EdgeId e : inst.preferences[v])
            if (new_id[e] != kNoEdge) red.reduced.preferences[vertex_map[v]].push_back(new_id[e]);
    }
    prepare(red.reduced);

    for (VertexId v : ordering.order)
        if (vertex_map[v] >= 0) red.reduced_ordering.order.push_back(vertex_map[v]);
    return red;
}

} // namespace

std::vector<EdgeId> order_edges_by_endpoint(const HypergraphInstance& inst,
                                            const PathOrdering& ordering) {
    require_certificate(inst, ordering);
    std::vector<int> position = positions_of(inst, ordering);
    std::vector<EdgeId> order(inst.edge_count());
    std::iota(order.begin(), order.end(), 0);
    auto endpoint = [&](EdgeId e) {
        int hi = -1;
        for (VertexId v : inst.edges[e]) hi = std::max(hi, position[v]);
        return hi;
    };
    auto leftmost = [&](EdgeId e) {
        int lo = inst.n_vertices;
        for (VertexId v : inst.edges[e]) lo = std::min(lo, position[v]);
        return lo;
    };
    std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
        int ea = endpoint(a), eb = endpoint(b);
        if (ea != eb) return ea < eb;
        int la = leftmost(a), lb = leftmost(b);
        if (la != lb) return la < lb;
        return a < b;
    });
    return order;
}

namespace {

// Core DP over the reduced instance (all capacities >= 1).
SubpathResult run_dp(const HypergraphInstance& inst, const PathOrdering& ordering,
                     const SubpathSolveOptions& opts, SubpathDpTrace* trace) {
    const std::vector<int> position = positions_of(inst, ordering);
    const std::vector<EdgeId> order = order_edges_by_endpoint(inst, ordering);
    const int m = inst.edge_count();
    const DerivedParams params = derived_params(inst);
    const int lmax = std::max(params.max_edge_size, 1);

    const long double state_bound =
        m == 0 ? 1.0L
               : std::pow(static_cast<long double>(params.max_degree) *
                              static_cast<long double>(params.max_capacity + 1),
                          static_cast<long double>(params.max_edge_size));

    using StateMap = std::unordered_map<DpKey, DpEntry, DpKeyHash>;

    auto make_key = [](const DpEntry& entry) {
        DpKey key;
        key.packed.reserve(entry.strategy.size() + entry.loads.size());
        for (EdgeId e : entry.strategy) key.packed.push_back(e);
        for (long long load : entry.loads) key.packed.push_back(load);
        return key;
    };

    auto update = [&](StateMap& map, DpEntry entry) {
        DpKey key = make_key(entry);
        auto it = map.find(key);
        if (it == map.end()) {
            map.emplace(std::move(key), std::move(entry));
        } else if (entry.weight > it->second.weight ||
                   (entry.weight == it->second.weight && lex_less(entry.members, it->second.members))) {
            it->second = std::move(entry);
        }
    };

    StateMap states;
    states.emplace(DpKey{}, DpEntry{});
    int win_lo = 0, win_hi = -1; // inclusive positions; empty window initially

    SubpathResult result;
    result.max_state_set = 1;

    if (trace) {
        trace->edge_order = order;
        trace->windows.clear();
        trace->states.clear();
    }

    // Complete on positions [from, to] of the entry's window?
    auto complete_on = [&](const DpEntry& entry, int base_lo, int from, int to) {
        for (int p = from; p <= to; ++p) {
            const int idx = p - base_lo;
            if (entry.strategy[idx] == kNoEdge) continue;
            const VertexId v = ordering.order[p];
            if (entry.loads[idx] != inst.capacities[v]) return false;
        }
        return true;
    };

    for (int step = 0; step < m; ++step) {
        const EdgeId edge = order[step];
        int l_e = -1;
        for (VertexId v : inst.edges[edge]) l_e = std::max(l_e, position[v]);
        const int new_lo = std::max(0, l_e - lmax + 1);
        const int new_hi = l_e;

        // Domain adjustment: drop entries incomplete on the leaving
        // positions, then extend strategies over the entering positions.
        StateMap expanded;
        for (auto& [key, entry] : states) {
            (void)key;
            const int leave_to = std::min(win_hi, new_lo - 1);
            if (!complete_on(entry, win_lo, win_lo, leave_to)) continue;

            DpEntry base;
            base.weight = entry.weight;
            base.members = entry.members;
            const int keep_from = std::max(new_lo, win_lo);
            for (int p = keep_from; p <= win_hi; ++p) {
                base.strategy.push_back(entry.strategy[p - win_lo]);
                base.loads.push_back(entry.loads[p - win_lo]);
            }

            // Odometer over threshold choices for entering positions.
            const int enter_from = std::max(win_hi + 1, new_lo);
            std::vector<std::vector<EdgeId>> choices;
            for (int p = enter_from; p <= new_hi; ++p) {
                const VertexId v = ordering.order[p];
                std::vector<EdgeId> options = inst.incident[v];
                options.push_back(kNoEdge);
                choices.push_back(std::move(options));
            }
            std::vector<std::size_t> pick(choices.size(), 0);
            while (true) {
                DpEntry candidate = base;
                for (std::size_t i = 0; i < choices.size(); ++i) {
                    candidate.strategy.push_back(choices[i][pick[i]]);
                    candidate.loads.push_back(0);
                }
                update(expanded, std::move(candidate));
                std::size_t digit = 0;
                while (digit < pick.size() && ++pick[digit] == choices[digit].size()) {
                    pick[digit] = 0;
                    ++digit;
                }
                if (digit == pick.size()) break;
            }
        }

        win_lo = new_lo;
        win_hi = new_hi;

        // Edge positions within the window.
        std::vector<int> edge_idx;
        for (VertexId v : inst.edges[edge]) edge_idx.push_back(position[v] - win_lo);
        std::sort(edge_idx.begin(), edge_idx.end());

        StateMap next_states;
        for (auto& [key, entry] : expanded) {
            (void)key;
            // Skip branch: the strategy must plan to dominate the edge and no
            // threshold may equal it.
            bool plans = false, owns = false;
            for (int idx : edge_idx) {
                const VertexId v = ordering.order[win_lo + idx];
                const EdgeId threshold = entry.strategy[idx];
                if (threshold == edge) owns = true;
                if (threshold != kNoEdge && inst.prefers(v, threshold, edge)) plans = true;
            }
            if (plans && !owns) update(next_states, entry);

            // Take branch: capacities, thresholds, and compatibility (an
            // unsaturated plan must stay strictly below capacity) all hold.
            bool can_take = true;
            for (int idx : edge_idx) {
                const VertexId v = ordering.order[win_lo + idx];
                const EdgeId threshold = entry.strategy[idx];
                if (entry.loads[idx] + 1 > inst.capacities[v]) {
                    can_take = false;
                    break;
                }
                if (threshold == kNoEdge) {
                    if (entry.loads[idx] + 1 >= inst.capacities[v]) {
                        can_take = false;
                        break;
                    }
                } else if (inst.prefers(v, threshold, edge) && threshold != edge) {
                    can_take = false;
                    break;
                }
            }
            if (can_take) {
                DpEntry taken = entry;
                for (int idx : edge_idx) ++taken.loads[idx];
                taken.weight += inst.weight_of(edge);
                insert_sorted(taken.members, edge);
                update(next_states, std::move(taken));
            }
        }
        states = std::move(next_states);
        result.max_state_set = std::max(result.max_state_set, states.size());
        if (states.size() > opts.state_cap)
            throw BudgetExceededError("subpath DP state set exceeded the configured cap");
        if (static_cast<long double>(states.size()) > state_bound + 0.5L)
            throw InternalError("subpath DP state set exceeded the theoretical bound");

        if (opts.debug_invariants) {
            for (const auto& [key, entry] : states) {
                (void)key;
                // Realizes check, part by part: compatibility, threshold
                // membership, and planned domination of processed blockers.
                BMatching full = matching_from_edges(inst, entry.members);
                for (int p = win_lo; p <= win_hi; ++p) {
                    const int idx = p - win_lo;
                    const VertexId v = ordering.order[p];
                    if (full.loads[v] != entry.loads[idx])
                        throw InternalError("subpath DP: stored loads diverge from members");
                    const EdgeId threshold = entry.strategy[idx];
                    if (threshold == kNoEdge) {
                        if (full.loads[v] >= inst.capacities[v])
                            throw InternalError("subpath DP: unsaturated plan at a saturated vertex");
                    } else {
                        for (EdgeId f : full.members)
                            if (inst.incident_to(v, f) && inst.prefers(v, threshold, f))
                                throw InternalError("subpath DP: member below the planned threshold");
                    }
                }
                std::vector<char> processed(m, 0);
                for (int s = 0; s <= step; ++s) processed[order[s]] = 1;
                for (int p = win_lo; p <= win_hi; ++p) {
                    const EdgeId threshold = entry.strategy[p - win_lo];
                    if (threshold != kNoEdge && processed[threshold] && !full.contains(threshold))
                        throw InternalError("subpath DP: processed threshold not a member");
                }
                for (int s = 0; s <= step; ++s) {
                    const EdgeId e = order[s];
                    if (full.contains(e)) continue;
                    bool dominated = false;
                    for (VertexId v : inst.edges[e])
                        if (is_dominated_at(inst, full, e, v)) {
                            dominated = true;
                            break;
                        }
                    if (dominated) continue;
                    bool planned = false;
                    for (VertexId v : inst.edges[e]) {
                        const int p = position[v];
                        if (p < win_lo || p > win_hi) continue;
                        const EdgeId threshold = entry.strategy[p - win_lo];
                        if (threshold != kNoEdge && inst.prefers(v, threshold, e)) {
                            planned = true;
                            break;
                        }
                    }
                    if (!planned)
                        throw InternalError("subpath DP: processed blocking edge not planned-dominated");
                }
            }
        }

        if (trace) {
            trace->windows.emplace_back(win_lo, win_hi);
            std::vector<SubpathDpEntrySnapshot> snapshot;
            for (const auto& [key, entry] : states) {
                (void)key;
                snapshot.push_back({entry.strategy, entry.loads, entry.weight, entry.members});
            }
            trace->states.push_back(std::move(snapshot));
        }
    }

    // Final filter: completeness over the whole remaining window.
    const DpEntry* best = nullptr;
    for (const auto& [key, entry] : states) {
        (void)key;
        if (!complete_on(entry, win_lo, win_lo, win_hi)) continue;
        if (!best || entry.weight > best->weight ||
            (entry.weight == best->weight && lex_less(entry.members, best->members)))
            best = &entry;
    }
    if (!best) {
        result.exists = false;
        return result;
    }
    result.exists = true;
    result.weight = best->weight;
    result.matching = matching_from_edges(inst, best->members);
    return result;
}

} // namespace

SubpathResult solve_subpath_maxw(const HypergraphInstance& inst, const PathOrdering& ordering,
                                 const SubpathSolveOptions& opts, SubpathDpTrace* trace) {
    require_certificate(inst, ordering);
    Reduction red = reduce_instance(inst, ordering);

    SubpathResult reduced_result = run_dp(red.reduced, red.reduced_ordering, opts, trace);
    if (trace) {
        trace->reduced = red.reduced;
        trace->reduced_ordering = red.reduced_ordering;
        trace->reduced_to_original = red.edge_to_original;
    }
    if (!reduced_result.exists) return reduced_result;

    SubpathResult result;
    result.exists = true;
    result.weight = reduced_result.weight;
    result.max_state_set = reduced_result.max_state_set;
    std::vector<EdgeId> members;
    for (EdgeId e : reduced_result.matching.members) members.push_back(red.edge_to_original[e]);
    result.matching = matching_from_edges(inst, members);
    if (!find_blocking_edges(inst, result.matching).stable())
        throw InternalError("subpath solver returned an unstable matching");
    return result;
}

SubpathResult solve_with_side_constraints(const HypergraphInstance& inst,
                                          const PathOrdering& ordering,
                                          const SideConstraints& constraints,
                                          const SubpathSolveOptions& opts) {
    require_certificate(inst, ordering);
    auto check_ids = [&](const std::vector<EdgeId>& ids) {
        for (EdgeId e : ids)
            if (e < 0 || e >= inst.edge_count())
                throw ValidationError("side constraint refers to unknown edge " + std::to_string(e));
    };
    check_ids(constraints.forced);
    check_ids(constraints.forbidden);
    for (EdgeId e : constraints.forced)
        for (EdgeId f : constraints.forbidden)
            if (e == f)
                throw ValidationError("edge " + std::to_string(e) + " is both forced and forbidden");
    for (VertexId v : constraints.saturate)
        for (VertexId u : constraints.leave_unsaturated)
            if (v == u)
                throw ValidationError("vertex " + std::to_string(v) +
                                      " is both saturate and leave-unsaturated");

    // Modified instance: one private dummy edge per constrained vertex,
    // ranked last by that vertex.
    HypergraphInstance mod = inst;
    mod.prepared = false;
    mod.incident.clear();
    mod.pref_rank.clear();
    if (mod.weights.empty()) mod.weights.assign(inst.edge_count(), 0);
    std::vector<EdgeId> forced = constraints.forced;
    std::vector<EdgeId> forbidden = constraints.forbidden;
    auto add_dummy = [&](VertexId v) {
        if (v < 0 || v >= inst.n_vertices)
            throw ValidationError("side constraint refers to unknown vertex " + std::to_string(v));
        EdgeId id = mod.edge_count();
        mod.edges.push_back({v});
        mod.weights.push_back(0);
        mod.preferences[v].push_back(id);
        return id;
    };
    for (VertexId v : constraints.saturate) forbidden.push_back(add_dummy(v));
    for (VertexId v : constraints.leave_unsaturated) forced.push_back(add_dummy(v));
    prepare(mod);

    // Weight shift dominating any original weight variation both ways.
    const Weight shift = 1 + 2 * mod.total_abs_weight();
    for (EdgeId e : forced) mod.weights[e] += shift;
    for (EdgeId e : forbidden) mod.weights[e] -= shift;

    SubpathResult shifted = solve_subpath_maxw(mod, ordering, opts);
    SubpathResult result;
    result.max_state_set = shifted.max_state_set;
    if (!shifted.exists) return result;
    for (EdgeId e : forced)
        if (!shifted.matching.contains(e)) return result; // no stable matching fits
    for (EdgeId e : forbidden)
        if (shifted.matching.contains(e)) return result;

    std::vector<EdgeId> members;
    for (EdgeId e : shifted.matching.members)
        if (e < inst.edge_count()) members.push_back(e);
    result.exists = true;
    result.matching = matching_from_edges(inst, members);
    for (EdgeId e : result.matching.members) result.weight += inst.weight_of(e);
    if (!find_blocking_edges(inst, result.matching).stable())
        throw InternalError("constrained subpath solve returned an unstable matching");
    return result;
}

} // namespace shbm
