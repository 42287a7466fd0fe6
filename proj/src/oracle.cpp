#include "shbm/oracle.hpp"

#include "shbm/errors.hpp"

#include <algorithm>
#include <string>

namespace shbm {

bool is_dominated_at(const HypergraphInstance& inst, const BMatching& m, EdgeId e, VertexId v) {
    if (!inst.incident_to(v, e))
        throw InternalError("is_dominated_at: vertex " + std::to_string(v) +
                            " not incident to edge " + std::to_string(e));
    if (m.loads[v] < inst.capacities[v]) return false; // unsaturated
    const int rank_e = inst.rank_of(v, e);
    for (EdgeId f : m.members) {
        const int rank_f = inst.pref_rank[v][f];
        if (rank_f < 0) continue; // f not at v
        if (rank_f >= rank_e) return false;
    }
    return true;
}

BlockingReport find_blocking_edges(const HypergraphInstance& inst, const BMatching& m) {
    if (!is_feasible(inst, m))
        throw ValidationError("find_blocking_edges: matching is infeasible");
    BlockingReport report;
    for (EdgeId e = 0; e < inst.edge_count(); ++e) {
        if (m.contains(e)) continue;
        VertexId dominator = -1;
        for (VertexId v : inst.edges[e]) {
            if (is_dominated_at(inst, m, e, v)) {
                dominator = v;
                break;
            }
        }
        if (dominator < 0)
            report.blocking_edges.push_back(e);
        else
            report.domination_witness.emplace_back(e, dominator);
    }
    return report;
}

namespace {

bool is_stable(const HypergraphInstance& inst, const BMatching& m) {
    for (EdgeId e = 0; e < inst.edge_count(); ++e) {
        if (m.contains(e)) continue;
        bool dominated = false;
        for (VertexId v : inst.edges[e]) {
            if (m.loads[v] < inst.capacities[v]) continue;
            const int rank_e = inst.pref_rank[v][e];
            bool all_better = true;
            for (EdgeId f : m.members) {
                const int rank_f = inst.pref_rank[v][f];
                if (rank_f >= 0 && rank_f >= rank_e) {
                    all_better = false;
                    break;
                }
            }
            if (all_better) {
                dominated = true;
                break;
            }
        }
        if (!dominated) return false;
    }
    return true;
}

void check_budget(const HypergraphInstance& inst, int budget_edges, const char* op) {
    if (inst.edge_count() > budget_edges)
        throw BudgetExceededError(std::string(op) + ": " + std::to_string(inst.edge_count()) +
                                  " edges exceed the enumeration budget of " +
                                  std::to_string(budget_edges));
}

// Enumerates k-subsets of edges in lexicographic order with incremental
// oversaturation pruning; invokes sink on each feasible subset.
template <typename Sink>
void for_each_feasible_of_size(const HypergraphInstance& inst, int k, Sink&& sink) {
    const int m = inst.edge_count();
    BMatching current = empty_matching(inst);
    std::vector<EdgeId> chosen;
    chosen.reserve(k);

    auto recurse = [&](auto&& self, int next) -> bool {
        if (static_cast<int>(chosen.size()) == k) return sink(current);
        if (m - next < k - static_cast<int>(chosen.size())) return true;
        for (EdgeId e = next; e < m; ++e) {
            bool fits = true;
            for (VertexId v : inst.edges[e])
                if (current.loads[v] + 1 > inst.capacities[v]) {
                    fits = false;
                    break;
                }
            if (!fits) continue;
            current.add(inst, e);
            chosen.push_back(e);
            const bool keep_going = self(self, e + 1);
            chosen.pop_back();
            current.remove(inst, e);
            if (!keep_going) return false;
        }
        return true;
    };
    recurse(recurse, 0);
}

} // namespace

std::vector<BMatching> enumerate_stable(const HypergraphInstance& inst, std::size_t limit,
                                        int budget_edges) {
    check_budget(inst, budget_edges, "enumerate_stable");
    std::vector<BMatching> out;
    if (limit == 0) return out;
    for (int k = 0; k <= inst.edge_count(); ++k) {
        const bool keep_going = [&] {
            bool more = true;
            for_each_feasible_of_size(inst, k, [&](const BMatching& m) {
                if (find_blocking_edges(inst, m).stable()) {
                    out.push_back(m);
                    if (out.size() >= limit) {
                        more = false;
                        return false;
                    }
                }
                return true;
            });
            return more;
        }();
        if (!keep_going) break;
    }
    return out;
}

namespace {

bool lex_less(const std::vector<EdgeId>& a, const std::vector<EdgeId>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// DFS over include/exclude decisions in edge-id order with oversaturation
// pruning. Visits every feasible subset exactly once.
template <typename Sink>
void for_each_feasible(const HypergraphInstance& inst, Sink&& sink) {
    const int m = inst.edge_count();
    BMatching current = empty_matching(inst);
    auto recurse = [&](auto&& self, EdgeId next) -> bool {
        if (next == m) return sink(current);
        bool fits = true;
        for (VertexId v : inst.edges[next])
            if (current.loads[v] + 1 > inst.capacities[v]) {
                fits = false;
                break;
            }
        if (fits) {
            current.add(inst, next);
            const bool keep_going = self(self, next + 1);
            current.remove(inst, next);
            if (!keep_going) return false;
        }
        return self(self, next + 1);
    };
    recurse(recurse, 0);
}

} // namespace

MaxwBruteforceResult maxw_stable_bruteforce(const HypergraphInstance& inst, int budget_edges) {
    check_budget(inst, budget_edges, "maxw_stable_bruteforce");
    MaxwBruteforceResult best;
    for_each_feasible(inst, [&](const BMatching& m) {
        if (!is_stable(inst, m)) return true;
        Weight w = 0;
        for (EdgeId e : m.members) w += inst.weight_of(e);
        if (!best.exists || w > best.weight ||
            (w == best.weight && lex_less(m.members, best.matching.members))) {
            best.exists = true;
            best.weight = w;
            best.matching = m;
        }
        return true;
    });
    return best;
}

std::optional<BMatching> find_stable_containing(const HypergraphInstance& inst,
                                                const std::vector<EdgeId>& required,
                                                int budget_edges) {
    check_budget(inst, budget_edges, "find_stable_containing");
    BMatching seed = empty_matching(inst);
    for (EdgeId e : required) {
        if (seed.contains(e)) continue;
        seed.add(inst, e);
    }
    if (!is_feasible(inst, seed)) return std::nullopt;

    std::optional<BMatching> found;
    BMatching current = seed;
    auto recurse = [&](auto&& self, EdgeId next) -> bool {
        if (next == inst.edge_count()) {
            if (is_stable(inst, current)) {
                found = current;
                return false;
            }
            return true;
        }
        if (current.contains(next)) return self(self, next + 1);
        bool fits = true;
        for (VertexId v : inst.edges[next])
            if (current.loads[v] + 1 > inst.capacities[v]) {
                fits = false;
                break;
            }
        if (fits) {
            current.add(inst, next);
            const bool keep_going = self(self, next + 1);
            current.remove(inst, next);
            if (!keep_going) return false;
        }
        return self(self, next + 1);
    };
    recurse(recurse, 0);
    return found;
}

} // namespace shbm
