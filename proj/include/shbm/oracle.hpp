#ifndef SHBM_ORACLE_HPP
#define SHBM_ORACLE_HPP

#include "shbm/hypergraph.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace shbm {

// True iff v is saturated in m and every member edge at v is strictly
// preferred to e by v. A 0-capacity vertex is always saturated and therefore
// dominates every incident edge. Throws if v is not in e or m is infeasible.
bool is_dominated_at(const HypergraphInstance& inst, const BMatching& m, EdgeId e, VertexId v);

struct BlockingReport {
    std::vector<EdgeId> blocking_edges; // ascending
    // For every non-member edge that does not block: the first (lowest-id)
    // vertex at which it is dominated.
    std::vector<std::pair<EdgeId, VertexId>> domination_witness;

    bool stable() const { return blocking_edges.empty(); }
};

// Exact blocking set per the stability definition; empty iff m is stable.
BlockingReport find_blocking_edges(const HypergraphInstance& inst, const BMatching& m);

inline constexpr int kDefaultEnumerationBudget = 25;

// All feasible stable b-matchings, enumerated by increasing member count and
// lexicographic member set, truncated at `limit`. Throws BudgetExceededError
// when the edge count exceeds `budget_edges`.
std::vector<BMatching> enumerate_stable(const HypergraphInstance& inst,
                                        std::size_t limit = SIZE_MAX,
                                        int budget_edges = kDefaultEnumerationBudget);

struct MaxwBruteforceResult {
    bool exists = false; // false: no stable b-matching at all
    BMatching matching;
    Weight weight = 0;
};

// Brute-force maximum-weight stable b-matching; ties broken by the
// lexicographically smallest member-edge id set.
MaxwBruteforceResult maxw_stable_bruteforce(const HypergraphInstance& inst,
                                            int budget_edges = kDefaultEnumerationBudget);

// Existence-only search: is there a stable b-matching containing all of
// `required`? Stops at the first witness. Used as an oracle for the
// hardness-reduction checks.
std::optional<BMatching> find_stable_containing(const HypergraphInstance& inst,
                                                const std::vector<EdgeId>& required,
                                                int budget_edges = kDefaultEnumerationBudget);

} // namespace shbm

#endif
