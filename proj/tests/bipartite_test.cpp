#include "shbm/bipartite.hpp"
#include "shbm/errors.hpp"
#include "shbm/generators.hpp"
#include "shbm/oracle.hpp"
#include "shbm/uda.hpp"

#include <doctest.h>

#include "test_support.hpp"

#include <set>

using namespace shbm;
using shbm_test::build_instance;
using shbm_test::gen_random_bipartite;

namespace {

BipartiteView view_of(const shbm_test::RandomBipartite& rb) {
    return make_bipartite_view(rb.instance, rb.side);
}

Weight weight_of(const HypergraphInstance& inst, const BMatching& m) {
    Weight w = 0;
    for (EdgeId e : m.members) w += inst.weight_of(e);
    return w;
}

} // namespace

TEST_CASE("textbook 2x2 market: proposer-optimal outcomes differ by side") {
    // Left 0,1; right 2,3. Edges: 0={0,2}, 1={0,3}, 2={1,2}, 3={1,3}.
    // Left agents and right agents have opposed tastes.
    auto inst = build_instance(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}},
                               {{0, 1}, {3, 2}, {2, 0}, {1, 3}});
    BipartiteView view = make_bipartite_view(inst, {0, 0, 1, 1});
    BMatching left = deferred_acceptance(view, 0);
    BMatching right = deferred_acceptance(view, 1);
    CHECK(find_blocking_edges(inst, left).stable());
    CHECK(find_blocking_edges(inst, right).stable());
    CHECK(left.members == std::vector<EdgeId>{0, 3});
    CHECK(right.members == std::vector<EdgeId>{1, 2});
}

TEST_CASE("deferred acceptance is stable on random many-to-many instances") {
    for (unsigned long long seed = 1; seed <= 80; ++seed) {
        auto rb = gen_random_bipartite(seed, 4, 4, 10, 3, 4);
        BipartiteView view = view_of(rb);
        for (int side = 0; side < 2; ++side) {
            BMatching m = deferred_acceptance(view, side);
            CHECK(find_blocking_edges(rb.instance, m).stable());
        }
    }
}

TEST_CASE("proposer-optimality against full enumeration (unit proposers)") {
    for (unsigned long long seed = 1; seed <= 40; ++seed) {
        auto rb = gen_random_bipartite(seed, 4, 3, 9, 3, 0, /*unit_left=*/true);
        const auto& inst = rb.instance;
        BMatching da = deferred_acceptance(view_of(rb), 0);
        auto all = enumerate_stable(inst);
        for (const auto& m : all) {
            for (VertexId v = 0; v < inst.n_vertices; ++v) {
                if (rb.side[v] != 0) continue;
                // Rank of the DA edge vs. this stable matching's edge at v.
                auto rank_of = [&](const BMatching& mm) {
                    int best = inst.edge_count() + 1; // unmatched = worst
                    for (EdgeId e : mm.members)
                        if (inst.pref_rank[v][e] >= 0)
                            best = std::min(best, inst.pref_rank[v][e]);
                    return best;
                };
                CHECK(rank_of(da) <= rank_of(m));
            }
        }
    }
}

TEST_CASE("rural hospitals: per-vertex loads coincide across stable matchings") {
    for (unsigned long long seed = 1; seed <= 60; ++seed) {
        auto rb = gen_random_bipartite(seed, 4, 3, 9, 3, 3);
        BipartiteView view = view_of(rb);
        BMatching m1 = deferred_acceptance(view, 0);
        BMatching m2 = deferred_acceptance(view, 1);
        CHECK(rural_hospitals_check(view, m1, m1));
        CHECK(rural_hospitals_check(view, m1, m2));
        for (const auto& m : enumerate_stable(rb.instance)) CHECK(m.loads == m1.loads);
    }
}

TEST_CASE("rural hospitals check rejects unstable input") {
    auto inst = build_instance(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}},
                               {{0, 1}, {3, 2}, {2, 0}, {1, 3}});
    BipartiteView view = make_bipartite_view(inst, {0, 0, 1, 1});
    BMatching stable = deferred_acceptance(view, 0);
    BMatching unstable = matching_from_edges(inst, {1});
    REQUIRE_FALSE(find_blocking_edges(inst, unstable).stable());
    CHECK_THROWS_AS(rural_hospitals_check(view, stable, unstable), ValidationError);
}

TEST_CASE("maximum weight: hand-built two-optima market") {
    // Stable matchings {0,3} (weight 3) and {1,2} (weight 5) per enumeration.
    auto inst = build_instance(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}},
                               {{0, 1}, {3, 2}, {2, 0}, {1, 3}}, {},
                               {1, 4, 1, 2});
    BipartiteView view = make_bipartite_view(inst, {0, 0, 1, 1});
    std::vector<Weight> stable_weights;
    for (const auto& m : enumerate_stable(inst)) stable_weights.push_back(weight_of(inst, m));
    REQUIRE(stable_weights.size() == 2);
    CHECK(std::max(stable_weights[0], stable_weights[1]) == 5);
    for (auto method : {MaxwMethod::Enumerate, MaxwMethod::Rotations}) {
        auto result = maxw_stable(view, method);
        CHECK(result.weight == 5);
        CHECK(result.matching.members == std::vector<EdgeId>{1, 2});
    }
}

TEST_CASE("rotation pipeline equals brute force on many-to-one instances") {
    for (unsigned long long seed = 1; seed <= 120; ++seed) {
        auto rb = gen_random_bipartite(seed, 4, 3, 10, 3, 6, /*unit_left=*/true);
        BipartiteView view = view_of(rb);
        auto rotations = maxw_stable(view, MaxwMethod::Rotations);
        auto brute = maxw_stable_bruteforce(rb.instance);
        REQUIRE(brute.exists);
        CHECK(rotations.weight == brute.weight);
        CHECK(find_blocking_edges(rb.instance, rotations.matching).stable());
        // Max weight dominates both one-sided optima.
        CHECK(rotations.weight >= weight_of(rb.instance, deferred_acceptance(view, 0)));
        CHECK(rotations.weight >= weight_of(rb.instance, deferred_acceptance(view, 1)));
    }
}

TEST_CASE("constant weights give the invariant stable size") {
    for (unsigned long long seed = 1; seed <= 20; ++seed) {
        auto rb = gen_random_bipartite(seed, 3, 3, 8, 2, 0);
        for (auto& w : rb.instance.weights) w = 1;
        BipartiteView view = view_of(rb);
        auto result = maxw_stable(view, MaxwMethod::Enumerate);
        BMatching da = deferred_acceptance(view, 0);
        CHECK(result.weight == static_cast<Weight>(da.members.size()));
    }
}

TEST_CASE("student-university market DA agrees with the unit-capacity solver") {
    // For unit university capacities, deferred acceptance on the derived
    // student-university pair market reproduces the per-pair outcome of the
    // admission solver in which the university decides each proposal.
    for (unsigned long long seed = 1; seed <= 40; ++seed) {
        RandomSpec spec;
        spec.n_students = 4;
        spec.n_universities = 3;
        spec.max_university_capacity = 1;
        UdaInstance uda = gen_random_uda(seed, spec);
        Assignment da = solve_uda_unit_capacity(uda);

        // Pair market: one edge per acceptable (student, university) pair,
        // ranked by the student's best program there.
        HypergraphInstance market;
        const int n_s = uda.n_students;
        market.n_vertices = n_s + uda.n_universities();
        market.capacities.assign(market.n_vertices, 1);
        std::vector<std::vector<int>> pair_edge(n_s,
                                                std::vector<int>(uda.n_universities(), -1));
        market.preferences.assign(market.n_vertices, {});
        for (int s = 0; s < n_s; ++s) {
            for (int p : uda.student_prefs[s]) {
                if (uda.program_quota[p] < 1) continue;
                const int u = uda.program_university[p];
                if (pair_edge[s][u] >= 0) continue; // best program decides the rank
                pair_edge[s][u] = market.edge_count();
                market.edges.push_back({s, n_s + u});
                market.preferences[s].push_back(pair_edge[s][u]);
            }
        }
        for (int u = 0; u < uda.n_universities(); ++u)
            for (int s : uda.university_prefs[u])
                if (pair_edge[s][u] >= 0)
                    market.preferences[n_s + u].push_back(pair_edge[s][u]);
        prepare(market);
        std::vector<int> side(market.n_vertices, 1);
        for (int s = 0; s < n_s; ++s) side[s] = 0;
        BipartiteView view = make_bipartite_view(market, side);
        BMatching matched = deferred_acceptance(view, 0);

        std::set<std::pair<int, int>> via_market, via_solver;
        for (EdgeId e : matched.members)
            via_market.insert({market.edges[e][0], market.edges[e][1] - n_s});
        for (int s = 0; s < n_s; ++s)
            if (da.program_of[s] >= 0)
                via_solver.insert({s, uda.program_university[da.program_of[s]]});
        CHECK(via_market == via_solver);
    }
}

TEST_CASE("auto method answers match across routes") {
    for (unsigned long long seed = 1; seed <= 40; ++seed) {
        auto rb = gen_random_bipartite(seed, 5, 3, 12, 2, 5, /*unit_left=*/true);
        BipartiteView view = view_of(rb);
        auto via_auto = maxw_stable(view, MaxwMethod::Auto);
        auto via_rotations = maxw_stable(view, MaxwMethod::Rotations);
        CHECK(via_auto.weight == via_rotations.weight);
    }
}
