#include "shbm/errors.hpp"
#include "shbm/generators.hpp"
#include "shbm/laminar_solver.hpp"
#include "shbm/oracle.hpp"

#include <doctest.h>

#include "test_support.hpp"

using namespace shbm;
using shbm_test::build_instance;

TEST_CASE("a single edge is taken") {
    auto inst = build_instance(2, {{0, 1}});
    LaminarSolveOptions opts;
    opts.debug_invariants = true;
    BMatching m = solve_laminar(inst, opts);
    CHECK(m.members == std::vector<EdgeId>{0});
}

TEST_CASE("a minimal edge is evicted by a preferred superset edge") {
    // Vertex 0 prefers the big edge; the singleton goes in first and is
    // evicted when the superset blocks.
    auto inst = build_instance(2, {{0}, {0, 1}}, {{1, 0}, {1}});
    LaminarSolveOptions opts;
    opts.debug_invariants = true;
    BMatching m = solve_laminar(inst, opts);
    CHECK(m.members == std::vector<EdgeId>{1});
    CHECK(find_blocking_edges(inst, m).stable());
    auto all = enumerate_stable(inst);
    REQUIRE(all.size() == 1);
    CHECK(all[0].members == m.members);
}

TEST_CASE("non-laminar input is rejected with the crossing pair") {
    auto inst = build_instance(3, {{0, 1}, {1, 2}});
    CHECK_THROWS_AS(solve_laminar(inst), ValidationError);
}

TEST_CASE("parallel worst edges are evicted through one representative") {
    // Both parallel {0,1} edges are each worst at one oversaturated vertex of
    // the superset edge; evicting both would desaturate and break stability.
    auto inst = build_instance(3, {{0, 1}, {0, 1}, {0, 1, 2}},
                               {{0, 2, 1}, {1, 2, 0}, {2}}, {2, 2, 1});
    LaminarSolveOptions opts;
    opts.debug_invariants = true;
    BMatching m = solve_laminar(inst, opts);
    CHECK(find_blocking_edges(inst, m).stable());
}

TEST_CASE("edges at zero-capacity vertices never enter the matching") {
    auto nested = build_instance(3, {{0, 1}, {0, 1, 2}}, {{0, 1}, {0, 1}, {1}}, {0, 1, 1});
    LaminarSolveOptions opts;
    opts.debug_invariants = true;
    BMatching m = solve_laminar(nested, opts);
    for (EdgeId e : m.members)
        for (VertexId v : nested.edges[e]) CHECK(nested.capacities[v] > 0);
    CHECK(find_blocking_edges(nested, m).stable());
}

TEST_CASE("random laminar instances solve stably with invariants on") {
    LaminarSolveOptions opts;
    opts.debug_invariants = true;
    for (unsigned long long seed = 1; seed <= 200; ++seed) {
        RandomSpec spec;
        spec.n_vertices = 8;
        spec.n_edges = 12;
        spec.max_capacity = 3;
        spec.allow_zero_capacity = (seed % 5 == 0);
        LoadedInstance loaded = gen_random("laminar", seed, spec);
        BMatching m = solve_laminar(loaded.instance, opts);
        CHECK(find_blocking_edges(loaded.instance, m).stable());
        // Nonempty whenever some edge blocks the empty matching.
        if (!find_blocking_edges(loaded.instance, empty_matching(loaded.instance)).stable())
            CHECK_FALSE(m.members.empty());
    }
}
