#include "shbm/errors.hpp"
#include "shbm/generators.hpp"
#include "shbm/hypergraph.hpp"
#include "shbm/instance_io.hpp"

#include <doctest.h>

#include "test_support.hpp"

#include <random>

using namespace shbm;

TEST_CASE("validation flags a preference list missing an incident edge") {
    HypergraphInstance inst;
    inst.n_vertices = 2;
    inst.edges = {{0, 1}};
    inst.capacities = {1, 1};
    inst.preferences = {{0}, {}}; // vertex 1 misses edge 0
    ValidationReport report = validate(inst);
    REQUIRE_FALSE(report.ok());
    CHECK(report.to_string().find("vertex 1") != std::string::npos);
    CHECK(report.to_string().find("0") != std::string::npos);
}

TEST_CASE("a vacuous instance is valid") {
    HypergraphInstance inst;
    inst.n_vertices = 3;
    inst.capacities = {1, 1, 1};
    inst.preferences = {{}, {}, {}};
    CHECK(validate(inst).ok());
}

TEST_CASE("out-of-range vertex ids are reported") {
    HypergraphInstance inst;
    inst.n_vertices = 2;
    inst.edges = {{0, 2}};
    inst.capacities = {1, 1};
    inst.preferences = {{0}, {}};
    ValidationReport report = validate(inst);
    REQUIRE_FALSE(report.ok());
    CHECK(report.to_string().find("out of range") != std::string::npos);
}

TEST_CASE("derived params on corner cases") {
    HypergraphInstance empty;
    empty.n_vertices = 3;
    empty.capacities = {2, 2, 2};
    empty.preferences = {{}, {}, {}};
    prepare(empty);
    DerivedParams params = derived_params(empty);
    CHECK(params.max_edge_size == 0);
    CHECK(params.max_degree == 0);
    CHECK(params.max_capacity == 2);
    CHECK(params.max_abs_weight == 0);

    auto single = shbm_test::build_instance(3, {{0, 1, 2}}, {{0}, {0}, {0}}, {1, 1, 1}, {-5});
    params = derived_params(single);
    CHECK(params.max_edge_size == 3);
    CHECK(params.max_degree == 1);
    CHECK(params.max_capacity == 1);
    CHECK(params.max_abs_weight == 5);
}

TEST_CASE("derived params agree with an independent recount") {
    for (unsigned long long seed = 1; seed <= 20; ++seed) {
        LoadedInstance loaded = gen_random("general", seed);
        const auto& inst = loaded.instance;
        DerivedParams params = derived_params(inst);
        std::size_t max_size = 0;
        for (const auto& verts : inst.edges) max_size = std::max(max_size, verts.size());
        CHECK(params.max_edge_size == static_cast<int>(max_size));
        int max_degree = 0;
        for (VertexId v = 0; v < inst.n_vertices; ++v) {
            int degree = 0;
            for (EdgeId e = 0; e < inst.edge_count(); ++e)
                degree += static_cast<int>(
                    std::count(inst.edges[e].begin(), inst.edges[e].end(), v));
            max_degree = std::max(max_degree, degree);
        }
        CHECK(params.max_degree == max_degree);
        Weight omega = 0;
        for (Weight w : inst.weights) omega = std::max(omega, w < 0 ? -w : w);
        CHECK(params.max_abs_weight == omega);
    }
}

TEST_CASE("save/load round-trip is the identity") {
    for (unsigned long long seed = 1; seed <= 25; ++seed) {
        const char* classes[] = {"laminar", "subpath", "subtree", "general"};
        LoadedInstance loaded = gen_random(classes[seed % 4], seed);
        LoadedInstance again = load_instance(save_instance(loaded));
        CHECK(again.instance.n_vertices == loaded.instance.n_vertices);
        CHECK(again.instance.edges == loaded.instance.edges);
        CHECK(again.instance.capacities == loaded.instance.capacities);
        CHECK(again.instance.preferences == loaded.instance.preferences);
        CHECK(again.instance.weights == loaded.instance.weights);
        CHECK(again.instance.class_hint == loaded.instance.class_hint);
        REQUIRE(again.certificate.has_value() == loaded.certificate.has_value());
    }
}

TEST_CASE("malformed JSON raises a parse error") {
    CHECK_THROWS_AS(load_instance("{ nope"), ParseError);
    CHECK_THROWS_AS(load_instance("[1,2,3]"), ParseError);
}

TEST_CASE("omitted capacities default to 1") {
    LoadedInstance loaded =
        load_instance(R"({"n_vertices":3,"edges":[[0,1],[1,2]],"preference_seed":7})");
    CHECK(loaded.instance.capacities == std::vector<Capacity>{1, 1, 1});
    CHECK(loaded.preference_seed == 7ULL);
    // Seeded preferences are deterministic.
    LoadedInstance again =
        load_instance(R"({"n_vertices":3,"edges":[[0,1],[1,2]],"preference_seed":7})");
    CHECK(loaded.instance.preferences == again.instance.preferences);
}

TEST_CASE("loads stay consistent under add/remove sequences") {
    std::mt19937_64 rng(42);
    for (int round = 0; round < 20; ++round) {
        LoadedInstance loaded = gen_random("general", 100 + round);
        const auto& inst = loaded.instance;
        BMatching m = empty_matching(inst);
        for (int step = 0; step < 60; ++step) {
            EdgeId e = static_cast<EdgeId>(rng() % std::max(1, inst.edge_count()));
            if (m.contains(e))
                m.remove(inst, e);
            else
                m.add(inst, e);
            BMatching recount = matching_from_edges(inst, m.members);
            CHECK(recount.loads == m.loads);
        }
    }
}

TEST_CASE("weight overflow contract is validated") {
    HypergraphInstance inst;
    inst.n_vertices = 1;
    inst.edges = {{0}, {0}};
    inst.capacities = {1};
    inst.preferences = {{0, 1}};
    inst.weights = {6'000'000'000'000'000'000LL, 6'000'000'000'000'000'000LL};
    CHECK_FALSE(validate(inst).ok());
}
