#ifndef SHBM_GENERATORS_HPP
#define SHBM_GENERATORS_HPP

#include "shbm/instance_io.hpp"
#include "shbm/uda.hpp"

#include <string>
#include <utility>
#include <vector>

namespace shbm {

// CNF over variables 1..n_vars; a literal is +v or -v.
struct Cnf {
    int n_vars = 0;
    std::vector<std::vector<int>> clauses;
};

Cnf parse_dimacs(const std::string& text);

struct CnfReduction {
    LoadedInstance loaded;
    EdgeId target_edge; // the weight-1 edge; satisfiable iff some stable matching contains it
};

// Laminar SHM instance whose stable matchings contain the target edge iff the
// formula is satisfiable. Weights: 1 on the target edge, 0 elsewhere.
CnfReduction gen_laminar_from_cnf(const Cnf& formula);

// Graph with vertices partitioned into k classes (each an independent set).
struct PartitionedGraph {
    int n_vertices = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> part; // 0..k-1 per vertex
};

struct CliqueReduction {
    LoadedInstance loaded;
    EdgeId target_edge; // the weight-1 edge; a multicolored k-clique exists iff
                        // some stable b-matching contains it
};

CliqueReduction gen_subpath_from_multicolored_clique(const PartitionedGraph& graph, int k);

struct StarReduction {
    LoadedInstance loaded;
    VertexId center; // the appended high-capacity star center
};

// Appends a never-saturated center vertex to every edge; stable b-matchings
// correspond bijectively by projection. Requires edge sizes <= 3.
StarReduction gen_subtree_star_from_shbm(const HypergraphInstance& source);

// Stable marriage with incomplete lists where men rank strictly and each
// woman either ranks strictly or her whole list is a single tie of two men.
struct SmtiInstance {
    int n_men = 0;
    int n_women = 0;
    std::vector<std::vector<int>> men_prefs; // woman ids, best first
    struct WomanList {
        bool is_tie = false;          // whole list is one tie (length exactly 2)
        std::vector<int> men;         // strict order, or the two tied men
    };
    std::vector<WomanList> women_prefs;
};

// All-capacity-one UDA instance; a complete stable matching exists iff a
// stable assignment of full size exists.
UdaInstance gen_uda_from_com_smti(const SmtiInstance& smti);

struct RandomSpec {
    int n_vertices = 8;
    int n_edges = 10;
    int max_edge_size = 3;
    Capacity max_capacity = 2;
    Weight max_abs_weight = 5;
    bool allow_zero_capacity = false;
    // UDA shape
    int n_students = 4;
    int n_universities = 2;
    int max_programs_per_university = 2;
    Capacity max_quota = 2;
    Capacity max_university_capacity = 2;
};

// Seed-deterministic random instance of the requested class
// ("laminar" | "subpath" | "subtree" | "uda" | "general"), with a verified
// certificate attached where one exists.
LoadedInstance gen_random(const std::string& cls, unsigned long long seed,
                          const RandomSpec& spec = {});

UdaInstance gen_random_uda(unsigned long long seed, const RandomSpec& spec = {});

} // namespace shbm

#endif
