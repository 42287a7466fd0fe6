#ifndef SHBM_UDA_HPP
#define SHBM_UDA_HPP

#include "shbm/bipartite.hpp"
#include "shbm/certificates.hpp"
#include "shbm/hypergraph.hpp"

#include <optional>
#include <string>
#include <vector>

namespace shbm {

// University dual admission: students apply to (university, program) pairs;
// universities carry capacities, programs carry quotas, and all three kinds
// of agents rank strictly.
struct UdaInstance {
    int n_students = 0;
    std::vector<Capacity> university_capacity;
    std::vector<int> program_university; // per program
    std::vector<Capacity> program_quota;
    std::vector<std::vector<int>> student_prefs;    // program ids, best first
    std::vector<std::vector<int>> university_prefs; // student ids, best first
    std::vector<std::vector<int>> program_prefs;    // student ids, best first
    std::vector<Weight> triple_weights;             // per acceptable triple; empty = zero

    struct Triple {
        int student;
        int university;
        int program;
    };
    // Acceptable triples, enumerated per student in preference order.
    std::vector<Triple> triples;

    // Rank tables (filled by prepare_uda), -1 = not ranked.
    std::vector<std::vector<int>> student_rank;    // [s][p]
    std::vector<std::vector<int>> university_rank; // [u][s]
    std::vector<std::vector<int>> program_rank;    // [p][s]
    std::vector<std::vector<int>> triples_of_student;
    std::vector<std::vector<int>> triples_of_university;
    std::vector<std::vector<int>> triples_of_program;
    bool prepared = false;

    int n_universities() const { return static_cast<int>(university_capacity.size()); }
    int n_programs() const { return static_cast<int>(program_quota.size()); }
    int triple_count() const { return static_cast<int>(triples.size()); }
    Weight weight_of_triple(int t) const { return triple_weights.empty() ? 0 : triple_weights[t]; }
};

ValidationReport validate_uda(const UdaInstance& inst);
void prepare_uda(UdaInstance& inst); // derives triples + rank tables, throws on invalid

// Per-student program id, -1 = unassigned.
struct Assignment {
    std::vector<int> program_of;

    int size() const {
        int count = 0;
        for (int p : program_of) count += (p >= 0);
        return count;
    }
};

struct UdaStability {
    bool stable = true;
    int blocking_triple = -1; // first blocking triple index, in triple order
};

// Checks the three blocking conditions on every acceptable triple. Throws on
// an infeasible assignment, naming the violated capacity/quota.
UdaStability uda_is_stable(const UdaInstance& inst, const Assignment& assignment);

// The assignment <-> b-matching correspondence over the associated
// hypergraph (triple t <-> edge t).
struct UdaReduction {
    HypergraphInstance instance;
    UdaPartition partition;
    int n_students = 0;
    int n_universities = 0;

    VertexId student_vertex(int s) const { return s; }
    VertexId university_vertex(int u) const { return n_students + u; }
    VertexId program_vertex(int p) const { return n_students + n_universities + p; }
};

UdaReduction reduce_to_shbm(const UdaInstance& inst);

Assignment assignment_from_matching(const UdaInstance& inst, const BMatching& matching);
BMatching matching_from_assignment(const UdaReduction& red, const UdaInstance& inst,
                                   const Assignment& assignment);

struct UdaMaxwOptions {
    int threads = 1;
    MaxwMethod bipartite_method = MaxwMethod::Auto;
    // Guard on the strategy product (the algorithm is exponential in |U|).
    long long max_strategies = 20'000'000;
};

struct UdaMaxwResult {
    Assignment assignment;
    Weight weight = 0;
    std::vector<int> chosen_triples;
    long long strategy_iterations = 0;
};

// Exhaustive strategy search: per university, guess the worst accepted triple
// (or unsaturated), solve the induced bipartite max-weight stable b-matching
// between students and programs, keep valid results, return the best.
UdaMaxwResult solve_uda_maxw(const UdaInstance& inst, const std::vector<Weight>& weights = {},
                             const UdaMaxwOptions& opts = {});

// Student-proposing allocation with the program preferences replaced by the
// university's; the result admits no doubly blocking triple.
Assignment solve_uda_half_stable(const UdaInstance& inst);

// First doubly blocking triple (in triple order), if any.
std::optional<int> find_doubly_blocking(const UdaInstance& inst, const Assignment& assignment);

// Simple student-proposing deferred acceptance where the university decides;
// requires every university capacity to be 1.
Assignment solve_uda_unit_capacity(const UdaInstance& inst);

// LP-format integer program whose 0/1 solutions are exactly the stable
// assignments (programs are cloned to unit quota first).
std::string emit_ilp(const UdaInstance& inst);

// UDA JSON format: students, universities (capacity), programs (university,
// quota), student_prefs, university_prefs, program_prefs, triple_weights.
UdaInstance load_uda_instance(const std::string& bytes);
std::string save_uda_instance(const UdaInstance& inst);

} // namespace shbm

#endif
