#ifndef SHBM_CERTIFICATES_HPP
#define SHBM_CERTIFICATES_HPP

#include "shbm/hypergraph.hpp"

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace shbm {

// A vertex permutation under which every edge is a contiguous interval.
struct PathOrdering {
    std::vector<VertexId> order;
};

// Rooted tree as a parent array (parent[root] = -1) under which every edge
// induces a connected subgraph.
struct TreeWitness {
    std::vector<VertexId> parent;
};

// Role per vertex plus the program -> university map; every edge must be a
// {student, university, program} triple with the program's own university.
struct UdaPartition {
    enum class Role { Student, University, Program };
    std::vector<Role> roles;
    std::vector<VertexId> program_university; // per vertex; -1 unless a program
};

// Parent edge id per edge (-1 for roots), consistent with set inclusion.
struct LaminarForest {
    std::vector<EdgeId> parent;
};

using ClassCertificate = std::variant<PathOrdering, TreeWitness, UdaPartition, LaminarForest>;

// Name of the hypergraph class a certificate variant witnesses.
std::string certificate_class(const ClassCertificate& cert);

struct CertificateCheck {
    bool ok = true;
    std::string violation;
};

// Pairwise laminarity test. Returns a crossing pair (two-sided nonempty
// differences) or nullopt when laminar. Disjoint and nested pairs are fine.
std::optional<std::pair<EdgeId, EdgeId>> is_laminar(const HypergraphInstance& inst);

// Recursive List procedure: orders vertices so that every edge of a laminar
// instance occupies consecutive positions. Rejects non-laminar input.
PathOrdering laminar_to_path_ordering(const HypergraphInstance& inst);

// Parent = smallest-cardinality strict superset (lowest id on ties).
LaminarForest build_laminar_forest(const HypergraphInstance& inst);

// Degenerate tree along a path ordering (each vertex's parent = predecessor).
TreeWitness path_to_tree(const PathOrdering& ordering);

// Checks a certificate against the instance; also rejects a variant that
// contradicts a non-empty class_hint.
CertificateCheck verify_certificate(const HypergraphInstance& inst, const ClassCertificate& cert);

using IntMatrix = std::vector<std::vector<int>>;

// |V| x |E| 0/1 incidence matrix.
IntMatrix incidence_matrix(const HypergraphInstance& inst);

struct NetworkRepresentation {
    // Node ids: agent vertices 0..n-1, plus the extra hub node n.
    int n_nodes = 0;
    int hub = 0;
    // Spanning-tree arc per agent (tail, head), indexed by vertex id.
    std::vector<std::pair<int, int>> tree_arcs;
    // One non-tree arc per hyperedge (tail, head).
    std::vector<std::pair<int, int>> cotree_arcs;
    // Network matrix from fundamental cycles: rows = agents, cols = edges.
    IntMatrix matrix;
};

// The digraph-plus-spanning-tree construction for UDA hypergraphs; the
// returned matrix is computed generically from fundamental cycles and is
// expected to equal the incidence matrix entrywise.
NetworkRepresentation build_network_representation(const HypergraphInstance& inst,
                                                   const UdaPartition& partition);

// Spot total-unimodularity check: every square submatrix up to max_order has
// determinant in {-1,0,1}. Exponential; test use only.
bool tu_spot_check(const IntMatrix& matrix, int max_order = 4);

} // namespace shbm

#endif
