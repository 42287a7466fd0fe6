#ifndef SHBM_INSTANCE_IO_HPP
#define SHBM_INSTANCE_IO_HPP

#include "shbm/certificates.hpp"
#include "shbm/hypergraph.hpp"

#include <optional>
#include <string>
#include <vector>

namespace shbm {

struct LoadedInstance {
    HypergraphInstance instance;
    std::optional<ClassCertificate> certificate;
    // Present only when preferences came from a seed rather than the file.
    std::optional<unsigned long long> preference_seed;
};

// JSON instance format. Missing capacities default to 1 (SHM mode), missing
// weights to 0; missing preferences are derived from `preference_seed` by a
// per-vertex deterministic shuffle. The returned instance is prepared.
LoadedInstance load_instance(const std::string& bytes);
std::string save_instance(const LoadedInstance& loaded);

// Matching file: {"edges": [ids]}.
std::vector<EdgeId> load_matching_edges(const std::string& bytes);
std::string save_matching(const BMatching& matching, Weight weight, bool stable);

// The deterministic preference shuffle used when preferences are seeded:
// Fisher-Yates over the ascending incident list with an mt19937_64 stream
// seeded per vertex.
std::vector<std::vector<EdgeId>> seeded_preferences(int n_vertices,
                                                    const std::vector<std::vector<VertexId>>& edges,
                                                    unsigned long long seed);

} // namespace shbm

#endif
