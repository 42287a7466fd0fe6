#include "shbm/instance_io.hpp"

#include "shbm/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <random>

namespace shbm {

using nlohmann::json;

namespace {

json require_field(const json& obj, const char* key) {
    if (!obj.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    return obj.at(key);
}

std::vector<long long> int_array(const json& arr, const char* field) {
    if (!arr.is_array()) throw ParseError(std::string("field '") + field + "' must be an array");
    std::vector<long long> out;
    for (const auto& item : arr) {
        if (!item.is_number_integer())
            throw ParseError(std::string("field '") + field + "' must contain integers");
        out.push_back(item.get<long long>());
    }
    return out;
}

std::vector<std::vector<long long>> nested_int_array(const json& arr, const char* field) {
    if (!arr.is_array()) throw ParseError(std::string("field '") + field + "' must be an array");
    std::vector<std::vector<long long>> out;
    for (const auto& item : arr) out.push_back(int_array(item, field));
    return out;
}

std::vector<int> to_ints(const std::vector<long long>& in) {
    return std::vector<int>(in.begin(), in.end());
}

ClassCertificate parse_certificate(const json& obj) {
    if (obj.contains("path_ordering")) {
        PathOrdering cert;
        cert.order = to_ints(int_array(obj.at("path_ordering"), "path_ordering"));
        return cert;
    }
    if (obj.contains("tree_parent")) {
        TreeWitness cert;
        cert.parent = to_ints(int_array(obj.at("tree_parent"), "tree_parent"));
        return cert;
    }
    if (obj.contains("laminar_parent")) {
        LaminarForest cert;
        cert.parent = to_ints(int_array(obj.at("laminar_parent"), "laminar_parent"));
        return cert;
    }
    if (obj.contains("uda_roles")) {
        UdaPartition cert;
        const auto& roles = obj.at("uda_roles");
        if (!roles.is_array()) throw ParseError("field 'uda_roles' must be an array");
        for (const auto& role : roles) {
            const std::string text = role.get<std::string>();
            if (text == "student")
                cert.roles.push_back(UdaPartition::Role::Student);
            else if (text == "university")
                cert.roles.push_back(UdaPartition::Role::University);
            else if (text == "program")
                cert.roles.push_back(UdaPartition::Role::Program);
            else
                throw ParseError("unknown uda role '" + text + "'");
        }
        cert.program_university.assign(cert.roles.size(), -1);
        if (obj.contains("program_university")) {
            for (const auto& pair : obj.at("program_university")) {
                auto ids = int_array(pair, "program_university");
                if (ids.size() != 2) throw ParseError("program_university entries must be [program, university]");
                if (ids[0] < 0 || ids[0] >= static_cast<long long>(cert.roles.size()))
                    throw ParseError("program_university refers to unknown vertex");
                cert.program_university[ids[0]] = static_cast<VertexId>(ids[1]);
            }
        }
        return cert;
    }
    throw ParseError("certificate object carries no known witness field");
}

json certificate_to_json(const ClassCertificate& cert) {
    json obj = json::object();
    if (const auto* path = std::get_if<PathOrdering>(&cert)) {
        obj["path_ordering"] = path->order;
    } else if (const auto* tree = std::get_if<TreeWitness>(&cert)) {
        obj["tree_parent"] = tree->parent;
    } else if (const auto* forest = std::get_if<LaminarForest>(&cert)) {
        obj["laminar_parent"] = forest->parent;
    } else {
        const auto& uda = std::get<UdaPartition>(cert);
        json roles = json::array();
        json mapping = json::array();
        for (std::size_t v = 0; v < uda.roles.size(); ++v) {
            switch (uda.roles[v]) {
                case UdaPartition::Role::Student: roles.push_back("student"); break;
                case UdaPartition::Role::University: roles.push_back("university"); break;
                case UdaPartition::Role::Program:
                    roles.push_back("program");
                    mapping.push_back(json::array({v, uda.program_university[v]}));
                    break;
            }
        }
        obj["uda_roles"] = roles;
        obj["program_university"] = mapping;
    }
    return obj;
}

} // namespace

std::vector<std::vector<EdgeId>> seeded_preferences(int n_vertices,
                                                    const std::vector<std::vector<VertexId>>& edges,
                                                    unsigned long long seed) {
    std::vector<std::vector<EdgeId>> prefs(n_vertices);
    for (EdgeId e = 0; e < static_cast<EdgeId>(edges.size()); ++e)
        for (VertexId v : edges[e]) prefs[v].push_back(e);
    for (VertexId v = 0; v < n_vertices; ++v) {
        std::mt19937_64 rng(seed * 1000003ULL + static_cast<unsigned long long>(v));
        auto& list = prefs[v];
        // Explicit Fisher-Yates; std::shuffle is not bit-stable across platforms.
        for (std::size_t i = list.size(); i > 1; --i)
            std::swap(list[i - 1], list[rng() % i]);
    }
    return prefs;
}

LoadedInstance load_instance(const std::string& bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& err) {
        throw ParseError(std::string("instance JSON: ") + err.what());
    }
    if (!doc.is_object()) throw ParseError("instance JSON must be an object");

    LoadedInstance loaded;
    HypergraphInstance& inst = loaded.instance;
    inst.n_vertices = static_cast<int>(require_field(doc, "n_vertices").get<long long>());
    for (const auto& edge : nested_int_array(require_field(doc, "edges"), "edges")) {
        std::vector<VertexId> verts(edge.begin(), edge.end());
        inst.edges.push_back(std::move(verts));
    }
    if (doc.contains("capacities"))
        inst.capacities = int_array(doc.at("capacities"), "capacities");
    else
        inst.capacities.assign(inst.n_vertices, 1); // SHM mode by default

    if (doc.contains("weights")) inst.weights = int_array(doc.at("weights"), "weights");

    if (doc.contains("preferences")) {
        for (const auto& list : nested_int_array(doc.at("preferences"), "preferences"))
            inst.preferences.push_back(to_ints(list));
    } else {
        unsigned long long seed = 0;
        if (doc.contains("preference_seed")) seed = doc.at("preference_seed").get<unsigned long long>();
        loaded.preference_seed = seed;
        inst.preferences = seeded_preferences(inst.n_vertices, inst.edges, seed);
    }

    if (doc.contains("class_hint")) inst.class_hint = doc.at("class_hint").get<std::string>();
    if (doc.contains("certificate")) loaded.certificate = parse_certificate(doc.at("certificate"));

    prepare(inst);
    return loaded;
}

std::string save_instance(const LoadedInstance& loaded) {
    const HypergraphInstance& inst = loaded.instance;
    json doc = json::object();
    doc["n_vertices"] = inst.n_vertices;
    doc["edges"] = inst.edges;
    doc["capacities"] = inst.capacities;
    if (loaded.preference_seed)
        doc["preference_seed"] = *loaded.preference_seed;
    else
        doc["preferences"] = inst.preferences;
    if (!inst.weights.empty()) doc["weights"] = inst.weights;
    if (!inst.class_hint.empty()) doc["class_hint"] = inst.class_hint;
    if (loaded.certificate) doc["certificate"] = certificate_to_json(*loaded.certificate);
    return doc.dump(2) + "\n";
}

std::vector<EdgeId> load_matching_edges(const std::string& bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& err) {
        throw ParseError(std::string("matching JSON: ") + err.what());
    }
    if (!doc.is_object()) throw ParseError("matching JSON must be an object");
    return to_ints(int_array(require_field(doc, "edges"), "edges"));
}

std::string save_matching(const BMatching& matching, Weight weight, bool stable) {
    json doc = json::object();
    doc["matching"] = matching.members;
    doc["weight"] = weight;
    doc["stable"] = stable;
    return doc.dump() + "\n";
}

} // namespace shbm
