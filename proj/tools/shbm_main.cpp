#include "shbm/bipartite.hpp"
#include "shbm/certificates.hpp"
#include "shbm/errors.hpp"
#include "shbm/generators.hpp"
#include "shbm/instance_io.hpp"
#include "shbm/laminar_solver.hpp"
#include "shbm/oracle.hpp"
#include "shbm/subpath_solver.hpp"
#include "shbm/subtree_solver.hpp"
#include "shbm/uda.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using nlohmann::json;

// Exit codes: 0 ok, 1 usage/parse, 2 invalid instance, 3 no stable solution /
// check failed, 4 budget exceeded.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNoSolution = 3;
constexpr int kExitBudget = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw shbm::ParseError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw shbm::ParseError("cannot open output file: " + path);
    out << text;
}

shbm::Weight matching_weight(const shbm::HypergraphInstance& inst, const shbm::BMatching& m) {
    shbm::Weight total = 0;
    for (shbm::EdgeId e : m.members) total += inst.weight_of(e);
    return total;
}

// Components of the 2-vertex edge graph are 2-colored; the lowest vertex of
// each component takes side 0.
std::vector<int> derive_bipartition(const shbm::HypergraphInstance& inst) {
    std::vector<int> side(inst.n_vertices, -1);
    for (shbm::VertexId start = 0; start < inst.n_vertices; ++start) {
        if (side[start] >= 0) continue;
        side[start] = 0;
        std::vector<shbm::VertexId> stack{start};
        while (!stack.empty()) {
            shbm::VertexId v = stack.back();
            stack.pop_back();
            for (shbm::EdgeId e : inst.incident[v]) {
                if (inst.edges[e].size() != 2)
                    throw shbm::ValidationError("bipartite solver requires 2-vertex edges");
                shbm::VertexId u = inst.edges[e][0] == v ? inst.edges[e][1] : inst.edges[e][0];
                if (side[u] < 0) {
                    side[u] = 1 - side[v];
                    stack.push_back(u);
                } else if (side[u] == side[v]) {
                    throw shbm::ValidationError("edge graph is not bipartite");
                }
            }
        }
    }
    return side;
}

struct SolveArgs {
    std::string algo;
    std::string input;
    std::vector<int> force, forbid, saturate, unsaturate;
    int root = -1;
    int proposing = 0;
    int da_side = -1;
    std::string method = "auto";
    bool unit_weights = false;
    bool debug_invariants = false;
    int threads = 1;
};

int run_solve(const SolveArgs& args) {
    if (args.algo == "uda-xp" || args.algo == "uda-half" || args.algo == "uda-unit") {
        shbm::UdaInstance inst = shbm::load_uda_instance(read_file(args.input));
        shbm::Assignment assignment;
        shbm::Weight weight = 0;
        std::vector<int> triples;
        bool fully_stable = true;
        if (args.algo == "uda-xp") {
            std::vector<shbm::Weight> weights;
            if (args.unit_weights) weights.assign(inst.triple_count(), 1);
            shbm::UdaMaxwOptions opts;
            opts.threads = args.threads;
            shbm::UdaMaxwResult result = shbm::solve_uda_maxw(inst, weights, opts);
            assignment = result.assignment;
            weight = result.weight;
            triples = result.chosen_triples;
        } else {
            assignment = args.algo == "uda-half" ? shbm::solve_uda_half_stable(inst)
                                                 : shbm::solve_uda_unit_capacity(inst);
            for (int s = 0; s < inst.n_students; ++s) {
                int p = assignment.program_of[s];
                if (p < 0) continue;
                for (int t : inst.triples_of_student[s])
                    if (inst.triples[t].program == p) {
                        triples.push_back(t);
                        weight += inst.weight_of_triple(t);
                    }
            }
        }
        fully_stable = shbm::uda_is_stable(inst, assignment).stable;
        if (args.algo == "uda-half" && shbm::find_doubly_blocking(inst, assignment))
            throw shbm::InternalError("half-stable solver output admits a doubly blocking triple");
        if (args.algo != "uda-half" && !fully_stable)
            throw shbm::InternalError("UDA solver output is not stable");
        json out;
        out["assignment"] = assignment.program_of;
        out["matching"] = triples;
        out["weight"] = weight;
        out["stable"] = fully_stable;
        if (args.algo == "uda-half") out["half_stable"] = true;
        std::cout << out.dump() << "\n";
        return kExitOk;
    }

    shbm::LoadedInstance loaded = shbm::load_instance(read_file(args.input));
    const shbm::HypergraphInstance& inst = loaded.instance;

    if (args.algo == "laminar") {
        shbm::LaminarSolveOptions opts;
        opts.debug_invariants = args.debug_invariants;
        shbm::BMatching m = shbm::solve_laminar(inst, opts);
        const auto report = shbm::find_blocking_edges(inst, m);
        std::cout << shbm::save_matching(m, matching_weight(inst, m), report.stable());
        return report.stable() ? kExitOk : kExitNoSolution;
    }
    if (args.algo == "subpath") {
        shbm::PathOrdering ordering;
        if (loaded.certificate && std::holds_alternative<shbm::PathOrdering>(*loaded.certificate)) {
            ordering = std::get<shbm::PathOrdering>(*loaded.certificate);
        } else if (!shbm::is_laminar(inst)) {
            std::cerr << "no path ordering supplied; derived one from laminarity\n";
            ordering = shbm::laminar_to_path_ordering(inst);
        } else {
            throw shbm::ValidationError(
                "subpath solver needs certificate.path_ordering (or a laminar instance)");
        }
        shbm::SubpathSolveOptions opts;
        opts.debug_invariants = args.debug_invariants;
        shbm::SideConstraints constraints;
        constraints.forced = args.force;
        constraints.forbidden = args.forbid;
        constraints.saturate = args.saturate;
        constraints.leave_unsaturated = args.unsaturate;
        const bool constrained = !(constraints.forced.empty() && constraints.forbidden.empty() &&
                                   constraints.saturate.empty() &&
                                   constraints.leave_unsaturated.empty());
        shbm::SubpathResult result =
            constrained ? shbm::solve_with_side_constraints(inst, ordering, constraints, opts)
                        : shbm::solve_subpath_maxw(inst, ordering, opts);
        if (!result.exists) {
            std::cerr << "no stable b-matching satisfies the request\n";
            std::cout << "{\"matching\":null,\"stable\":false}\n";
            return kExitNoSolution;
        }
        std::cout << shbm::save_matching(result.matching, result.weight, true);
        return kExitOk;
    }
    if (args.algo == "subtree") {
        if (!loaded.certificate || !std::holds_alternative<shbm::TreeWitness>(*loaded.certificate))
            throw shbm::ValidationError("subtree solver needs certificate.tree_parent");
        const auto& tree = std::get<shbm::TreeWitness>(*loaded.certificate);
        shbm::VertexId root = args.root;
        if (root < 0)
            for (shbm::VertexId v = 0; v < inst.n_vertices; ++v)
                if (tree.parent[v] == -1) root = v;
        shbm::SubtreeSolveOptions opts;
        opts.debug_invariants = args.debug_invariants;
        shbm::BMatching m = shbm::solve_subtree(inst, tree, root, opts);
        std::cout << shbm::save_matching(m, matching_weight(inst, m), true);
        return kExitOk;
    }
    if (args.algo == "bipartite") {
        shbm::BipartiteView view = shbm::make_bipartite_view(inst, derive_bipartition(inst));
        if (args.da_side >= 0) {
            shbm::BMatching m = shbm::deferred_acceptance(view, args.da_side);
            std::cout << shbm::save_matching(m, matching_weight(inst, m), true);
            return kExitOk;
        }
        shbm::MaxwMethod method = shbm::MaxwMethod::Auto;
        if (args.method == "enumerate") method = shbm::MaxwMethod::Enumerate;
        if (args.method == "rotations") method = shbm::MaxwMethod::Rotations;
        shbm::BipartiteMaxwResult result = shbm::maxw_stable(view, method);
        std::cout << shbm::save_matching(result.matching, result.weight, true);
        return kExitOk;
    }
    throw shbm::ParseError("unknown algorithm '" + args.algo + "'");
}

int run_verify(const std::string& instance_path, const std::string& matching_path) {
    shbm::LoadedInstance loaded = shbm::load_instance(read_file(instance_path));
    auto edges = shbm::load_matching_edges(read_file(matching_path));
    shbm::BMatching m = shbm::matching_from_edges(loaded.instance, edges);
    if (!shbm::is_feasible(loaded.instance, m)) {
        std::cerr << "matching is infeasible\n";
        std::cout << "{\"stable\":false,\"feasible\":false}\n";
        return kExitNoSolution;
    }
    const auto report = shbm::find_blocking_edges(loaded.instance, m);
    json out;
    out["stable"] = report.stable();
    out["blocking"] = report.blocking_edges;
    out["weight"] = matching_weight(loaded.instance, m);
    std::cout << out.dump() << "\n";
    return report.stable() ? kExitOk : kExitNoSolution;
}

int run_enumerate(const std::string& instance_path, std::size_t limit, int budget) {
    shbm::LoadedInstance loaded = shbm::load_instance(read_file(instance_path));
    auto all = shbm::enumerate_stable(loaded.instance, limit, budget);
    json out;
    out["count"] = all.size();
    auto list = json::array();
    for (const auto& m : all) list.push_back(m.members);
    out["matchings"] = list;
    std::cout << out.dump() << "\n";
    return kExitOk;
}

int run_check_class(const std::string& instance_path, const std::string& cls) {
    shbm::LoadedInstance loaded = shbm::load_instance(read_file(instance_path));
    const shbm::HypergraphInstance& inst = loaded.instance;
    json out;
    out["class"] = cls;
    if (cls == "laminar") {
        auto crossing = shbm::is_laminar(inst);
        out["ok"] = !crossing.has_value();
        if (crossing) out["crossing_pair"] = {crossing->first, crossing->second};
        std::cout << out.dump() << "\n";
        return crossing ? kExitNoSolution : kExitOk;
    }
    if (!loaded.certificate)
        throw shbm::ValidationError("check-class " + cls + " requires a certificate");
    const std::string have = shbm::certificate_class(*loaded.certificate);
    if (have != cls)
        throw shbm::ValidationError("certificate witnesses '" + have + "', not '" + cls + "'");
    shbm::CertificateCheck check = shbm::verify_certificate(inst, *loaded.certificate);
    out["ok"] = check.ok;
    if (!check.ok) out["violation"] = check.violation;
    std::cout << out.dump() << "\n";
    return check.ok ? kExitOk : kExitNoSolution;
}

shbm::PartitionedGraph parse_graph_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        throw shbm::ParseError(std::string("graph JSON: ") + err.what());
    }
    shbm::PartitionedGraph graph;
    graph.n_vertices = doc.at("n_vertices").get<int>();
    for (const auto& e : doc.at("edges"))
        graph.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    graph.part = doc.at("partition").get<std::vector<int>>();
    return graph;
}

shbm::SmtiInstance parse_smti_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        throw shbm::ParseError(std::string("smti JSON: ") + err.what());
    }
    shbm::SmtiInstance smti;
    smti.n_men = doc.at("n_men").get<int>();
    smti.n_women = doc.at("n_women").get<int>();
    smti.men_prefs = doc.at("men_prefs").get<std::vector<std::vector<int>>>();
    for (const auto& entry : doc.at("women_prefs")) {
        shbm::SmtiInstance::WomanList list;
        list.is_tie = entry.value("tie", false);
        list.men = entry.at("men").get<std::vector<int>>();
        smti.women_prefs.push_back(std::move(list));
    }
    return smti;
}

struct GenArgs {
    std::string cls;
    unsigned long long seed = 0;
    std::string out;
    std::string from_cnf, from_graph, from_instance, from_smti;
    int k = 2;
    shbm::RandomSpec spec;
};

int run_gen(const GenArgs& args) {
    if (!args.from_cnf.empty()) {
        auto reduction = shbm::gen_laminar_from_cnf(shbm::parse_dimacs(read_file(args.from_cnf)));
        write_output(args.out, shbm::save_instance(reduction.loaded));
        std::cerr << "target edge: " << reduction.target_edge << "\n";
        return kExitOk;
    }
    if (!args.from_graph.empty()) {
        auto reduction = shbm::gen_subpath_from_multicolored_clique(
            parse_graph_json(read_file(args.from_graph)), args.k);
        write_output(args.out, shbm::save_instance(reduction.loaded));
        std::cerr << "target edge: " << reduction.target_edge << "\n";
        return kExitOk;
    }
    if (!args.from_instance.empty()) {
        shbm::LoadedInstance source = shbm::load_instance(read_file(args.from_instance));
        auto reduction = shbm::gen_subtree_star_from_shbm(source.instance);
        write_output(args.out, shbm::save_instance(reduction.loaded));
        std::cerr << "star center: " << reduction.center << "\n";
        return kExitOk;
    }
    if (!args.from_smti.empty()) {
        shbm::UdaInstance inst =
            shbm::gen_uda_from_com_smti(parse_smti_json(read_file(args.from_smti)));
        write_output(args.out, shbm::save_uda_instance(inst));
        return kExitOk;
    }
    if (args.cls == "uda-instance") {
        // UDA-format file for the uda-* solvers; `--class uda` emits the
        // associated hypergraph with its partition certificate.
        shbm::UdaInstance inst = shbm::gen_random_uda(args.seed, args.spec);
        write_output(args.out, shbm::save_uda_instance(inst));
        return kExitOk;
    }
    shbm::LoadedInstance loaded = shbm::gen_random(args.cls, args.seed, args.spec);
    write_output(args.out, shbm::save_instance(loaded));
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stable hypergraph b-matching toolkit"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "solve an instance");
    solve->add_option("--algo", solve_args.algo,
                      "laminar|subpath|subtree|bipartite|uda-xp|uda-half|uda-unit")
        ->required();
    solve->add_option("-i,--input", solve_args.input, "instance file")->required();
    solve->add_option("--force", solve_args.force, "forced edge ids (subpath)");
    solve->add_option("--forbid", solve_args.forbid, "forbidden edge ids (subpath)");
    solve->add_option("--saturate", solve_args.saturate, "vertices to saturate (subpath)");
    solve->add_option("--unsaturate", solve_args.unsaturate, "vertices to leave unsaturated");
    solve->add_option("--root", solve_args.root, "root vertex (subtree)");
    solve->add_option("--da", solve_args.da_side, "run deferred acceptance with this proposing side");
    solve->add_option("--method", solve_args.method, "bipartite max-weight method: auto|enumerate|rotations");
    solve->add_flag("--unit-weights", solve_args.unit_weights, "weight 1 per triple (uda-xp)");
    solve->add_flag("--debug-invariants", solve_args.debug_invariants,
                    "enable per-iteration solver assertions");
    solve->add_option("--threads", solve_args.threads, "worker threads (uda-xp)");

    std::string verify_instance, verify_matching;
    auto* verify = app.add_subcommand("verify", "check a matching for stability");
    verify->add_option("-i,--input", verify_instance)->required();
    verify->add_option("-m,--matching", verify_matching)->required();

    std::string enum_instance;
    std::size_t enum_limit = SIZE_MAX;
    int enum_budget = shbm::kDefaultEnumerationBudget;
    auto* enumerate = app.add_subcommand("enumerate", "list all stable b-matchings");
    enumerate->add_option("-i,--input", enum_instance)->required();
    enumerate->add_option("--limit", enum_limit);
    enumerate->add_option("--budget", enum_budget, "edge-count cap for enumeration");

    std::string check_instance, check_cls;
    auto* check = app.add_subcommand("check-class", "verify class membership / certificate");
    check->add_option("-i,--input", check_instance)->required();
    check->add_option("--class", check_cls, "laminar|subpath|subtree|uda")->required();

    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "generate instances");
    gen->add_option("--class", gen_args.cls, "laminar|subpath|subtree|uda|general");
    gen->add_option("--seed", gen_args.seed);
    gen->add_option("--out", gen_args.out, "output file (default stdout)");
    gen->add_option("--from-cnf", gen_args.from_cnf, "DIMACS file: laminar weight-1 reduction");
    gen->add_option("--from-graph", gen_args.from_graph,
                    "partitioned graph JSON: multicolored-clique subpath reduction");
    gen->add_option("--from-instance", gen_args.from_instance,
                    "instance JSON: subtree star reduction");
    gen->add_option("--from-smti", gen_args.from_smti, "SMTI JSON: all-capacity-one UDA reduction");
    gen->add_option("--k", gen_args.k, "clique size for --from-graph");
    gen->add_option("--n", gen_args.spec.n_vertices);
    gen->add_option("--m", gen_args.spec.n_edges);
    gen->add_option("--lmax", gen_args.spec.max_edge_size);
    gen->add_option("--bmax", gen_args.spec.max_capacity);
    gen->add_option("--wmax", gen_args.spec.max_abs_weight);

    std::string ilp_instance, ilp_out;
    auto* emit = app.add_subcommand("emit-ilp", "emit the stable-assignment integer program");
    emit->add_option("-i,--input", ilp_instance, "UDA instance file")->required();
    emit->add_option("--out", ilp_out, "output LP file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        int code = app.exit(err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (solve->parsed()) return run_solve(solve_args);
        if (verify->parsed()) return run_verify(verify_instance, verify_matching);
        if (enumerate->parsed()) return run_enumerate(enum_instance, enum_limit, enum_budget);
        if (check->parsed()) return run_check_class(check_instance, check_cls);
        if (gen->parsed()) return run_gen(gen_args);
        if (emit->parsed()) {
            shbm::UdaInstance inst = shbm::load_uda_instance(read_file(ilp_instance));
            write_output(ilp_out, shbm::emit_ilp(inst));
            return kExitOk;
        }
    } catch (const shbm::ParseError& err) {
        std::cerr << "parse error: " << err.what() << "\n";
        return kExitUsage;
    } catch (const shbm::ValidationError& err) {
        std::cerr << "invalid input: " << err.what() << "\n";
        return kExitInvalid;
    } catch (const shbm::BudgetExceededError& err) {
        std::cerr << "budget exceeded: " << err.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 70;
    }
    return kExitUsage;
}
