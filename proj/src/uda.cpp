#include "shbm/uda.hpp"

#include "shbm/errors.hpp"
#include "shbm/oracle.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <thread>

namespace shbm {

ValidationReport validate_uda(const UdaInstance& inst) {
    ValidationReport report;
    const int n_s = inst.n_students;
    const int n_u = inst.n_universities();
    const int n_p = inst.n_programs();

    if (n_s < 0) report.issues.push_back("negative student count");
    for (int u = 0; u < n_u; ++u)
        if (inst.university_capacity[u] < 0)
            report.issues.push_back("negative capacity at university " + std::to_string(u));
    if (static_cast<int>(inst.program_quota.size()) != n_p ||
        static_cast<int>(inst.program_university.size()) != n_p)
        report.issues.push_back("program arrays disagree in length");
    for (int p = 0; p < n_p; ++p) {
        if (p < static_cast<int>(inst.program_university.size()) &&
            (inst.program_university[p] < 0 || inst.program_university[p] >= n_u))
            report.issues.push_back("program " + std::to_string(p) + " has an unknown university");
        if (p < static_cast<int>(inst.program_quota.size()) && inst.program_quota[p] < 0)
            report.issues.push_back("negative quota at program " + std::to_string(p));
    }

    auto check_list = [&](const std::vector<int>& list, int bound, const std::string& what) {
        std::set<int> seen;
        for (int id : list) {
            if (id < 0 || id >= bound)
                report.issues.push_back(what + " lists unknown id " + std::to_string(id));
            else if (!seen.insert(id).second)
                report.issues.push_back(what + " lists id " + std::to_string(id) + " twice");
        }
    };
    if (static_cast<int>(inst.student_prefs.size()) != n_s)
        report.issues.push_back("student_prefs has wrong length");
    if (static_cast<int>(inst.university_prefs.size()) != n_u)
        report.issues.push_back("university_prefs has wrong length");
    if (static_cast<int>(inst.program_prefs.size()) != n_p)
        report.issues.push_back("program_prefs has wrong length");
    if (!report.ok()) return report;

    for (int s = 0; s < n_s; ++s)
        check_list(inst.student_prefs[s], n_p, "student " + std::to_string(s));
    for (int u = 0; u < n_u; ++u)
        check_list(inst.university_prefs[u], n_s, "university " + std::to_string(u));
    for (int p = 0; p < n_p; ++p)
        check_list(inst.program_prefs[p], n_s, "program " + std::to_string(p));

    // Universities and programs must rank every student sharing a triple.
    for (int s = 0; s < n_s; ++s) {
        for (int p : inst.student_prefs[s]) {
            if (p < 0 || p >= n_p) continue;
            int u = inst.program_university[p];
            if (std::find(inst.university_prefs[u].begin(), inst.university_prefs[u].end(), s) ==
                inst.university_prefs[u].end())
                report.issues.push_back("university " + std::to_string(u) +
                                        " does not rank applicant student " + std::to_string(s));
            if (std::find(inst.program_prefs[p].begin(), inst.program_prefs[p].end(), s) ==
                inst.program_prefs[p].end())
                report.issues.push_back("program " + std::to_string(p) +
                                        " does not rank applicant student " + std::to_string(s));
        }
    }
    if (!inst.triple_weights.empty()) {
        std::size_t expected = 0;
        for (int s = 0; s < n_s; ++s) expected += inst.student_prefs[s].size();
        if (inst.triple_weights.size() != expected)
            report.issues.push_back("triple_weights length does not match the acceptable triples");
    }
    return report;
}

void prepare_uda(UdaInstance& inst) {
    ValidationReport report = validate_uda(inst);
    if (!report.ok()) throw ValidationError("invalid UDA instance:\n" + report.to_string());

    const int n_s = inst.n_students;
    const int n_u = inst.n_universities();
    const int n_p = inst.n_programs();
    inst.triples.clear();
    inst.triples_of_student.assign(n_s, {});
    inst.triples_of_university.assign(n_u, {});
    inst.triples_of_program.assign(n_p, {});
    for (int s = 0; s < n_s; ++s) {
        for (int p : inst.student_prefs[s]) {
            int u = inst.program_university[p];
            int t = inst.triple_count();
            inst.triples.push_back({s, u, p});
            inst.triples_of_student[s].push_back(t);
            inst.triples_of_university[u].push_back(t);
            inst.triples_of_program[p].push_back(t);
        }
    }
    inst.student_rank.assign(n_s, std::vector<int>(n_p, -1));
    inst.university_rank.assign(n_u, std::vector<int>(n_s, -1));
    inst.program_rank.assign(n_p, std::vector<int>(n_s, -1));
    for (int s = 0; s < n_s; ++s)
        for (int r = 0; r < static_cast<int>(inst.student_prefs[s].size()); ++r)
            inst.student_rank[s][inst.student_prefs[s][r]] = r;
    for (int u = 0; u < n_u; ++u)
        for (int r = 0; r < static_cast<int>(inst.university_prefs[u].size()); ++r)
            inst.university_rank[u][inst.university_prefs[u][r]] = r;
    for (int p = 0; p < n_p; ++p)
        for (int r = 0; r < static_cast<int>(inst.program_prefs[p].size()); ++r)
            inst.program_rank[p][inst.program_prefs[p][r]] = r;
    inst.prepared = true;
}

namespace {

void require_feasible(const UdaInstance& inst, const Assignment& assignment,
                      std::vector<int>& load_u, std::vector<int>& load_p) {
    if (static_cast<int>(assignment.program_of.size()) != inst.n_students)
        throw ValidationError("assignment has wrong length");
    load_u.assign(inst.n_universities(), 0);
    load_p.assign(inst.n_programs(), 0);
    for (int s = 0; s < inst.n_students; ++s) {
        int p = assignment.program_of[s];
        if (p < 0) continue;
        if (p >= inst.n_programs())
            throw ValidationError("assignment refers to unknown program " + std::to_string(p));
        if (inst.student_rank[s][p] < 0)
            throw ValidationError("student " + std::to_string(s) +
                                  " is assigned an unacceptable program " + std::to_string(p));
        ++load_p[p];
        ++load_u[inst.program_university[p]];
    }
    for (int p = 0; p < inst.n_programs(); ++p)
        if (load_p[p] > inst.program_quota[p])
            throw ValidationError("assignment violates the quota of program " + std::to_string(p));
    for (int u = 0; u < inst.n_universities(); ++u)
        if (load_u[u] > inst.university_capacity[u])
            throw ValidationError("assignment violates the capacity of university " +
                                  std::to_string(u));
}

} // namespace

namespace {

bool triple_blocks(const UdaInstance& inst, const Assignment& assignment,
                   const std::vector<int>& load_u, const std::vector<int>& load_p, int t) {
    const auto& [s, u, p] = inst.triples[t];
    const int assigned = assignment.program_of[s];
    // (i) the student strictly prefers p to the current assignment.
    if (assigned >= 0 && inst.student_rank[s][p] >= inst.student_rank[s][assigned]) return false;
    // (ii) the university is unsaturated, holds a worse student, or already
    // holds this student (within-university switch).
    bool cond_u = load_u[u] < inst.university_capacity[u];
    for (int s2 = 0; s2 < inst.n_students && !cond_u; ++s2) {
        int p2 = assignment.program_of[s2];
        if (p2 < 0 || inst.program_university[p2] != u) continue;
        if (s2 == s || inst.university_rank[u][s] < inst.university_rank[u][s2]) cond_u = true;
    }
    if (!cond_u) return false;
    // (iii) the program is unsaturated or holds a worse student.
    bool cond_p = load_p[p] < inst.program_quota[p];
    for (int s2 = 0; s2 < inst.n_students && !cond_p; ++s2) {
        if (assignment.program_of[s2] == p && inst.program_rank[p][s] < inst.program_rank[p][s2])
            cond_p = true;
    }
    return cond_p;
}

} // namespace

UdaStability uda_is_stable(const UdaInstance& inst, const Assignment& assignment) {
    std::vector<int> load_u, load_p;
    require_feasible(inst, assignment, load_u, load_p);

    UdaStability result;
    for (int t = 0; t < inst.triple_count(); ++t) {
        if (!triple_blocks(inst, assignment, load_u, load_p, t)) continue;
        result.stable = false;
        result.blocking_triple = t;
        return result;
    }
    return result;
}

UdaReduction reduce_to_shbm(const UdaInstance& inst) {
    if (!inst.prepared) throw ValidationError("reduce_to_shbm: call prepare_uda first");
    UdaReduction red;
    red.n_students = inst.n_students;
    red.n_universities = inst.n_universities();

    HypergraphInstance& hg = red.instance;
    hg.n_vertices = inst.n_students + inst.n_universities() + inst.n_programs();
    hg.class_hint = "uda";
    hg.capacities.resize(hg.n_vertices);
    for (int s = 0; s < inst.n_students; ++s) hg.capacities[red.student_vertex(s)] = 1;
    for (int u = 0; u < inst.n_universities(); ++u)
        hg.capacities[red.university_vertex(u)] = inst.university_capacity[u];
    for (int p = 0; p < inst.n_programs(); ++p)
        hg.capacities[red.program_vertex(p)] = inst.program_quota[p];

    for (const auto& [s, u, p] : inst.triples) {
        std::vector<VertexId> verts{red.student_vertex(s), red.university_vertex(u),
                                    red.program_vertex(p)};
        std::sort(verts.begin(), verts.end());
        hg.edges.push_back(std::move(verts));
    }
    if (!inst.triple_weights.empty()) hg.weights = inst.triple_weights;

    hg.preferences.assign(hg.n_vertices, {});
    for (int s = 0; s < inst.n_students; ++s)
        hg.preferences[red.student_vertex(s)] = {inst.triples_of_student[s].begin(),
                                                 inst.triples_of_student[s].end()};
    for (int p = 0; p < inst.n_programs(); ++p) {
        auto list = inst.triples_of_program[p];
        std::sort(list.begin(), list.end(), [&](int a, int b) {
            int ra = inst.program_rank[p][inst.triples[a].student];
            int rb = inst.program_rank[p][inst.triples[b].student];
            if (ra != rb) return ra < rb;
            return a < b;
        });
        hg.preferences[red.program_vertex(p)] = {list.begin(), list.end()};
    }
    // University preference extension: by student, then by the student's own
    // ranking of the two programs.
    for (int u = 0; u < inst.n_universities(); ++u) {
        auto list = inst.triples_of_university[u];
        std::sort(list.begin(), list.end(), [&](int a, int b) {
            const auto& ta = inst.triples[a];
            const auto& tb = inst.triples[b];
            int ra = inst.university_rank[u][ta.student];
            int rb = inst.university_rank[u][tb.student];
            if (ra != rb) return ra < rb;
            int pa = inst.student_rank[ta.student][ta.program];
            int pb = inst.student_rank[tb.student][tb.program];
            if (pa != pb) return pa < pb;
            return a < b;
        });
        hg.preferences[red.university_vertex(u)] = {list.begin(), list.end()};
    }
    prepare(hg);

    red.partition.roles.assign(hg.n_vertices, UdaPartition::Role::Student);
    red.partition.program_university.assign(hg.n_vertices, -1);
    for (int u = 0; u < inst.n_universities(); ++u)
        red.partition.roles[red.university_vertex(u)] = UdaPartition::Role::University;
    for (int p = 0; p < inst.n_programs(); ++p) {
        red.partition.roles[red.program_vertex(p)] = UdaPartition::Role::Program;
        red.partition.program_university[red.program_vertex(p)] =
            red.university_vertex(inst.program_university[p]);
    }
    return red;
}

Assignment assignment_from_matching(const UdaInstance& inst, const BMatching& matching) {
    Assignment assignment;
    assignment.program_of.assign(inst.n_students, -1);
    for (EdgeId t : matching.members) {
        const auto& triple = inst.triples[t];
        if (assignment.program_of[triple.student] >= 0)
            throw InternalError("matching assigns a student twice");
        assignment.program_of[triple.student] = triple.program;
    }
    return assignment;
}

BMatching matching_from_assignment(const UdaReduction& red, const UdaInstance& inst,
                                   const Assignment& assignment) {
    std::vector<EdgeId> members;
    for (int s = 0; s < inst.n_students; ++s) {
        int p = assignment.program_of[s];
        if (p < 0) continue;
        for (int t : inst.triples_of_student[s])
            if (inst.triples[t].program == p) members.push_back(t);
    }
    return matching_from_edges(red.instance, members);
}

namespace {

struct StrategyOutcome {
    bool valid = false;
    Weight weight = 0;
    std::vector<int> triples; // sorted
};

// One iteration of the strategy loop: filter triples by the university
// thresholds, solve the bipartite instance, check validity.
StrategyOutcome evaluate_strategy(const UdaInstance& inst, const std::vector<Weight>& weights,
                                  const std::vector<std::vector<int>>& ext_rank_by_u,
                                  const std::vector<int>& threshold, MaxwMethod method) {
    StrategyOutcome outcome;
    std::vector<int> kept;
    for (int t = 0; t < inst.triple_count(); ++t) {
        const int u = inst.triples[t].university;
        const int sigma = threshold[u];
        if (sigma >= 0 && ext_rank_by_u[u][t] > ext_rank_by_u[u][sigma]) continue;
        kept.push_back(t);
    }

    HypergraphInstance bip;
    const int n_s = inst.n_students;
    bip.n_vertices = n_s + inst.n_programs();
    bip.capacities.resize(bip.n_vertices);
    for (int s = 0; s < n_s; ++s) bip.capacities[s] = 1;
    for (int p = 0; p < inst.n_programs(); ++p) bip.capacities[n_s + p] = inst.program_quota[p];
    for (int t : kept) {
        const auto& triple = inst.triples[t];
        std::vector<VertexId> verts{triple.student, n_s + triple.program};
        bip.edges.push_back(std::move(verts));
        bip.weights.push_back(weights[t]);
    }
    bip.preferences.assign(bip.n_vertices, {});
    for (int e = 0; e < static_cast<int>(kept.size()); ++e) {
        const auto& triple = inst.triples[kept[e]];
        bip.preferences[triple.student].push_back(e);
        bip.preferences[n_s + triple.program].push_back(e);
    }
    for (int s = 0; s < n_s; ++s) {
        std::sort(bip.preferences[s].begin(), bip.preferences[s].end(), [&](int a, int b) {
            return inst.student_rank[s][inst.triples[kept[a]].program] <
                   inst.student_rank[s][inst.triples[kept[b]].program];
        });
    }
    for (int p = 0; p < inst.n_programs(); ++p) {
        auto& list = bip.preferences[n_s + p];
        std::sort(list.begin(), list.end(), [&](int a, int b) {
            return inst.program_rank[p][inst.triples[kept[a]].student] <
                   inst.program_rank[p][inst.triples[kept[b]].student];
        });
    }
    prepare(bip);
    std::vector<int> side(bip.n_vertices, 1);
    for (int s = 0; s < n_s; ++s) side[s] = 0;
    BipartiteView view = make_bipartite_view(bip, std::move(side));
    BipartiteMaxwResult solved = maxw_stable(view, method);

    std::vector<int> load_u(inst.n_universities(), 0);
    outcome.triples.reserve(solved.matching.members.size());
    for (EdgeId e : solved.matching.members) {
        const int t = kept[e];
        outcome.triples.push_back(t);
        ++load_u[inst.triples[t].university];
        outcome.weight += weights[t];
    }
    std::sort(outcome.triples.begin(), outcome.triples.end());
    for (int u = 0; u < inst.n_universities(); ++u) {
        if (threshold[u] >= 0) {
            if (load_u[u] != inst.university_capacity[u]) return outcome;
        } else {
            if (load_u[u] >= inst.university_capacity[u]) return outcome;
        }
    }
    outcome.valid = true;
    return outcome;
}

bool better_outcome(const StrategyOutcome& a, const StrategyOutcome& b) {
    // Is a better than b?
    if (!b.valid) return a.valid;
    if (!a.valid) return false;
    if (a.weight != b.weight) return a.weight > b.weight;
    return std::lexicographical_compare(a.triples.begin(), a.triples.end(), b.triples.begin(),
                                        b.triples.end());
}

} // namespace

UdaMaxwResult solve_uda_maxw(const UdaInstance& inst, const std::vector<Weight>& weights_in,
                             const UdaMaxwOptions& opts) {
    if (!inst.prepared) throw ValidationError("solve_uda_maxw: call prepare_uda first");
    std::vector<Weight> weights = weights_in;
    if (weights.empty()) {
        weights.resize(inst.triple_count(), 0);
        if (!inst.triple_weights.empty()) weights = inst.triple_weights;
    }
    if (static_cast<int>(weights.size()) != inst.triple_count())
        throw ValidationError("solve_uda_maxw: weight vector has wrong length");

    const int n_u = inst.n_universities();
    // Extended preference rank per university over its incident triples,
    // matching the hypergraph reduction's lexicographic extension.
    std::vector<std::vector<int>> ext_rank_by_u(n_u,
                                                std::vector<int>(inst.triple_count(), -1));
    for (int u = 0; u < n_u; ++u) {
        auto list = inst.triples_of_university[u];
        std::sort(list.begin(), list.end(), [&](int a, int b) {
            const auto& ta = inst.triples[a];
            const auto& tb = inst.triples[b];
            int ra = inst.university_rank[u][ta.student];
            int rb = inst.university_rank[u][tb.student];
            if (ra != rb) return ra < rb;
            int pa = inst.student_rank[ta.student][ta.program];
            int pb = inst.student_rank[tb.student][tb.program];
            if (pa != pb) return pa < pb;
            return a < b;
        });
        for (int r = 0; r < static_cast<int>(list.size()); ++r) ext_rank_by_u[u][list[r]] = r;
    }

    long long total = 1;
    for (int u = 0; u < n_u; ++u) {
        long long options = static_cast<long long>(inst.triples_of_university[u].size()) + 1;
        if (total > opts.max_strategies / options)
            throw BudgetExceededError("solve_uda_maxw: strategy space exceeds the configured cap");
        total *= options;
    }

    auto threshold_for = [&](long long index) {
        std::vector<int> threshold(n_u, -1);
        for (int u = 0; u < n_u; ++u) {
            const auto& incident = inst.triples_of_university[u];
            long long options = static_cast<long long>(incident.size()) + 1;
            long long digit = index % options;
            index /= options;
            threshold[u] = digit == 0 ? -1 : incident[digit - 1];
        }
        return threshold;
    };

    const int threads = std::max(1, opts.threads);
    std::vector<StrategyOutcome> best_per_thread(threads);
    auto worker = [&](int tid) {
        StrategyOutcome local;
        for (long long index = tid; index < total; index += threads) {
            StrategyOutcome outcome = evaluate_strategy(inst, weights, ext_rank_by_u,
                                                        threshold_for(index), opts.bipartite_method);
            if (better_outcome(outcome, local)) local = std::move(outcome);
        }
        best_per_thread[tid] = std::move(local);
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int tid = 0; tid < threads; ++tid) pool.emplace_back(worker, tid);
        for (auto& t : pool) t.join();
    }
    StrategyOutcome best;
    for (const auto& candidate : best_per_thread)
        if (better_outcome(candidate, best)) best = candidate;
    if (!best.valid)
        throw InternalError("solve_uda_maxw: no valid strategy produced a result");

    UdaMaxwResult result;
    result.strategy_iterations = total;
    result.weight = best.weight;
    result.chosen_triples = best.triples;
    result.assignment.program_of.assign(inst.n_students, -1);
    for (int t : best.triples)
        result.assignment.program_of[inst.triples[t].student] = inst.triples[t].program;
    return result;
}

namespace {

// Student-proposing allocation where each program defers to a supplied
// student ranking (the university's for half-stability).
Assignment spa_student_propose(const UdaInstance& inst,
                               const std::vector<std::vector<int>>& decide_rank_by_program) {
    Assignment assignment;
    assignment.program_of.assign(inst.n_students, -1);
    std::vector<std::vector<char>> deleted(inst.n_students);
    std::vector<std::size_t> cursor(inst.n_students, 0);
    for (int s = 0; s < inst.n_students; ++s)
        deleted[s].assign(inst.student_prefs[s].size(), 0);

    std::vector<int> load_u(inst.n_universities(), 0);
    std::vector<int> load_p(inst.n_programs(), 0);

    std::deque<int> agenda;
    std::vector<char> queued(inst.n_students, 0);
    for (int s = 0; s < inst.n_students; ++s)
        if (!inst.student_prefs[s].empty()) {
            agenda.push_back(s);
            queued[s] = 1;
        }
    auto enqueue = [&](int s) {
        if (!queued[s]) {
            agenda.push_back(s);
            queued[s] = 1;
        }
    };
    auto rank_at = [&](int p, int s) { return decide_rank_by_program[p][s]; };
    auto delete_pair = [&](int s, int p) {
        int pos = inst.student_rank[s][p];
        if (pos >= 0) deleted[s][pos] = 1;
    };
    auto worst_in_program = [&](int p) {
        int worst = -1;
        for (int s = 0; s < inst.n_students; ++s)
            if (assignment.program_of[s] == p && (worst < 0 || rank_at(p, s) > rank_at(p, worst)))
                worst = s;
        return worst;
    };
    auto worst_in_university = [&](int u) {
        int worst = -1;
        for (int s = 0; s < inst.n_students; ++s) {
            int p = assignment.program_of[s];
            if (p < 0 || inst.program_university[p] != u) continue;
            if (worst < 0 ||
                inst.university_rank[u][s] > inst.university_rank[u][worst])
                worst = s;
        }
        return worst;
    };

    while (!agenda.empty()) {
        const int s = agenda.front();
        agenda.pop_front();
        queued[s] = 0;
        if (assignment.program_of[s] >= 0) continue;
        while (cursor[s] < inst.student_prefs[s].size() && deleted[s][cursor[s]]) ++cursor[s];
        if (cursor[s] >= inst.student_prefs[s].size()) continue;
        const int p = inst.student_prefs[s][cursor[s]];
        const int u = inst.program_university[p];
        if (inst.program_quota[p] == 0 || inst.university_capacity[u] == 0) {
            deleted[s][cursor[s]] = 1;
            enqueue(s);
            continue;
        }

        assignment.program_of[s] = p;
        ++load_p[p];
        ++load_u[u];
        if (load_p[p] > inst.program_quota[p]) {
            int reject = worst_in_program(p);
            assignment.program_of[reject] = -1;
            --load_p[p];
            --load_u[u];
            delete_pair(reject, p);
            enqueue(reject);
        } else if (load_u[u] > inst.university_capacity[u]) {
            int reject = worst_in_university(u);
            int reject_p = assignment.program_of[reject];
            assignment.program_of[reject] = -1;
            --load_p[reject_p];
            --load_u[u];
            delete_pair(reject, reject_p);
            enqueue(reject);
        }
        if (load_p[p] == inst.program_quota[p]) {
            int worst = worst_in_program(p);
            int bound = rank_at(p, worst);
            for (int s2 = 0; s2 < inst.n_students; ++s2)
                if (inst.student_rank[s2][p] >= 0 && rank_at(p, s2) > bound) delete_pair(s2, p);
        }
        if (load_u[u] == inst.university_capacity[u]) {
            int worst = worst_in_university(u);
            int bound = inst.university_rank[u][worst];
            for (int s2 = 0; s2 < inst.n_students; ++s2)
                if (inst.university_rank[u][s2] > bound)
                    for (int p2 : inst.student_prefs[s2])
                        if (inst.program_university[p2] == u) delete_pair(s2, p2);
        }
        if (assignment.program_of[s] < 0) enqueue(s);
    }
    return assignment;
}

} // namespace

Assignment solve_uda_half_stable(const UdaInstance& inst) {
    if (!inst.prepared) throw ValidationError("solve_uda_half_stable: call prepare_uda first");
    // Programs decide by their university's ranking.
    std::vector<std::vector<int>> decide(inst.n_programs());
    for (int p = 0; p < inst.n_programs(); ++p)
        decide[p] = inst.university_rank[inst.program_university[p]];
    return spa_student_propose(inst, decide);
}

std::optional<int> find_doubly_blocking(const UdaInstance& inst, const Assignment& assignment) {
    std::vector<int> load_u, load_p;
    require_feasible(inst, assignment, load_u, load_p);
    for (int t = 0; t < inst.triple_count(); ++t) {
        if (!triple_blocks(inst, assignment, load_u, load_p, t)) continue;
        // Doubly blocking: when the program is saturated, some assigned
        // student must be worse for both the university and the program.
        const auto& [s, u, p] = inst.triples[t];
        if (load_p[p] < inst.program_quota[p]) return t;
        for (int s2 = 0; s2 < inst.n_students; ++s2) {
            if (assignment.program_of[s2] != p) continue;
            if (inst.university_rank[u][s] < inst.university_rank[u][s2] &&
                inst.program_rank[p][s] < inst.program_rank[p][s2])
                return t;
        }
    }
    return std::nullopt;
}

Assignment solve_uda_unit_capacity(const UdaInstance& inst) {
    if (!inst.prepared) throw ValidationError("solve_uda_unit_capacity: call prepare_uda first");
    for (int u = 0; u < inst.n_universities(); ++u)
        if (inst.university_capacity[u] != 1)
            throw ValidationError("solve_uda_unit_capacity: university " + std::to_string(u) +
                                  " has capacity != 1");
    Assignment assignment;
    assignment.program_of.assign(inst.n_students, -1);
    std::vector<int> student_at(inst.n_universities(), -1);
    std::vector<std::size_t> cursor(inst.n_students, 0);
    std::deque<int> agenda;
    for (int s = 0; s < inst.n_students; ++s) agenda.push_back(s);
    while (!agenda.empty()) {
        const int s = agenda.front();
        agenda.pop_front();
        while (assignment.program_of[s] < 0 && cursor[s] < inst.student_prefs[s].size()) {
            const int p = inst.student_prefs[s][cursor[s]++];
            if (inst.program_quota[p] < 1) continue;
            const int u = inst.program_university[p];
            const int holder = student_at[u];
            if (holder < 0) {
                assignment.program_of[s] = p;
                student_at[u] = s;
            } else if (inst.university_rank[u][s] < inst.university_rank[u][holder]) {
                assignment.program_of[holder] = -1;
                assignment.program_of[s] = p;
                student_at[u] = s;
                agenda.push_back(holder);
            }
        }
    }
    return assignment;
}

std::string emit_ilp(const UdaInstance& inst) {
    if (!inst.prepared) throw ValidationError("emit_ilp: call prepare_uda first");

    // Clone programs to unit quota; variables are cloned acceptable triples.
    struct ClonedTriple {
        int student, university, program, clone;
    };
    std::vector<ClonedTriple> vars;
    std::vector<Weight> var_weight;
    {
        int triple_index = 0;
        for (int s = 0; s < inst.n_students; ++s)
            for (int p : inst.student_prefs[s]) {
                for (int t = 0; t < inst.program_quota[p]; ++t) {
                    vars.push_back({s, inst.program_university[p], p, t});
                    var_weight.push_back(inst.weight_of_triple(triple_index));
                }
                ++triple_index;
            }
    }
    const int n_vars = static_cast<int>(vars.size());

    auto var_name = [&](int i) {
        std::ostringstream out;
        out << "x_s" << vars[i].student << "_u" << vars[i].university << "_p" << vars[i].program
            << "_c" << vars[i].clone;
        return out.str();
    };
    // Extended preference comparisons over cloned triples.
    auto student_prefers = [&](int a, int b) {
        // a,b share the student
        int ra = inst.student_rank[vars[a].student][vars[a].program];
        int rb = inst.student_rank[vars[b].student][vars[b].program];
        if (ra != rb) return ra < rb;
        return vars[a].clone < vars[b].clone;
    };
    auto clone_prefers = [&](int a, int b) {
        // a,b share (program, clone); program prefs decide
        return inst.program_rank[vars[a].program][vars[a].student] <
               inst.program_rank[vars[b].program][vars[b].student];
    };
    auto university_prefers = [&](int a, int b) {
        const int u = vars[a].university;
        int ra = inst.university_rank[u][vars[a].student];
        int rb = inst.university_rank[u][vars[b].student];
        if (ra != rb) return ra < rb;
        int pa = inst.student_rank[vars[a].student][vars[a].program];
        int pb = inst.student_rank[vars[b].student][vars[b].program];
        if (pa != pb) return pa < pb;
        return vars[a].clone < vars[b].clone;
    };

    std::ostringstream out;
    out << "\\ stable-assignment integer program (" << n_vars << " variables)\n";
    out << "Maximize\n obj:";
    if (n_vars == 0) out << " 0 x_dummy";
    for (int i = 0; i < n_vars; ++i) {
        Weight w = var_weight[i];
        out << (w < 0 ? " - " : " + ") << (w < 0 ? -w : w) << " " << var_name(i);
    }
    out << "\nSubject To\n";

    auto emit_row = [&](const std::string& name, const std::vector<std::pair<int, Weight>>& terms,
                        const char* relation, Weight rhs) {
        out << " " << name << ":";
        for (const auto& [var, coeff] : terms) {
            if (coeff == 0) continue;
            out << (coeff < 0 ? " - " : " + ") << (coeff < 0 ? -coeff : coeff) << " "
                << var_name(var);
        }
        out << " " << relation << " " << rhs << "\n";
    };

    for (int s = 0; s < inst.n_students; ++s) {
        std::vector<std::pair<int, Weight>> terms;
        for (int i = 0; i < n_vars; ++i)
            if (vars[i].student == s) terms.emplace_back(i, 1);
        if (!terms.empty()) emit_row("cap_s" + std::to_string(s), terms, "<=", 1);
    }
    for (int u = 0; u < inst.n_universities(); ++u) {
        std::vector<std::pair<int, Weight>> terms;
        for (int i = 0; i < n_vars; ++i)
            if (vars[i].university == u) terms.emplace_back(i, 1);
        if (!terms.empty())
            emit_row("cap_u" + std::to_string(u), terms, "<=", inst.university_capacity[u]);
    }
    for (int p = 0; p < inst.n_programs(); ++p)
        for (int t = 0; t < inst.program_quota[p]; ++t) {
            std::vector<std::pair<int, Weight>> terms;
            for (int i = 0; i < n_vars; ++i)
                if (vars[i].program == p && vars[i].clone == t) terms.emplace_back(i, 1);
            if (!terms.empty())
                emit_row("cap_p" + std::to_string(p) + "_c" + std::to_string(t), terms, "<=", 1);
        }

    // Domination row per cloned triple: c(u) * (better-for-student +
    // better-for-program-clone + the variable itself) + better-for-university
    // >= c(u).
    for (int i = 0; i < n_vars; ++i) {
        const Capacity cu = inst.university_capacity[vars[i].university];
        std::vector<Weight> coeff(n_vars, 0);
        coeff[i] += cu;
        for (int j = 0; j < n_vars; ++j) {
            if (j == i) continue;
            if (vars[j].student == vars[i].student && student_prefers(j, i)) coeff[j] += cu;
            if (vars[j].program == vars[i].program && vars[j].clone == vars[i].clone &&
                clone_prefers(j, i))
                coeff[j] += cu;
            if (vars[j].university == vars[i].university && university_prefers(j, i)) coeff[j] += 1;
        }
        std::vector<std::pair<int, Weight>> terms;
        for (int j = 0; j < n_vars; ++j)
            if (coeff[j] != 0) terms.emplace_back(j, coeff[j]);
        emit_row("dom_" + var_name(i), terms, ">=", cu);
    }

    out << "Binary\n";
    if (n_vars == 0) out << " x_dummy\n";
    for (int i = 0; i < n_vars; ++i) out << " " << var_name(i) << "\n";
    out << "End\n";
    return out.str();
}

UdaInstance load_uda_instance(const std::string& bytes) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& err) {
        throw ParseError(std::string("UDA JSON: ") + err.what());
    }
    if (!doc.is_object()) throw ParseError("UDA JSON must be an object");
    UdaInstance inst;
    try {
        inst.n_students = doc.at("students").get<int>();
        for (const auto& entry : doc.at("universities"))
            inst.university_capacity.push_back(entry.at("capacity").get<long long>());
        for (const auto& entry : doc.at("programs")) {
            inst.program_university.push_back(entry.at("university").get<int>());
            inst.program_quota.push_back(entry.at("quota").get<long long>());
        }
        inst.student_prefs = doc.at("student_prefs").get<std::vector<std::vector<int>>>();
        inst.university_prefs = doc.at("university_prefs").get<std::vector<std::vector<int>>>();
        inst.program_prefs = doc.at("program_prefs").get<std::vector<std::vector<int>>>();
        if (doc.contains("triple_weights"))
            inst.triple_weights = doc.at("triple_weights").get<std::vector<Weight>>();
    } catch (const nlohmann::json::exception& err) {
        throw ParseError(std::string("UDA JSON: ") + err.what());
    }
    prepare_uda(inst);
    return inst;
}

std::string save_uda_instance(const UdaInstance& inst) {
    nlohmann::json doc;
    doc["students"] = inst.n_students;
    auto universities = nlohmann::json::array();
    for (Capacity c : inst.university_capacity) universities.push_back({{"capacity", c}});
    doc["universities"] = universities;
    auto programs = nlohmann::json::array();
    for (int p = 0; p < inst.n_programs(); ++p)
        programs.push_back(
            {{"university", inst.program_university[p]}, {"quota", inst.program_quota[p]}});
    doc["programs"] = programs;
    doc["student_prefs"] = inst.student_prefs;
    doc["university_prefs"] = inst.university_prefs;
    doc["program_prefs"] = inst.program_prefs;
    if (!inst.triple_weights.empty()) doc["triple_weights"] = inst.triple_weights;
    return doc.dump(2) + "\n";
}

} // namespace shbm
