// Command-line front end: parse, build, eliminate, solve, bench, check, demo.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lnf/bench.hpp"
#include "lnf/check.hpp"
#include "lnf/dynamics.hpp"
#include "lnf/fm_elim.hpp"
#include "lnf/formula.hpp"
#include "lnf/lnf.hpp"
#include "lnf/logic_tree.hpp"
#include "lnf/milp.hpp"

using json = nlohmann::json;
using namespace lnf;

namespace {

enum Exit { kOk = 0, kInfeasible = 1, kUsage = 2, kLimit = 3 };

// User errors that name the offending flag.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path, const std::string& flag) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError(flag + ": cannot read '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

bool ends_with(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

void write_model(const Model& m, const std::string& path) {
    NameMap renamed = ends_with(path, ".lp") ? export_lp(m, path) : export_mps(m, path);
    for (const auto& [from, to] : renamed) spdlog::debug("renamed {} -> {}", from, to);
}

double percent(double g) { return std::isfinite(g) ? 100.0 * g : g; }

// ---------------------------------------------------------------- shared inputs

struct LogicInputs {
    std::string spec_path, formula, preds_path, graph_path;
    int horizon = -1;
    double atom_cost = 0.0;
    std::string scenario;
    std::uint64_t seed = 1;

    void add(CLI::App* c) {
        auto* s = c->add_option("--spec", spec_path, "specification file");
        auto* f = c->add_option("--formula", formula, "specification text");
        s->excludes(f);
        c->add_option("--preds", preds_path, "predicate table (JSON)");
        c->add_option("--graph", graph_path, "temporal graph (JSON)")->needs("--preds");
        c->add_option("--horizon", horizon, "time horizon in steps (default: formula horizon)")->check(CLI::NonNegativeNumber);
        c->add_option("--atom-cost", atom_cost, "objective weight on every atom variable");
        auto* sc = c->add_option("--scenario", scenario, "generated instance instead of files (e.g. counter-example)");
        sc->excludes(s)->excludes(f);
        c->add_option("--seed", seed, "generator seed for --scenario");
    }

    Instance instance() const {
        if (!scenario.empty()) {
            Scenario s;
            try {
                s.kind = scenario_kind(scenario);
            } catch (const std::exception&) {
                throw UsageError("--scenario: unknown scenario '" + scenario + "'");
            }
            s.seed = seed;
            if (horizon > 0) s.horizon = horizon;
            return build_instance(s);
        }
        if (spec_path.empty() && formula.empty()) throw UsageError("--spec or --formula is required");
        std::string text = spec_path.empty() ? formula : slurp(spec_path, "--spec");
        PredicateTable preds;
        bool have_preds = !preds_path.empty();
        if (have_preds) {
            try {
                preds = PredicateTable::from_json(slurp(preds_path, "--preds"));
            } catch (const FormulaError& e) {
                throw UsageError(std::string("--preds: ") + e.what());
            }
        }
        Instance inst;
        inst.spec = parse_spec(text, have_preds ? &preds : nullptr);
        inst.T = horizon >= 0 ? horizon : lnf::horizon(*inst.spec);
        if (!graph_path.empty()) {
            TemporalGraph g;
            try {
                g = TemporalGraph::from_json(slurp(graph_path, "--graph"));
                inst.regions.push_back(regions_from_predicates(g, preds));
            } catch (const ModelError& e) {
                throw UsageError(std::string("--graph: ") + e.what());
            }
            inst.graphs.push_back(std::move(g));
        }
        if (atom_cost != 0.0)
            for (const TimedAtom& a : atoms_of(*time_expand(inst.spec, inst.T))) inst.atom_cost[a.pred] = atom_cost;
        return inst;
    }
};

struct Limits {
    double gap = 1e-6;
    double time_limit = kInf;
    long node_limit = -1;

    void add(CLI::App* c) {
        c->add_option("--gap", gap, "relative optimality gap")->check(CLI::NonNegativeNumber);
        c->add_option("--time-limit", time_limit, "seconds per solve")->check(CLI::PositiveNumber);
        c->add_option("--node-limit", node_limit, "branch-and-bound nodes per solve")->check(CLI::PositiveNumber);
    }

    BbOptions options() const {
        BbOptions o;
        o.gap_tol = gap;
        o.time_limit = time_limit;
        if (node_limit > 0) o.node_limit = node_limit;
        return o;
    }
};

// ---------------------------------------------------------------- subcommands

int cmd_parse(const LogicInputs& in, bool as_json) {
    Instance inst = in.instance();
    FormulaPtr exp = time_expand(inst.spec, inst.T);
    std::size_t atoms = atoms_of(*exp).size();
    if (as_json) {
        json j{{"formula", to_string(*inst.spec)},
               {"horizon", horizon(*inst.spec)},
               {"nodes", node_count(*inst.spec)},
               {"expanded_nodes", node_count(*exp)},
               {"atoms", atoms}};
        std::cout << j.dump() << "\n";
    } else {
        std::cout << to_string(*inst.spec) << "\n"
                  << "horizon " << horizon(*inst.spec) << " nodes " << node_count(*inst.spec) << " expanded " << node_count(*exp)
                  << " atoms " << atoms << "\n";
    }
    return kOk;
}

void summary(const Model& m, bool as_json, const std::string& what) {
    if (as_json) {
        json j{{"model", what},
               {"variables", m.num_vars()},
               {"binary", m.num_binary()},
               {"continuous", m.num_continuous()},
               {"constraints", m.num_rows()}};
        std::cout << j.dump() << "\n";
    } else {
        std::cout << what << ": " << m.num_vars() << " variables (" << m.num_binary() << " binary, " << m.num_continuous()
                  << " continuous), " << m.num_rows() << " constraints\n";
    }
}

int cmd_build(const LogicInputs& in, const std::string& form, const std::string& out, bool as_json) {
    Formulation f;
    try {
        f = formulation(form);
    } catch (const std::exception&) {
        throw UsageError("--formulation: expected lt, lnf-flow, lnf or cd, got '" + form + "'");
    }
    Model m = build_model(in.instance(), f);
    write_model(m, out);
    summary(m, as_json, out);
    return kOk;
}

int cmd_eliminate(const LogicInputs& in, bool force_fm, const std::string& before, const std::string& after, bool as_json) {
    Instance inst = in.instance();
    // built by hand so that the flow columns are at hand
    Model pre;
    AtomVars z;
    FormulaPtr exp = time_expand(inst.spec, inst.T);
    for (const TimedAtom& a : atoms_of(*exp)) z.get(pre, a);
    for (std::size_t r = 0; r < inst.graphs.size(); ++r) {
        DnfOptions opt;
        opt.prefix = "r" + std::to_string(r);
        encode_dnf(expand_dnf(inst.graphs[r], inst.T), pre, inst.regions[r], z, opt);
    }
    for (const auto& [key, v] : z.all()) {
        auto it = inst.atom_cost.find(key.first);
        if (it != inst.atom_cost.end()) pre.add_obj(v, it->second);
    }
    Lnf g = build_lnf(build_tree(*exp));
    FlowEncoding enc = encode_lnf_flow(g, pre, z);
    if (!before.empty()) write_model(pre, before);
    ElimOptions eo;
    eo.force_fm = force_fm;
    Model post = pre;
    EliminationResult res = eliminate_flows(g, post, enc, eo);
    if (!after.empty()) write_model(post, after);
    if (as_json) {
        json j{{"rows_before", res.stats.rows_before},
               {"rows_after", res.stats.rows_after},
               {"vars_removed", res.stats.vars_removed},
               {"series_parallel", res.stats.series_parallel},
               {"generated", res.generated.size()}};
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "before: " << pre.num_vars() << " variables, " << pre.num_rows() << " constraints\n"
                  << "after: " << post.num_vars() << " variables, " << post.num_rows() << " constraints ("
                  << res.stats.vars_removed << " flow variables removed, " << res.generated.size() << " rows generated, "
                  << (res.stats.series_parallel ? "series-parallel" : "fourier-motzkin") << ")\n";
        std::cout << write_lp(post);
    }
    return kOk;
}

int exit_for(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal:
        case SolveStatus::GapLimit: return kOk;
        case SolveStatus::Infeasible: return kInfeasible;
        default: return kLimit;
    }
}

int cmd_solve(const std::string& path, const Limits& lim, const std::string& solution, bool as_json) {
    Model m;
    try {
        m = import_model(path);
    } catch (const std::exception& e) {
        throw UsageError(std::string("model file: ") + e.what());
    }
    SolveResult r = bb_solve(m, lim.options());
    if (!solution.empty() && r.has_incumbent) {
        json j = json::object();
        for (int i = 0; i < m.num_vars(); ++i) j[m.vars[i].name] = r.x[i];
        std::ofstream(solution) << j.dump(1) << "\n";
    }
    if (as_json) {
        json j{{"status", to_string(r.status)}, {"nodes", r.nodes}, {"seconds", r.seconds}};
        if (r.has_incumbent) {
            j["objective"] = r.incumbent;
            j["root_gap"] = r.root_gap;
            j["gap"] = r.abs_gap;
            j["lower_bound"] = r.lower_bound;
        }
        std::cout << j.dump() << "\n";
    } else if (!r.has_incumbent) {
        std::cout << to_string(r.status) << "\n";
    } else {
        std::printf("%s %.6f root_gap %.2f%%", to_string(r.status), r.incumbent, percent(r.root_gap));
        if (r.status != SolveStatus::Optimal) std::printf(" gap %.2f%%", percent(r.abs_gap));
        std::printf("\n");
    }
    if (r.status == SolveStatus::Infeasible) std::cerr << "model is infeasible\n";
    return exit_for(r.status);
}

struct BenchArgs {
    int trials = 1;
    std::uint64_t seed = 1;
    Scenario base;
    std::string out;
    int jobs = 1;
};

int cmd_bench(const std::string& kind, const BenchArgs& a, const Limits& lim, bool as_json) {
    std::vector<Scenario> batch;
    for (int t = 0; t < a.trials; ++t) {
        Scenario s = a.base;
        s.kind = scenario_kind(kind);
        s.seed = a.seed + static_cast<std::uint64_t>(t);
        batch.push_back(s);
    }
    auto rec = run_batch(batch, lim.options(), a.jobs);
    if (a.out.empty())
        std::cout << to_csv(rec);
    else
        write_csv(rec, a.out);

    std::map<std::string, std::pair<double, int>> gaps;
    int limited = 0, errors = 0;
    for (const TrialRecord& r : rec) {
        if (r.status == "error") ++errors;
        if (r.status == "time-limit" || r.status == "node-limit") ++limited;
        if (std::isfinite(r.root_gap)) {
            gaps[r.formulation].first += r.root_gap;
            ++gaps[r.formulation].second;
        }
    }
    if (as_json) {
        json j{{"records", rec.size()}, {"limited", limited}, {"errors", errors}};
        for (const auto& [f, g] : gaps) j["mean_root_gap"][f] = g.first / g.second;
        std::cerr << j.dump() << "\n";
    } else {
        for (const auto& [f, g] : gaps)
            std::fprintf(stderr, "%s mean root gap %.2f%% over %d records\n", f.c_str(), percent(g.first / g.second), g.second);
        if (limited) std::fprintf(stderr, "%d records stopped at a limit\n", limited);
    }
    if (errors) return kInfeasible;
    return limited ? kLimit : kOk;
}

int cmd_check(const LogicInputs& in, int random, std::uint64_t seed, const std::vector<std::string>& forms, bool as_json) {
    std::vector<Formulation> fs;
    for (const std::string& f : forms) {
        try {
            fs.push_back(formulation(f));
        } catch (const std::exception&) {
            throw UsageError("--formulation: unknown formulation '" + f + "'");
        }
    }
    std::vector<std::pair<std::string, Instance>> cases;
    if (random > 0) {
        for (int i = 0; i < random; ++i) cases.emplace_back("seed " + std::to_string(seed + i), random_micro_instance(seed + i));
    } else {
        if (in.graph_path.empty()) throw UsageError("--graph is required unless --random is given");
        cases.emplace_back("input", in.instance());
    }
    int sound = 0, complete = 0, total = 0;
    json details = json::array();
    for (auto& [name, inst] : cases) {
        for (Formulation f : fs) {
            CheckReport r;
            try {
                r = check_instance(inst, f);
            } catch (const ModelError& e) {
                throw UsageError(e.what());
            }
            ++total;
            sound += r.sound;
            complete += r.complete;
            if (!r.pass()) spdlog::error("{} {}: {}", name, to_string(f), r.detail);
            details.push_back({{"case", name},
                               {"formulation", to_string(f)},
                               {"sound", r.sound},
                               {"complete", r.complete},
                               {"status", r.status},
                               {"detail", r.detail}});
        }
    }
    if (as_json) {
        std::cout << json{{"sound", sound}, {"complete", complete}, {"total", total}, {"cases", details}}.dump() << "\n";
    } else {
        std::cout << (sound == total ? "PASS" : "FAIL") << " soundness " << sound << "/" << total << "\n"
                  << (complete == total ? "PASS" : "FAIL") << " completeness " << complete << "/" << total << "\n";
    }
    return sound == total && complete == total ? kOk : kInfeasible;
}

int cmd_demo_min_time(int K, std::vector<double> init, bool tightening, bool solve, const std::string& dir, const Limits& lim,
                      bool as_json) {
    if (init.size() != 2) throw UsageError("--initial: expected position and velocity");
    MinTimeModels mm = build_min_time_models(double_integrator(K, Eigen::Vector2d(init[0], init[1])));
    std::vector<std::pair<std::string, Model>> models{
        {"gcs", mm.gcs.model}, {"fm", eliminate_gcs_flows(mm.gcs, tightening)}, {"baseline", mm.baseline}};
    json j = json::array();
    for (auto& [name, m] : models) {
        json row{{"model", name}, {"binary", m.num_binary()}, {"continuous", m.num_continuous()}, {"constraints", m.num_rows()}};
        if (!dir.empty()) write_model(m, dir + "/" + name + ".mps");
        if (solve) {
            TrialRecord r = solve_trial(m, "min_time", 0, name, lim.options());
            row["status"] = r.status;
            row["objective"] = r.incumbent;
            row["root_gap"] = r.root_gap;
            row["wall_ms"] = r.wall_ms;
        }
        if (!as_json) {
            std::printf("%-8s binary %5d continuous %5d constraints %5d", name.c_str(), m.num_binary(), m.num_continuous(),
                        m.num_rows());
            if (solve)
                std::printf("  %s %.6f root_gap %.2f%%", row["status"].get<std::string>().c_str(), row["objective"].get<double>(),
                            percent(row["root_gap"].get<double>()));
            std::printf("\n");
        }
        j.push_back(row);
    }
    if (as_json) std::cout << j.dump() << "\n";
    return kOk;
}

void setup_logging() {
    auto log = spdlog::stderr_color_mt("lnf");
    spdlog::set_default_logger(log);
    spdlog::set_level(spdlog::level::err);
    if (const char* lv = std::getenv("LNF_LOG")) {
        std::string s = lv;
        if (s == "debug")
            spdlog::set_level(spdlog::level::debug);
        else if (s == "info")
            spdlog::set_level(spdlog::level::info);
        else if (s != "error")
            spdlog::warn("LNF_LOG: unknown level '{}', using error", s);
    }
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"Logic network flow encodings of temporal logic planning problems"};
    app.require_subcommand(1);
    app.fallthrough();  // --json may follow the subcommand
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable summaries");

    LogicInputs in;
    Limits lim;

    auto* parse = app.add_subcommand("parse", "parse a specification and report its size");
    in.add(parse);

    auto* build = app.add_subcommand("build", "encode a specification and write the model");
    in.add(build);
    std::string form = "lnf", out;
    build->add_option("--formulation", form, "lt, lnf-flow, lnf or cd");
    build->add_option("--out", out, "model file (.mps or .lp)")->required();

    auto* elim = app.add_subcommand("eliminate", "project the flow variables out and print the constraint sets");
    LogicInputs ein;
    ein.add(elim);
    bool force_fm = false;
    std::string before, after;
    elim->add_flag("--force-fm", force_fm, "plain Fourier-Motzkin instead of the series-parallel projection");
    elim->add_option("--before", before, "write the flow model");
    elim->add_option("--after", after, "write the projected model");

    auto* solve = app.add_subcommand("solve", "solve an MPS or LP model by branch and bound");
    std::string model_path, solution;
    solve->add_option("model", model_path, "model file")->required();
    solve->add_option("--solution", solution, "write variable values (JSON)");
    lim.add(solve);

    auto* bench = app.add_subcommand("bench", "seeded comparison runs written as CSV");
    bench->require_subcommand(1);
    BenchArgs ba;
    Limits blim;
    std::vector<std::string> bench_kinds{"multi-target", "vrptw", "sequential", "min-time", "counter-example", "point-mass"};
    std::string bench_kind;
    for (const std::string& k : bench_kinds) {
        auto* b = bench->add_subcommand(k);
        b->add_option("--trials", ba.trials)->check(CLI::PositiveNumber);
        b->add_option("--seed", ba.seed);
        b->add_option("--grid", ba.base.grid)->check(CLI::PositiveNumber);
        b->add_option("--groups", ba.base.groups)->check(CLI::PositiveNumber);
        b->add_option("--targets", ba.base.targets)->check(CLI::PositiveNumber);
        b->add_option("--robots", ba.base.robots)->check(CLI::PositiveNumber);
        b->add_option("--tasks", ba.base.tasks)->check(CLI::PositiveNumber);
        b->add_option("--horizon", ba.base.horizon)->check(CLI::PositiveNumber);
        b->add_option("--drop", ba.base.drop)->check(CLI::Range(0.0, 1.0));
        b->add_option("--initial", ba.base.initial)->expected(2);
        b->add_option("--out", ba.out, "CSV file (default: standard output)");
        b->add_option("--jobs", ba.jobs)->check(CLI::PositiveNumber);
        blim.add(b);
        b->callback([&bench_kind, k] { bench_kind = k; });
    }

    auto* check = app.add_subcommand("check", "soundness and completeness against exhaustive enumeration");
    LogicInputs cin_;
    cin_.add(check);
    int random = 0;
    std::vector<std::string> forms{"lt", "lnf-flow", "lnf"};
    check->add_option("--random", random, "seeded micro-instances instead of an input")->check(CLI::PositiveNumber);
    check->add_option("--formulation", forms, "formulations to check")->delimiter(',');

    auto* demo = app.add_subcommand("demo", "worked examples");
    demo->require_subcommand(1);
    auto* mt = demo->add_subcommand("min-time", "minimum-time double integrator: model sizes and optional solves");
    int K = 250;
    std::vector<double> init{0.04, 0.0};
    bool tightening = false, demo_solve = false;
    std::string demo_dir;
    Limits dlim;
    mt->add_option("--horizon", K)->check(CLI::PositiveNumber);
    mt->add_option("--initial", init)->expected(2);
    mt->add_flag("--tightening", tightening, "add the four tightening families");
    mt->add_flag("--solve", demo_solve);
    mt->add_option("--out-dir", demo_dir, "write gcs.mps, fm.mps and baseline.mps");
    dlim.add(mt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*parse) return cmd_parse(in, as_json);
        if (*build) return cmd_build(in, form, out, as_json);
        if (*elim) return cmd_eliminate(ein, force_fm, before, after, as_json);
        if (*solve) return cmd_solve(model_path, lim, solution, as_json);
        if (*bench) return cmd_bench(bench_kind, ba, blim, as_json);
        if (*check) return cmd_check(cin_, random, cin_.seed, forms, as_json);
        if (*mt) return cmd_demo_min_time(K, init, tightening, demo_solve, demo_dir, dlim, as_json);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: --spec: " << e.what() << "\n";
        return kUsage;
    } catch (const FormulaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
