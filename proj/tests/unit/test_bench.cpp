#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "lnf/bench.hpp"

using namespace lnf;

namespace {

// Minimum-cost joint plan for a vrptw instance by dynamic programming over
// (vertex, step, dwell length, satisfied tasks) per robot.
double vrptw_oracle(const Instance& inst) {
    const int R = static_cast<int>(inst.graphs.size());
    const int T = inst.T;
    // clause t = Or over robots of F[open, T-2] G[0,2] atom
    std::vector<const Formula*> clauses;
    if (inst.spec->op == Op::And)
        for (const auto& k : inst.spec->kids) clauses.push_back(k.get());
    else
        clauses.push_back(inst.spec.get());
    const int K = static_cast<int>(clauses.size());
    auto alt = [&](int t, int r) -> const Formula& {
        const Formula* c = clauses[t];
        return c->op == Op::Or ? *c->kids[r] : *c;
    };

    const int full = (1 << K) - 1;
    std::vector<double> g(full + 1, kInf);
    g[0] = 0.0;
    for (int r = 0; r < R; ++r) {
        const TemporalGraph& G = inst.graphs[r];
        const int n = static_cast<int>(G.vertices.size());
        std::vector<int> vert(K);
        std::vector<int> open(K);
        for (int t = 0; t < K; ++t) {
            const Formula& f = alt(t, r);
            REQUIRE(f.op == Op::Eventually);
            open[t] = f.k1;
            vert[t] = *inst.regions[r].at(f.kids[0]->kids[0]->pred).begin();
        }
        auto sat = [&](int v, int k, int c) {
            int m = 0;
            if (c >= 3)
                for (int t = 0; t < K; ++t)
                    if (vert[t] == v && k - 2 >= open[t] && k - 2 <= T - 2) m |= 1 << t;
            return m;
        };
        // cost[k][v][c-1][mask]
        auto id = [&](int k, int v, int c, int mask) { return ((k * n + v) * 3 + (c - 1)) * (full + 1) + mask; };
        std::vector<double> cost(static_cast<std::size_t>((T + 1) * n * 3 * (full + 1)), kInf);
        const int src = G.sources.at(0);
        cost[id(0, src, 1, 0)] = 0.0;
        for (int k = 0; k < T; ++k)
            for (int v = 0; v < n; ++v)
                for (int c = 1; c <= 3; ++c)
                    for (int mask = 0; mask <= full; ++mask) {
                        double cur = cost[id(k, v, c, mask)];
                        if (cur == kInf) continue;
                        int hc = std::min(c + 1, 3);
                        double& h = cost[id(k + 1, v, hc, mask | sat(v, k + 1, hc))];
                        h = std::min(h, cur + G.hold_cost_at(v, k));
                        for (std::size_t e = 0; e < G.edges.size(); ++e) {
                            if (G.edges[e].from != v) continue;
                            int kk = k + static_cast<int>(std::lround(G.edges[e].travel_time));
                            if (kk > T) continue;
                            int w = G.edges[e].to;
                            double& x = cost[id(kk, w, 1, mask | sat(w, kk, 1))];
                            x = std::min(x, cur + G.edge_cost(static_cast<int>(e), k));
                        }
                    }
        std::vector<double> best(full + 1, kInf);
        for (int v = 0; v < n; ++v)
            for (int c = 1; c <= 3; ++c)
                for (int mask = 0; mask <= full; ++mask) best[mask] = std::min(best[mask], cost[id(T, v, c, mask)]);
        for (int mask = full; mask >= 0; --mask)
            for (int sup = mask; sup <= full; sup = (sup + 1) | mask) {
                best[mask] = std::min(best[mask], best[sup]);
                if (sup == full) break;
            }
        std::vector<double> next(full + 1, kInf);
        for (int mask = 0; mask <= full; ++mask)
            for (int sub = mask;; sub = (sub - 1) & mask) {
                next[mask] = std::min(next[mask], g[mask & ~sub] + best[sub]);
                if (sub == 0) break;
            }
        g = next;
    }
    return g[full];
}

// time-constrained cheapest walk to `target`, holds free
double cheapest_arrival(const TemporalGraph& g, int target, int T) {
    const int n = static_cast<int>(g.vertices.size());
    std::vector<std::vector<double>> c(T + 1, std::vector<double>(n, kInf));
    c[0][g.sources.at(0)] = 0.0;
    for (int k = 0; k < T; ++k)
        for (int v = 0; v < n; ++v) {
            if (c[k][v] == kInf) continue;
            c[k + 1][v] = std::min(c[k + 1][v], c[k][v] + g.hold_cost_at(v, k));
            for (std::size_t e = 0; e < g.edges.size(); ++e) {
                if (g.edges[e].from != v) continue;
                int kk = k + static_cast<int>(std::lround(g.edges[e].travel_time));
                if (kk <= T) c[kk][g.edges[e].to] = std::min(c[kk][g.edges[e].to], c[k][v] + g.edge_cost(static_cast<int>(e), k));
            }
        }
    double best = kInf;
    for (int k = 0; k <= T; ++k) best = std::min(best, c[k][target]);
    return best;
}

TrialRecord record(std::uint64_t seed, const char* f, double gap, double inc) {
    TrialRecord r;
    r.scenario = "multi_target_g8_n2_t3";
    r.seed = seed;
    r.formulation = f;
    r.n_bin = 10;
    r.n_cont = 20;
    r.n_constr = 30;
    r.root_gap = gap;
    r.incumbent = inc;
    r.lower_bound = inc - 1e-9;
    r.status = "optimal";
    r.wall_ms = 12.345678901234567;
    r.nodes = 7;
    return r;
}

}  // namespace

TEST_CASE("splitmix64 reference values") {
    SplitMix64 r(0);
    CHECK(r.next() == 0xe220a8397b1dcdafULL);
    CHECK(r.next() == 0x6e789e6aa1b965f4ULL);
    SplitMix64 a(7), b(7);
    for (int i = 0; i < 100; ++i) {
        double u = a.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(u == b.uniform());
    }
    SplitMix64 c(3);
    for (int i = 0; i < 1000; ++i) {
        int v = c.below(5);
        CHECK(v >= 0);
        CHECK(v < 5);
    }
}

TEST_CASE("multi-target sizing") {
    Instance inst = gen_multi_target(16, 2, 3, 1);
    CHECK(inst.T == 20);
    REQUIRE(inst.graphs.size() == 1);
    const auto& reg = inst.regions.at(0);
    CHECK(reg.at("obs").size() == 4);
    int targets = 0;
    for (const auto& [name, vs] : reg)
        if (name.rfind("tgt", 0) == 0) {
            ++targets;
            CHECK(vs.size() == 1);
            CHECK_FALSE(reg.at("obs").count(*vs.begin()));
        }
    CHECK(targets == 6);
    CHECK(inst.graphs[0].vertices.size() == 256);
    // 8-neighbour grid: orthogonal travel 2, diagonal 3
    int orth = 0, diag = 0;
    for (const TgEdge& e : inst.graphs[0].edges) {
        (e.travel_time == 2.0 ? orth : diag)++;
        CHECK(e.cost.size() == 1);
        CHECK(e.cost[0] >= 0.0);
        CHECK(e.cost[0] <= 1.0);
    }
    CHECK(orth == 2 * 2 * 16 * 15);
    CHECK(diag == 2 * 2 * 15 * 15);
    REQUIRE(inst.spec->op == Op::And);
    CHECK(inst.spec->kids.size() == 3);
    CHECK(inst.spec->kids[0]->op == Op::Always);
    CHECK(inst.spec->kids[0]->k2 == 20);
    CHECK(inst.spec->kids[1]->op == Op::Eventually);
    CHECK(inst.spec->kids[1]->kids[0]->kids.size() == 3);
}

TEST_CASE("multi-target generation is deterministic per seed") {
    CHECK(gen_multi_target(8, 2, 3, 5).to_json() == gen_multi_target(8, 2, 3, 5).to_json());
    CHECK(gen_multi_target(8, 2, 3, 5).to_json() != gen_multi_target(8, 2, 3, 6).to_json());
    CHECK(gen_vrptw(2, 4, 20, 9, false).to_json() == gen_vrptw(2, 4, 20, 9, false).to_json());
    Scenario s;
    s.kind = ScenarioKind::MultiTarget;
    s.seed = 0xfedcba9876543210ULL;
    s.groups = 3;
    Scenario t = Scenario::from_json(s.to_json());
    CHECK(t.to_json() == s.to_json());
    CHECK(t.seed == s.seed);
    CHECK(scenario_kind("multi-target") == ScenarioKind::MultiTarget);
    CHECK_THROWS(scenario_kind("grid"));
}

TEST_CASE("multi-target preconditions and placement failure") {
    CHECK_THROWS_AS(gen_multi_target(3, 1, 1, 1), ModelError);
    CHECK_THROWS_AS(gen_multi_target(8, 0, 1, 1), ModelError);
    // one step is shorter than every travel time, so no target is ever reachable
    try {
        gen_multi_target(4, 1, 1, 1, 0, 1);
        FAIL("expected a placement error");
    } catch (const ModelError& e) {
        CHECK(std::string(e.what()).find("1000 attempts") != std::string::npos);
    }
}

TEST_CASE("single target without obstacles is a shortest path") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        Instance inst = gen_multi_target(4, 1, 1, seed, 0, 8);
        CHECK(inst.spec->op == Op::Eventually);
        int target = *inst.regions[0].at("tgt0_0").begin();
        double want = cheapest_arrival(inst.graphs[0], target, inst.T);
        for (Formulation f : {Formulation::Lt, Formulation::Lnf}) {
            SolveResult r = bb_solve(build_model(inst, f));
            REQUIRE(r.status == SolveStatus::Optimal);
            CHECK(r.incumbent == doctest::Approx(want).epsilon(1e-7));
        }
    }
}

TEST_CASE("vrptw templates") {
    Instance one = gen_vrptw(1, 1, 10, 3, false);
    CHECK(one.spec->op == Op::Eventually);
    CHECK(one.spec->kids[0]->op == Op::Always);
    CHECK(one.spec->kids[0]->k1 == 0);
    CHECK(one.spec->kids[0]->k2 == 2);
    CHECK(one.spec->k2 == 8);
    CHECK(one.graphs.size() == 1);

    Instance seq = gen_vrptw(2, 2, 12, 3, true);
    REQUIRE(seq.spec->op == Op::And);
    REQUIRE(seq.spec->kids[0]->op == Op::Or);
    CHECK(seq.spec->kids[0]->kids.size() == 4);  // ordered robot pairs
    CHECK(seq.spec->kids[0]->kids[0]->kids[0]->op == Op::Until);

    // dropping corridors keeps the graph connected
    Instance sparse = gen_vrptw(2, 2, 12, 3, false, 5, 0.5);
    CHECK(sparse.graphs[0].edges.size() < 2u * 2 * 5 * 4);
    CHECK(sparse.graphs[0].edges.size() >= 2u * 24);
    CHECK_THROWS_AS(gen_vrptw(0, 1, 10, 1, false), ModelError);
    CHECK_THROWS_AS(gen_vrptw(10, 1, 10, 1, false), ModelError);
}

TEST_CASE("desk-scale vrptw optimum matches joint enumeration") {
    Instance inst = gen_vrptw(2, 4, 20, 1, false);
    double want = vrptw_oracle(inst);
    REQUIRE(want < kInf);
    SolveResult r = bb_solve(build_model(inst, Formulation::Lnf));
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.incumbent == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("counter-example comparison") {
    Scenario s;
    s.kind = ScenarioKind::CounterExample;
    auto rec = run_comparison(s);
    REQUIRE(rec.size() == 2);
    CHECK(rec[0].formulation == "lt");
    CHECK(rec[0].root_gap == doctest::Approx(0.25));
    CHECK(rec[0].incumbent == doctest::Approx(2.0));
    CHECK(rec[1].formulation == "lnf");
    CHECK(rec[1].root_gap == doctest::Approx(0.0));
    CHECK(rec[1].incumbent == doctest::Approx(2.0));
    for (const auto& r : rec) {
        CHECK(r.status == "optimal");
        CHECK(r.n_bin > 0);
        CHECK(r.n_constr > 0);
    }
}

TEST_CASE("single forced atom gives the same record for both encodings") {
    Instance inst;
    inst.T = 0;
    inst.spec = atom("p");
    inst.atom_cost = {{"p", 3.0}};
    TrialRecord a = solve_trial(build_model(inst, Formulation::Lt), "single", 1, "lt", {});
    TrialRecord b = solve_trial(build_model(inst, Formulation::Lnf), "single", 1, "lnf", {});
    CHECK(a.incumbent == doctest::Approx(3.0));
    CHECK(b.incumbent == a.incumbent);
    CHECK(a.root_gap == 0.0);
    CHECK(b.root_gap == 0.0);
    CHECK(a.status == b.status);
    CHECK(a.nodes == b.nodes);
}

TEST_CASE("small multi-target batch keeps the gap ordering") {
    std::vector<Scenario> batch;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        Scenario s;
        s.kind = ScenarioKind::MultiTarget;
        s.grid = 4;
        s.groups = 1;
        s.targets = 2;
        s.horizon = 8;
        s.seed = seed;
        batch.push_back(s);
    }
    auto rec = run_batch(batch, {}, 2);
    REQUIRE(rec.size() == 8);
    for (std::size_t i = 0; i < rec.size(); i += 2) {
        CHECK(rec[i].formulation == "lt");
        CHECK(rec[i + 1].formulation == "lnf");
        CHECK(rec[i].seed == rec[i + 1].seed);
        REQUIRE(rec[i].status == "optimal");
        REQUIRE(rec[i + 1].status == "optimal");
        CHECK(rec[i + 1].root_gap <= rec[i].root_gap + 1e-6);
        CHECK(std::fabs(rec[i].incumbent - rec[i + 1].incumbent) <= 1e-6);
    }
    // same scenarios again: identical apart from wall time
    auto again = run_batch(batch, {}, 1);
    REQUIRE(again.size() == rec.size());
    for (std::size_t i = 0; i < rec.size(); ++i) {
        CHECK(again[i].incumbent == rec[i].incumbent);
        CHECK(again[i].root_gap == rec[i].root_gap);
        CHECK(again[i].nodes == rec[i].nodes);
        CHECK(again[i].n_constr == rec[i].n_constr);
    }
}

TEST_CASE("vrptw comparison separates the relaxations") {
    Scenario s;
    s.kind = ScenarioKind::Vrptw;
    s.robots = 1;
    s.tasks = 2;
    s.horizon = 10;
    s.seed = 4;
    auto rec = run_comparison(s);
    REQUIRE(rec.size() == 2);
    REQUIRE(rec[0].status == "optimal");
    REQUIRE(rec[1].status == "optimal");
    CHECK(rec[1].root_gap <= rec[0].root_gap + 1e-6);
}

TEST_CASE("limits propagate into records") {
    Scenario s;
    s.kind = ScenarioKind::Vrptw;
    s.robots = 2;
    s.tasks = 3;
    s.horizon = 16;
    s.seed = 1;
    BbOptions lim;
    lim.node_limit = 1;
    auto rec = run_comparison(s, lim);
    REQUIRE(rec.size() == 2);
    for (const auto& r : rec) CHECK((r.status == "node-limit" || r.status == "optimal"));
}

TEST_CASE("min-time comparison has three formulations") {
    Scenario s;
    s.kind = ScenarioKind::MinTime;
    s.horizon = 12;
    s.initial = {0.003, 0.0};
    auto rec = run_comparison(s);
    REQUIRE(rec.size() == 3);
    CHECK(rec[0].formulation == "gcs");
    CHECK(rec[1].formulation == "fm");
    CHECK(rec[2].formulation == "baseline");
    for (const auto& r : rec) {
        REQUIRE(r.status == "optimal");
        CHECK(r.incumbent == doctest::Approx(rec[0].incumbent));
    }
}

TEST_CASE("csv output") {
    CHECK(to_csv({}) == "scenario,seed,formulation,n_bin,n_cont,n_constr,root_gap,incumbent,lower_bound,status,wall_ms,nodes\n");
    std::vector<TrialRecord> two{record(1, "lt", 0.31, 2.5), record(1, "lnf", 0.1, 2.5)};
    std::string text = to_csv(two);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);

    auto path = std::filesystem::temp_directory_path() / "lnf_bench_roundtrip.csv";
    two.push_back(record(2, "lt", kInf, kInf));
    two.back().status = "time-limit";
    two.back().lower_bound = -kInf;
    two.push_back(record(0xffffffffffffffffULL, "lnf", 1.0 / 3.0, 1e-300));
    write_csv(two, path.string());
    auto back = read_csv(path.string());
    std::filesystem::remove(path);
    REQUIRE(back.size() == two.size());
    for (std::size_t i = 0; i < two.size(); ++i) {
        CHECK(back[i].scenario == two[i].scenario);
        CHECK(back[i].seed == two[i].seed);
        CHECK(back[i].formulation == two[i].formulation);
        CHECK(back[i].n_bin == two[i].n_bin);
        CHECK(back[i].n_cont == two[i].n_cont);
        CHECK(back[i].n_constr == two[i].n_constr);
        CHECK(back[i].root_gap == two[i].root_gap);
        CHECK(back[i].incumbent == two[i].incumbent);
        CHECK(back[i].lower_bound == two[i].lower_bound);
        CHECK(back[i].status == two[i].status);
        CHECK(back[i].wall_ms == two[i].wall_ms);
        CHECK(back[i].nodes == two[i].nodes);
    }
    CHECK_THROWS(parse_csv("a,b\n"));
    CHECK_THROWS(parse_csv(to_csv({}) + "x,1,lt\n"));
    CHECK_THROWS(write_csv(two, "/nonexistent-dir/x.csv"));
}

TEST_CASE("time limit interrupts a long relaxation") {
    Model m = build_model(gen_multi_target(8, 3, 3, 1), Formulation::Lnf);
    BbOptions lim;
    lim.time_limit = 0.2;
    SolveResult r = bb_solve(m, lim);
    CHECK(r.status == SolveStatus::TimeLimit);
    CHECK(r.seconds < 2.0);
    CHECK_FALSE(r.has_incumbent);
}
