#include "lnf/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <atomic>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "lnf/fm_elim.hpp"
#include "lnf/lnf.hpp"
#include "lnf/logic_tree.hpp"

namespace lnf {

using json = nlohmann::json;

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int SplitMix64::below(int n) {
    if (n <= 0) throw std::invalid_argument("below() needs a positive bound");
    return std::min(n - 1, static_cast<int>(uniform() * n));
}

// ---------------------------------------------------------------- scenarios

namespace {

const std::pair<ScenarioKind, const char*> kKinds[] = {
    {ScenarioKind::MultiTarget, "multi_target"}, {ScenarioKind::Vrptw, "vrptw"},
    {ScenarioKind::Sequential, "sequential"},    {ScenarioKind::PointMass, "point_mass"},
    {ScenarioKind::MinTime, "min_time"},         {ScenarioKind::CounterExample, "counter_example"},
};

std::string fmt_double(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = b + s.size();
    if (!s.empty() && s[0] == '+') ++b;
    auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc() || r.ptr != e) throw std::runtime_error("bad number '" + s + "'");
    return v;
}

}  // namespace

const char* to_string(ScenarioKind k) {
    for (auto& [kind, name] : kKinds)
        if (kind == k) return name;
    return "?";
}

ScenarioKind scenario_kind(const std::string& s) {
    std::string t = s;
    std::replace(t.begin(), t.end(), '-', '_');
    for (auto& [kind, name] : kKinds)
        if (t == name) return kind;
    throw std::invalid_argument("unknown scenario kind '" + s + "'");
}

std::string Scenario::id() const {
    std::string out = to_string(kind);
    switch (kind) {
        case ScenarioKind::MultiTarget:
            out += "_g" + std::to_string(grid > 0 ? grid : 8) + "_n" + std::to_string(groups) + "_t" + std::to_string(targets);
            break;
        case ScenarioKind::Vrptw:
        case ScenarioKind::Sequential:
            out += "_g" + std::to_string(grid > 0 ? grid : 3) + "_r" + std::to_string(robots) + "_k" + std::to_string(tasks) + "_T" + std::to_string(horizon);
            break;
        case ScenarioKind::PointMass:
        case ScenarioKind::MinTime: out += "_T" + std::to_string(horizon); break;
        case ScenarioKind::CounterExample: break;
    }
    return out;
}

std::string Scenario::to_json() const {
    json j;
    j["kind"] = to_string(kind);
    j["seed"] = seed;
    j["grid"] = grid;
    j["groups"] = groups;
    j["targets"] = targets;
    j["robots"] = robots;
    j["tasks"] = tasks;
    j["horizon"] = horizon;
    j["cost_lo"] = cost_lo;
    j["cost_hi"] = cost_hi;
    j["drop"] = drop;
    j["initial"] = initial;
    return j.dump();
}

Scenario Scenario::from_json(const std::string& text) {
    json j = json::parse(text);
    Scenario s;
    s.kind = scenario_kind(j.at("kind").get<std::string>());
    s.seed = j.value("seed", s.seed);
    s.grid = j.value("grid", s.grid);
    s.groups = j.value("groups", s.groups);
    s.targets = j.value("targets", s.targets);
    s.robots = j.value("robots", s.robots);
    s.tasks = j.value("tasks", s.tasks);
    s.horizon = j.value("horizon", s.horizon);
    s.cost_lo = j.value("cost_lo", s.cost_lo);
    s.cost_hi = j.value("cost_hi", s.cost_hi);
    s.drop = j.value("drop", s.drop);
    s.initial = j.value("initial", s.initial);
    return s;
}

std::string Instance::to_json() const {
    json j;
    j["T"] = T;
    j["spec"] = spec ? to_string(*spec) : "";
    j["graphs"] = json::array();
    for (const TemporalGraph& g : graphs) j["graphs"].push_back(json::parse(g.to_json()));
    j["regions"] = json::array();
    for (const auto& r : regions) {
        json m = json::object();
        for (const auto& [pred, vs] : r) m[pred] = std::vector<int>(vs.begin(), vs.end());
        j["regions"].push_back(m);
    }
    j["atom_cost"] = atom_cost;
    if (pwa) {
        j["modes"] = json::array();
        for (const PwaMode& md : pwa->modes) j["modes"].push_back(md.name);
    }
    return j.dump();
}

// ---------------------------------------------------------------- generators

namespace {

// earliest arrival times from `src`, never entering `blocked`
std::vector<double> arrival_times(const TemporalGraph& g, int src, const std::set<int>& blocked) {
    const int n = static_cast<int>(g.vertices.size());
    std::vector<std::vector<int>> out(n);
    for (std::size_t e = 0; e < g.edges.size(); ++e) out[g.edges[e].from].push_back(static_cast<int>(e));
    std::vector<double> t(n, kInf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> q;
    t[src] = 0.0;
    q.push({0.0, src});
    while (!q.empty()) {
        auto [d, v] = q.top();
        q.pop();
        if (d > t[v]) continue;
        for (int e : out[v]) {
            int w = g.edges[e].to;
            if (blocked.count(w)) continue;
            double nd = d + g.edges[e].travel_time;
            if (nd < t[w]) {
                t[w] = nd;
                q.push({nd, w});
            }
        }
    }
    return t;
}

// distinct vertices from [0, n) outside `taken`, added to `taken`
std::vector<int> pick(SplitMix64& rng, int n, int count, std::set<int>& taken) {
    if (count + static_cast<int>(taken.size()) > n) throw ModelError("grid too small for the requested placements");
    std::vector<int> out;
    while (static_cast<int>(out.size()) < count) {
        int v = rng.below(n);
        if (taken.insert(v).second) out.push_back(v);
    }
    return out;
}

TemporalGraph grid_graph(int side) {
    TemporalGraph g;
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x)
            g.add_vertex("v" + std::to_string(x) + "_" + std::to_string(y), {static_cast<double>(x), static_cast<double>(y)});
    return g;
}

}  // namespace

Instance gen_multi_target(int grid, int groups, int targets, std::uint64_t seed, int obstacles, int T, double cost_lo,
                          double cost_hi) {
    if (grid < 4) throw ModelError("grid must be at least 4");
    if (groups < 1 || targets < 1) throw ModelError("need at least one group and one target per group");
    if (obstacles < 0) obstacles = 2 * groups;
    if (T <= 0) T = 10 * groups;
    SplitMix64 rng(seed);

    TemporalGraph g = grid_graph(grid);
    for (int y = 0; y < grid; ++y)
        for (int x = 0; x < grid; ++x)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (!dx && !dy) continue;
                    int nx = x + dx, ny = y + dy;
                    if (nx < 0 || ny < 0 || nx >= grid || ny >= grid) continue;
                    g.add_edge(y * grid + x, ny * grid + nx, dx && dy ? 3.0 : 2.0, 1, {rng.uniform(cost_lo, cost_hi)});
                }

    const int n = grid * grid;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::set<int> taken;
        int src = pick(rng, n, 1, taken)[0];
        std::vector<int> obs = pick(rng, n, obstacles, taken);
        std::vector<std::vector<int>> tgt;
        for (int k = 0; k < groups; ++k) tgt.push_back(pick(rng, n, targets, taken));

        std::vector<double> t = arrival_times(g, src, std::set<int>(obs.begin(), obs.end()));
        bool ok = true;
        for (const auto& grp : tgt)
            ok = ok && std::any_of(grp.begin(), grp.end(), [&](int v) { return t[v] <= T + 1e-9; });
        if (!ok) continue;

        Instance inst;
        g.sources = {src};
        inst.graphs = {g};
        inst.T = T;
        inst.regions.emplace_back();
        auto& reg = inst.regions[0];
        std::vector<FormulaPtr> parts;
        if (!obs.empty()) {
            reg["obs"] = std::set<int>(obs.begin(), obs.end());
            parts.push_back(always(0, T, atom("obs", true)));
        }
        for (int k = 0; k < groups; ++k) {
            std::vector<FormulaPtr> alts;
            for (int l = 0; l < targets; ++l) {
                std::string name = "tgt" + std::to_string(k) + "_" + std::to_string(l);
                reg[name] = {tgt[k][l]};
                alts.push_back(atom(name));
            }
            parts.push_back(eventually(0, T, alts.size() == 1 ? alts[0] : disj(alts)));
        }
        inst.spec = parts.size() == 1 ? parts[0] : conj(parts);
        return inst;
    }
    throw ModelError("no feasible placement after 1000 attempts: obstacles cut every target of some group off within " +
                     std::to_string(T) + " steps");
}

Instance gen_vrptw(int robots, int tasks, int T, std::uint64_t seed, bool sequential, int grid, double drop, double cost_lo,
                   double cost_hi) {
    if (robots < 1 || tasks < 1) throw ModelError("need at least one robot and one task");
    if (grid < 2) throw ModelError("grid must be at least 2");
    if (T < 3) throw ModelError("horizon must leave room for the dwell window");
    SplitMix64 rng(seed);
    const int n = grid * grid;
    if (robots > n) throw ModelError("more robots than vertices");

    // corridors between 4-neighbours, both directions sharing travel time and cost
    struct Corridor {
        int a, b;
        double travel, cost;
    };
    std::vector<Corridor> cor;
    for (int y = 0; y < grid; ++y)
        for (int x = 0; x < grid; ++x) {
            int v = y * grid + x;
            if (x + 1 < grid) cor.push_back({v, v + 1, 1.0 + rng.below(2), rng.uniform(cost_lo, cost_hi)});
            if (y + 1 < grid) cor.push_back({v, v + grid, 1.0 + rng.below(2), rng.uniform(cost_lo, cost_hi)});
        }
    std::vector<char> keep(cor.size(), 1);
    auto connected = [&]() {
        std::vector<std::vector<int>> adj(n);
        for (std::size_t i = 0; i < cor.size(); ++i)
            if (keep[i]) {
                adj[cor[i].a].push_back(cor[i].b);
                adj[cor[i].b].push_back(cor[i].a);
            }
        std::vector<char> seen(n, 0);
        std::vector<int> st{0};
        seen[0] = 1;
        int cnt = 1;
        while (!st.empty()) {
            int v = st.back();
            st.pop_back();
            for (int w : adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    ++cnt;
                    st.push_back(w);
                }
        }
        return cnt == n;
    };
    for (std::size_t i = 0; i < cor.size(); ++i) {
        if (rng.uniform() >= drop) continue;
        keep[i] = 0;
        if (!connected()) keep[i] = 1;
    }

    TemporalGraph g = grid_graph(grid);
    for (std::size_t i = 0; i < cor.size(); ++i) {
        if (!keep[i]) continue;
        g.add_edge(cor[i].a, cor[i].b, cor[i].travel, 1, {cor[i].cost});
        g.add_edge(cor[i].b, cor[i].a, cor[i].travel, 1, {cor[i].cost});
    }
    g.hold_cost.resize(n);
    for (int v = 0; v < n; ++v) g.hold_cost[v] = {rng.uniform(cost_lo, cost_hi)};

    Instance inst;
    inst.T = T;
    std::set<int> taken;
    std::vector<int> src = pick(rng, n, robots, taken);
    for (int r = 0; r < robots; ++r) {
        TemporalGraph gr = g;
        gr.sources = {src[r]};
        inst.graphs.push_back(std::move(gr));
    }
    inst.regions.resize(robots);
    auto pred = [](int r, const std::string& what) { return "r" + std::to_string(r) + "_" + what; };
    const int last = T - 2;  // latest dwell start that fits the horizon
    auto dwell = [&](const std::string& p, int from) { return eventually(from, last, always(0, 2, atom(p))); };

    std::vector<FormulaPtr> clauses;
    for (int t = 0; t < tasks; ++t) {
        if (!sequential) {
            int v = rng.below(n);
            int open = rng.below(last / 2 + 1);
            std::vector<FormulaPtr> alts;
            for (int r = 0; r < robots; ++r) {
                inst.regions[r][pred(r, "t" + std::to_string(t))] = {v};
                alts.push_back(dwell(pred(r, "t" + std::to_string(t)), open));
            }
            clauses.push_back(alts.size() == 1 ? alts[0] : disj(alts));
        } else {
            int a = rng.below(n), b = rng.below(n);
            const std::string an = "a" + std::to_string(t), bn = "b" + std::to_string(t);
            for (int r = 0; r < robots; ++r) {
                inst.regions[r][pred(r, an)] = {a};
                inst.regions[r][pred(r, bn)] = {b};
            }
            std::vector<FormulaPtr> alts;
            for (int r1 = 0; r1 < robots; ++r1)
                for (int r2 = 0; r2 < robots; ++r2)
                    alts.push_back(conj({until(0, last, atom(pred(r2, bn), true), atom(pred(r1, an))), dwell(pred(r2, bn), 0)}));
            clauses.push_back(alts.size() == 1 ? alts[0] : disj(alts));
        }
    }
    inst.spec = clauses.size() == 1 ? clauses[0] : conj(clauses);
    return inst;
}

Instance gen_counter_example() {
    Instance inst;
    inst.T = 0;
    inst.spec = disj({conj({atom("p1"), atom("p2")}), conj({atom("p2"), atom("p3")})});
    inst.atom_cost = {{"p1", 1.0}, {"p2", 1.0}, {"p3", 1.0}};
    return inst;
}

Instance gen_point_mass(int T, std::uint64_t seed) {
    if (T < 2) throw ModelError("horizon must be at least 2");
    SplitMix64 rng(seed);
    const std::vector<Box2> env = point_mass_environment();
    Instance inst;
    inst.T = T;
    inst.pwa = point_mass(env, 0.5, 1.0, 1.0, Eigen::Vector4d(1.0, 0.75, 0.0, 0.0));
    // targets within reach of the start box; every step in a region carries a random cost
    const int reach[] = {1, 2, 3, 5};
    int a = reach[rng.below(4)];
    inst.spec = eventually(0, T - 1, atom("region" + std::to_string(a)));
    for (std::size_t r = 0; r < env.size(); ++r) inst.atom_cost["region" + std::to_string(r)] = rng.uniform();
    return inst;
}

Instance build_instance(const Scenario& s) {
    switch (s.kind) {
        case ScenarioKind::MultiTarget:
            return gen_multi_target(s.grid > 0 ? s.grid : 8, s.groups, s.targets, s.seed, -1, s.horizon, s.cost_lo, s.cost_hi);
        case ScenarioKind::Vrptw:
        case ScenarioKind::Sequential:
            return gen_vrptw(s.robots, s.tasks, s.horizon > 0 ? s.horizon : 20, s.seed, s.kind == ScenarioKind::Sequential,
                             s.grid > 0 ? s.grid : 3, s.drop, s.cost_lo, s.cost_hi);
        case ScenarioKind::CounterExample: return gen_counter_example();
        case ScenarioKind::PointMass: return gen_point_mass(s.horizon > 0 ? s.horizon : 12, s.seed);
        case ScenarioKind::MinTime: throw ModelError("min_time scenarios have no logic instance");
    }
    throw ModelError("unknown scenario kind");
}

// ---------------------------------------------------------------- models

const char* to_string(Formulation f) {
    switch (f) {
        case Formulation::Lt: return "lt";
        case Formulation::LnfFlow: return "lnf-flow";
        case Formulation::Lnf: return "lnf";
        case Formulation::Cd: return "cd";
    }
    return "?";
}

Formulation formulation(const std::string& s) {
    if (s == "lt") return Formulation::Lt;
    if (s == "lnf-flow" || s == "lnf_flow") return Formulation::LnfFlow;
    if (s == "lnf") return Formulation::Lnf;
    if (s == "cd") return Formulation::Cd;
    throw std::invalid_argument("unknown formulation '" + s + "'");
}

Model build_model(const Instance& inst, Formulation f) {
    if (!inst.spec) throw ModelError("instance has no specification");
    if (inst.regions.size() != inst.graphs.size()) throw ModelError("one region map per robot graph is required");
    Model m;
    m.name = to_string(f);
    AtomVars z;
    FormulaPtr exp = time_expand(inst.spec, inst.T);
    // atoms first: elimination only renumbers columns created after them
    for (const TimedAtom& a : atoms_of(*exp)) z.get(m, a);

    for (std::size_t r = 0; r < inst.graphs.size(); ++r) {
        DnfNetwork net = expand_dnf(inst.graphs[r], inst.T);
        DnfOptions opt;
        opt.prefix = "r" + std::to_string(r);
        encode_dnf(net, m, inst.regions[r], z, opt);
    }
    if (inst.pwa) {
        PwaOptions opt;
        opt.alias_predicates = true;
        encode_pwa_bigm(*inst.pwa, inst.T, m, z, opt);
    }
    for (const auto& [key, v] : z.all()) {
        auto it = inst.atom_cost.find(key.first);
        if (it != inst.atom_cost.end()) m.add_obj(v, it->second);
    }

    switch (f) {
        case Formulation::Lt: encode_lt(build_tree(*exp), m, z); break;
        case Formulation::LnfFlow: encode_lnf_flow(build_lnf(build_tree(*exp)), m, z); break;
        case Formulation::Lnf: encode_lnf(build_lnf(build_tree(*exp)), m, z); break;
        case Formulation::Cd: encode_cd_lnf(to_cd_form(*exp), m, z); break;
    }
    return m;
}

// ---------------------------------------------------------------- trials

TrialRecord solve_trial(const Model& m, const std::string& scenario, std::uint64_t seed, const std::string& formulation,
                        const BbOptions& limits) {
    TrialRecord rec;
    rec.scenario = scenario;
    rec.seed = seed;
    rec.formulation = formulation;
    rec.n_bin = m.num_binary();
    rec.n_cont = m.num_continuous();
    rec.n_constr = m.num_rows();
    auto t0 = std::chrono::steady_clock::now();
    SolveResult r = bb_solve(m, limits);
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rec.status = to_string(r.status);
    rec.incumbent = r.has_incumbent ? r.incumbent : kInf;
    rec.lower_bound = r.lower_bound;
    rec.root_gap = r.has_incumbent ? r.root_gap : kInf;
    rec.nodes = r.nodes;
    rec.events = r.events;
    return rec;
}

namespace {

void check_agreement(const std::vector<TrialRecord>& recs, const BbOptions& limits) {
    const TrialRecord* ref = nullptr;
    for (const TrialRecord& r : recs) {
        if (r.status != to_string(SolveStatus::Optimal)) continue;
        if (!ref) {
            ref = &r;
            continue;
        }
        // both values are within gap_tol of the true optimum
        double tol = std::max(1e-6, 2.0 * limits.gap_tol * std::max(std::fabs(ref->incumbent), std::fabs(r.incumbent)));
        if (std::fabs(ref->incumbent - r.incumbent) > tol)
            throw ModelError(r.scenario + ": optimal values disagree (" + ref->formulation + " " + fmt_double(ref->incumbent) +
                             ", " + r.formulation + " " + fmt_double(r.incumbent) + ")");
    }
}

}  // namespace

std::vector<TrialRecord> run_comparison(const Scenario& s, const BbOptions& limits) {
    std::vector<TrialRecord> out;
    const std::string id = s.id();
    if (s.kind == ScenarioKind::MinTime) {
        Eigen::Vector2d init(0.04, 0.0);
        if (s.initial.size() == 2) init = Eigen::Vector2d(s.initial[0], s.initial[1]);
        MinTimeModels mm = build_min_time_models(double_integrator(s.horizon > 0 ? s.horizon : 50, init));
        out.push_back(solve_trial(mm.gcs.model, id, s.seed, "gcs", limits));
        out.push_back(solve_trial(eliminate_gcs_flows(mm.gcs), id, s.seed, "fm", limits));
        out.push_back(solve_trial(mm.baseline, id, s.seed, "baseline", limits));
    } else {
        Instance inst = build_instance(s);
        out.push_back(solve_trial(build_model(inst, Formulation::Lt), id, s.seed, "lt", limits));
        out.push_back(solve_trial(build_model(inst, Formulation::Lnf), id, s.seed, "lnf", limits));
    }
    check_agreement(out, limits);
    return out;
}

std::vector<TrialRecord> run_batch(const std::vector<Scenario>& s, const BbOptions& limits, int jobs) {
    std::vector<std::vector<TrialRecord>> res(s.size());
    std::vector<std::string> err(s.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i; (i = next++) < s.size();) {
            try {
                res[i] = run_comparison(s[i], limits);
            } catch (const std::exception& e) {
                err[i] = e.what();
            }
        }
    };
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(s.size())));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    std::vector<TrialRecord> out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!err[i].empty()) {
            TrialRecord r;
            r.scenario = s[i].id();
            r.seed = s[i].seed;
            r.formulation = "-";
            r.status = "error";
            out.push_back(r);
            continue;
        }
        out.insert(out.end(), res[i].begin(), res[i].end());
    }
    return out;
}

// ---------------------------------------------------------------- csv

namespace {

const char* kHeader = "scenario,seed,formulation,n_bin,n_cont,n_constr,root_gap,incumbent,lower_bound,status,wall_ms,nodes";

}  // namespace

std::string to_csv(const std::vector<TrialRecord>& records) {
    std::string out = kHeader;
    out += '\n';
    for (const TrialRecord& r : records) {
        if (r.scenario.find(',') != std::string::npos || r.formulation.find(',') != std::string::npos)
            throw std::invalid_argument("record fields must not contain commas");
        out += r.scenario + ',' + std::to_string(r.seed) + ',' + r.formulation + ',' + std::to_string(r.n_bin) + ',' +
               std::to_string(r.n_cont) + ',' + std::to_string(r.n_constr) + ',' + fmt_double(r.root_gap) + ',' +
               fmt_double(r.incumbent) + ',' + fmt_double(r.lower_bound) + ',' + r.status + ',' + fmt_double(r.wall_ms) +
               ',' + std::to_string(r.nodes) + '\n';
    }
    return out;
}

void write_csv(const std::vector<TrialRecord>& records, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << to_csv(records);
    if (!f) throw std::runtime_error("write to " + path + " failed");
}

std::vector<TrialRecord> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kHeader) throw std::runtime_error("missing or unexpected CSV header");
    std::vector<TrialRecord> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::size_t p = 0;
        for (std::size_t q; (q = line.find(',', p)) != std::string::npos; p = q + 1) f.push_back(line.substr(p, q - p));
        f.push_back(line.substr(p));
        if (f.size() != 12) throw std::runtime_error("line " + std::to_string(lineno) + ": expected 12 fields");
        TrialRecord r;
        try {
            r.scenario = f[0];
            r.seed = std::stoull(f[1]);
            r.formulation = f[2];
            r.n_bin = std::stoi(f[3]);
            r.n_cont = std::stoi(f[4]);
            r.n_constr = std::stoi(f[5]);
            r.root_gap = parse_double(f[6]);
            r.incumbent = parse_double(f[7]);
            r.lower_bound = parse_double(f[8]);
            r.status = f[9];
            r.wall_ms = parse_double(f[10]);
            r.nodes = std::stol(f[11]);
        } catch (const std::exception& e) {
            throw std::runtime_error("line " + std::to_string(lineno) + ": " + e.what());
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<TrialRecord> read_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_csv(ss.str());
}

}  // namespace lnf
