#include "lnf/check.hpp"

#include <cmath>
#include <functional>

namespace lnf {

std::map<std::string, std::set<int>> regions_from_predicates(const TemporalGraph& g, const PredicateTable& preds) {
    std::map<std::string, std::set<int>> out;
    for (const Predicate& p : preds.all()) {
        auto& r = out[p.name];
        for (std::size_t v = 0; v < g.vertices.size(); ++v) {
            const auto& pos = g.vertices[v].pos;
            if (pos.size() != p.a.size())
                throw ModelError("predicate " + p.name + " has dimension " + std::to_string(p.a.size()) + " but vertex " +
                                 g.vertices[v].id + " has a " + std::to_string(pos.size()) + "-dimensional position");
            double s = p.b;
            for (std::size_t d = 0; d < pos.size(); ++d) s += p.a[d] * pos[d];
            if (s >= 0.0) r.insert(static_cast<int>(v));
        }
    }
    return out;
}

void check_oracle_scale(const Instance& inst, const OracleLimits& lim) {
    if (inst.graphs.size() != 1) throw ModelError("input exceeds oracle scale: exactly one robot graph is supported");
    if (inst.pwa) throw ModelError("input exceeds oracle scale: continuous dynamics cannot be enumerated");
    const int n = static_cast<int>(inst.graphs[0].vertices.size());
    if (n > lim.max_vertices)
        throw ModelError("input exceeds oracle scale: " + std::to_string(n) + " vertices (limit " + std::to_string(lim.max_vertices) + ")");
    if (inst.T > lim.max_T)
        throw ModelError("input exceeds oracle scale: horizon " + std::to_string(inst.T) + " (limit " + std::to_string(lim.max_T) + ")");
    std::size_t atoms = atoms_of(*time_expand(inst.spec, inst.T)).size();
    if (atoms > static_cast<std::size_t>(lim.max_atoms))
        throw ModelError("input exceeds oracle scale: " + std::to_string(atoms) + " atoms (limit " + std::to_string(lim.max_atoms) + ")");
    if (inst.graphs[0].sources.size() != 1) throw ModelError("oracle needs exactly one source");
}

WalkOracle enumerate_walks(const Instance& inst, const OracleLimits& lim) {
    check_oracle_scale(inst, lim);
    const FormulaPtr exp = time_expand(inst.spec, inst.T);
    const std::vector<TimedAtom> atoms = atoms_of(*exp);
    const DnfNetwork net = expand_dnf(inst.graphs[0], inst.T);
    const auto& regions = inst.regions.at(0);
    const int T = inst.T;

    std::vector<int> at(T + 1, -1);  // vertex occupied at each step, -1 while travelling
    WalkOracle out;
    std::function<void(int, int, double)> walk = [&](int p, int k, double cost) {
        at[k] = p;
        if (k == T) {
            ++out.walks;
            BoolTrace tr;
            double c = cost;
            for (const TimedAtom& a : atoms) {
                auto& v = tr[a.pred];
                v.resize(T + 1, false);
                auto it = regions.find(a.pred);
                bool val = it != regions.end() && at[a.k] >= 0 && it->second.count(at[a.k]);
                v[a.k] = val;
                auto ct = inst.atom_cost.find(a.pred);
                if (val && ct != inst.atom_cost.end()) c += ct->second;
            }
            if (eval_satisfaction(*exp, tr) && c < out.optimum) {
                out.feasible = true;
                out.optimum = c;
                out.best = tr;
            }
            return;
        }
        for (int e : net.out_edges(p, k)) {
            const DnfEdge& de = net.edges[e];
            const int q = de.head / (T + 1), kk = de.head % (T + 1);
            for (int j = k + 1; j < kk; ++j) at[j] = -1;
            walk(q, kk, cost + de.cost);
        }
    };
    walk(net.sources.at(0), 0, 0.0);
    return out;
}

CheckReport check_instance(const Instance& inst, Formulation f, const BbOptions& limits, const OracleLimits& lim) {
    WalkOracle o = enumerate_walks(inst, lim);
    Model m = build_model(inst, f);
    SolveResult r = bb_solve(m, limits);
    CheckReport rep;
    rep.status = to_string(r.status);
    rep.oracle_value = o.optimum;
    rep.solver_value = r.has_incumbent ? r.incumbent : kInf;

    const FormulaPtr exp = time_expand(inst.spec, inst.T);
    if (r.has_incumbent) {
        BoolTrace tr;
        for (const TimedAtom& a : atoms_of(*exp)) {
            auto& v = tr[a.pred];
            v.resize(inst.T + 1, false);
            int j = m.find_var("z_" + a.pred + "_" + std::to_string(a.k));
            if (j < 0) {
                rep.sound = false;
                rep.detail = "no variable for atom " + to_string(a);
                return rep;
            }
            v[a.k] = r.x[j] > 0.5;
        }
        if (!eval_satisfaction(*exp, tr)) {
            rep.sound = false;
            rep.detail = "solver assignment violates the formula";
        }
    }
    if (r.status == SolveStatus::Infeasible) {
        if (o.feasible) {
            rep.complete = false;
            rep.detail = "solver infeasible, oracle optimum " + std::to_string(o.optimum);
        }
    } else if (r.status == SolveStatus::Optimal) {
        if (!o.feasible) {
            rep.complete = false;
            rep.detail = "solver found " + std::to_string(r.incumbent) + " but no walk satisfies the formula";
        } else if (std::fabs(r.incumbent - o.optimum) > 1e-6 * std::max(1.0, std::fabs(o.optimum))) {
            rep.complete = false;
            rep.detail = "optimum " + std::to_string(r.incumbent) + " vs enumeration " + std::to_string(o.optimum);
        }
    } else {
        rep.complete = false;
        rep.detail = "solver stopped with " + rep.status;
    }
    return rep;
}

namespace {

FormulaPtr random_formula(SplitMix64& rng, const std::vector<std::string>& preds, int depth, int budget) {
    auto leaf = [&] { return atom(preds[rng.below(static_cast<int>(preds.size()))], rng.below(3) == 0); };
    if (depth == 0 || budget <= 0) return leaf();
    auto window = [&](int& a, int& b) {
        a = rng.below(budget + 1);
        b = a + rng.below(budget - a + 1);
    };
    int a = 0, b = 0;
    switch (rng.below(6)) {
        case 0: return leaf();
        case 1: window(a, b); return eventually(a, b, random_formula(rng, preds, depth - 1, budget - b));
        case 2: window(a, b); return always(a, b, random_formula(rng, preds, depth - 1, budget - b));
        case 3: {
            window(a, b);
            return until(a, b, random_formula(rng, preds, depth - 1, budget - b), random_formula(rng, preds, depth - 1, budget - b));
        }
        case 4: return conj({random_formula(rng, preds, depth - 1, budget), random_formula(rng, preds, depth - 1, budget)});
        default: return disj({random_formula(rng, preds, depth - 1, budget), random_formula(rng, preds, depth - 1, budget)});
    }
}

}  // namespace

Instance random_micro_instance(std::uint64_t seed) {
    SplitMix64 rng(seed);
    const int n = 2 + rng.below(4);
    Instance inst;
    inst.T = 2 + rng.below(5);
    TemporalGraph g;
    for (int v = 0; v < n; ++v) g.add_vertex("p" + std::to_string(v), {rng.uniform(), rng.uniform()});
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v && rng.uniform() < 0.45) g.add_edge(u, v, 1.0 + rng.below(2), 1, {rng.uniform()});
    g.hold_cost.resize(n);
    for (int v = 0; v < n; ++v) g.hold_cost[v] = {0.5 * rng.uniform()};
    g.sources = {rng.below(n)};
    inst.graphs = {g};

    const int np = 2 + rng.below(2);
    std::vector<std::string> preds;
    inst.regions.emplace_back();
    for (int i = 0; i < np; ++i) {
        preds.push_back("q" + std::to_string(i));
        std::set<int> r;
        for (int v = 0; v < n; ++v)
            if (rng.uniform() < 0.4) r.insert(v);
        if (r.empty()) r.insert(rng.below(n));
        inst.regions[0][preds.back()] = r;
        if (rng.below(2)) inst.atom_cost[preds.back()] = rng.uniform();
    }
    for (int attempt = 0;; ++attempt) {
        FormulaPtr f = random_formula(rng, preds, 3, inst.T);
        if (horizon(*f) > inst.T) continue;
        if (atoms_of(*time_expand(f, inst.T)).size() > 12) continue;
        inst.spec = f;
        return inst;
    }
}

}  // namespace lnf
