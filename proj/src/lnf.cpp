#include "lnf/lnf.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace lnf {

std::vector<TimedAtom> Lnf::atoms() const {
    std::set<TimedAtom> s;
    for (const LnfEdge& e : edges)
        for (const TimedAtom& a : e.lits) s.insert({a.pred, a.k, false});
    return {s.begin(), s.end()};
}

std::vector<int> Lnf::out_edges(int v) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edges[i].tail == v) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> Lnf::in_edges(int v) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edges[i].head == v) out.push_back(static_cast<int>(i));
    return out;
}

void Lnf::check() const {
    if (infeasible) return;
    std::vector<char> fwd(num_vertices, 0), bwd(num_vertices, 0);
    for (const LnfEdge& e : edges) {
        if (e.tail < 0 || e.head < 0 || e.tail >= num_vertices || e.head >= num_vertices)
            throw FormulaError("edge endpoint out of range");
        if (e.tail >= e.head) throw FormulaError("edge against the topological order");
        for (std::size_t i = 1; i < e.lits.size(); ++i) {
            if (!(e.lits[i - 1] < e.lits[i])) throw FormulaError("edge literals not sorted and unique");
            if (e.lits[i].pred == e.lits[i - 1].pred && e.lits[i].k == e.lits[i - 1].k)
                throw FormulaError("edge holds an atom and its negation");
        }
    }
    fwd[source] = 1;
    for (int v = 0; v < num_vertices; ++v)
        if (fwd[v])
            for (const LnfEdge& e : edges)
                if (e.tail == v) fwd[e.head] = 1;
    bwd[target] = 1;
    for (int v = num_vertices - 1; v >= 0; --v)
        if (bwd[v])
            for (const LnfEdge& e : edges)
                if (e.head == v) bwd[e.tail] = 1;
    for (int v = 0; v < num_vertices; ++v)
        if (!fwd[v] || !bwd[v]) throw FormulaError("vertex " + std::to_string(v) + " is not on a source-target path");
}

std::string Lnf::to_dot() const {
    std::ostringstream o;
    o << "digraph lnf {\n  rankdir=LR;\n";
    for (int v = 0; v < num_vertices; ++v) {
        o << "  v" << v;
        if (v == source) o << " [label=\"v_s\"]";
        else if (v == target) o << " [label=\"v_t\"]";
        o << ";\n";
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        o << "  v" << edges[i].tail << " -> v" << edges[i].head << " [label=\"e" << i + 1 << ": ";
        for (std::size_t k = 0; k < edges[i].lits.size(); ++k) o << (k ? ", " : "") << to_string(edges[i].lits[k]);
        o << "\"];\n";
    }
    o << "}\n";
    return o.str();
}

namespace {

struct Dangling {
    int tail;
    std::vector<TimedAtom> lits;
};

struct Builder {
    const LogicTree& t;
    Lnf g;

    Dangling visit(const LtChild& c, Dangling d) {
        if (c.leaf) {
            d.lits.push_back(t.leaves[c.index]);
            return d;
        }
        const LtNode& n = t.nodes[c.index];
        if (n.type == NodeType::And) {
            for (const LtChild& k : n.kids) d = visit(k, std::move(d));
            return d;
        }
        std::vector<Dangling> branches;
        for (const LtChild& k : n.kids) branches.push_back(visit(k, d));
        int w = g.num_vertices++;
        for (Dangling& b : branches) g.edges.push_back({b.tail, w, std::move(b.lits)});
        return {w, {}};
    }
};

void normalize(std::vector<TimedAtom>& lits) {
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
}

bool contradictory(const std::vector<TimedAtom>& lits) {
    for (std::size_t i = 1; i < lits.size(); ++i)
        if (lits[i].pred == lits[i - 1].pred && lits[i].k == lits[i - 1].k) return true;
    return false;
}

}  // namespace

Lnf build_lnf(const LogicTree& t) {
    Builder b{t, {}};
    b.g.num_vertices = 1;
    b.g.source = 0;
    Dangling last = b.visit({false, t.root}, {0, {}});
    Lnf& g = b.g;
    if (last.lits.empty() && last.tail != g.source) {
        g.target = last.tail;
    } else {
        g.target = g.num_vertices++;
        g.edges.push_back({last.tail, g.target, std::move(last.lits)});
    }

    // drop contradictory edges, then everything off a source-target path
    std::vector<LnfEdge> kept;
    for (LnfEdge& e : g.edges) {
        normalize(e.lits);
        if (!contradictory(e.lits)) kept.push_back(std::move(e));
    }
    std::vector<char> fwd(g.num_vertices, 0), bwd(g.num_vertices, 0);
    fwd[g.source] = 1;
    for (int v = 0; v < g.num_vertices; ++v)
        if (fwd[v])
            for (const LnfEdge& e : kept)
                if (e.tail == v) fwd[e.head] = 1;
    bwd[g.target] = 1;
    for (int v = g.num_vertices - 1; v >= 0; --v)
        if (bwd[v])
            for (const LnfEdge& e : kept)
                if (e.head == v) bwd[e.tail] = 1;
    std::vector<int> renum(g.num_vertices, -1);
    int nv = 0;
    for (int v = 0; v < g.num_vertices; ++v)
        if (fwd[v] && bwd[v]) renum[v] = nv++;
    if (!fwd[g.target]) {
        Lnf empty;
        empty.num_vertices = 2;
        empty.target = 1;
        empty.infeasible = true;
        return empty;
    }
    // edges run from lower to higher vertex id (tails exist before heads are created),
    // so sorting by tail keeps a stable, readable order
    Lnf out;
    out.num_vertices = nv;
    out.source = renum[g.source];
    out.target = renum[g.target];
    for (LnfEdge& e : kept)
        if (renum[e.tail] >= 0 && renum[e.head] >= 0) out.edges.push_back({renum[e.tail], renum[e.head], std::move(e.lits)});
    out.check();
    return out;
}

FlowEncoding encode_lnf_flow(const Lnf& g, Model& m, AtomVars& zv, const FlowOptions& opt) {
    g.check();
    FlowEncoding enc;
    if (g.infeasible) {
        m.add_row("lnf_infeasible", {}, Sense::Eq, 1.0);
        return enc;
    }
    enc.atoms = g.atoms();
    const int P = static_cast<int>(enc.atoms.size());
    const int E = static_cast<int>(g.edges.size());
    for (const TimedAtom& a : enc.atoms) enc.z.push_back(zv.get(m, a));
    auto comp = [&](const TimedAtom& a) {
        return static_cast<int>(std::lower_bound(enc.atoms.begin(), enc.atoms.end(), TimedAtom{a.pred, a.k, false}) - enc.atoms.begin());
    };
    for (int e = 0; e < E; ++e) enc.y.push_back(m.add_binary("y" + std::to_string(e + 1)));
    enc.flow.assign(E, {});
    for (int e = 0; e < E; ++e)
        for (int j = 0; j < P; ++j)
            enc.flow[e].push_back(m.add_continuous("w" + std::to_string(e + 1) + "_" + std::to_string(j + 1), 0.0, 1.0));

    for (int e = 0; e < E; ++e) {
        std::vector<int> sign(P, 0);
        for (const TimedAtom& a : g.edges[e].lits) sign[comp(a)] = a.neg ? -1 : 1;
        const std::string base = "edge" + std::to_string(e + 1) + "_";
        for (int j = 0; j < P; ++j) {
            int w = enc.flow[e][j], y = enc.y[e];
            if (sign[j] == 1) m.add_row(base + "lo" + std::to_string(j + 1), {{w, 1.0}, {y, -1.0}}, Sense::Ge, 0.0);
            if (sign[j] == -1)
                m.add_row(base + "up" + std::to_string(j + 1), {{w, 1.0}}, Sense::Le, 0.0);
            else
                m.add_row(base + "up" + std::to_string(j + 1), {{w, 1.0}, {y, -1.0}}, Sense::Le, 0.0);
        }
        if (opt.completeness) {
            std::vector<Term> terms{{enc.y[e], 1.0}};
            double k = 0.0;
            for (const TimedAtom& a : g.edges[e].lits) k += add_literal(terms, enc.z[comp(a)], a.neg, -1.0);
            m.add_row(base + "complete", terms, Sense::Ge, 1.0 - static_cast<double>(g.edges[e].lits.size()) - k);
        }
    }

    for (int v = 0; v < g.num_vertices; ++v) {
        if (v == g.target) continue;
        std::vector<int> out = g.out_edges(v), in = g.in_edges(v);
        const std::string base = "v" + std::to_string(v) + "_";
        std::vector<Term> ty;
        for (int e : in) ty.push_back({enc.y[e], 1.0});
        for (int e : out) ty.push_back({enc.y[e], -1.0});
        if (v == g.source) {
            for (Term& t : ty) t.coef = -t.coef;
            m.add_row(base + "inject", ty, Sense::Eq, 1.0);
        }
        else {
            m.add_row(base + "conserve", ty, Sense::Eq, 0.0);
        }
        for (int j = 0; j < P; ++j) {
            std::vector<Term> tw;
            for (int e : in) tw.push_back({enc.flow[e][j], 1.0});
            for (int e : out) tw.push_back({enc.flow[e][j], -1.0});
            if (v == g.source) tw.push_back({enc.z[j], 1.0});
            m.add_row(base + "flow" + std::to_string(j + 1), tw, Sense::Eq, 0.0);
        }
    }
    return enc;
}

}  // namespace lnf
