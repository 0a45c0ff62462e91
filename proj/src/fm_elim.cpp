#include "lnf/fm_elim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>

namespace lnf {

std::vector<Constraint> reduce_rows(std::vector<Constraint> rows) {
    // key: sense (Le or Eq) and canonical coefficients
    using Key = std::pair<int, std::vector<std::pair<int, double>>>;
    std::map<Key, std::size_t> seen;
    std::vector<Constraint> out;
    std::vector<double> canon_rhs;
    for (Constraint& r : rows) {
        if (r.terms.empty()) {
            bool ok = r.sense == Sense::Le ? 0.0 <= r.rhs : r.sense == Sense::Ge ? 0.0 >= r.rhs : r.rhs == 0.0;
            if (ok) continue;
        }
        double s = r.sense == Sense::Ge ? -1.0 : 1.0;
        if (r.sense == Sense::Eq && !r.terms.empty() && r.terms.front().coef < 0.0) s = -1.0;
        Key key{r.sense == Sense::Eq ? 1 : 0, {}};
        for (const Term& t : r.terms) key.second.emplace_back(t.var, s * t.coef);
        double rhs = s * r.rhs;
        auto it = seen.find(key);
        if (it == seen.end()) {
            seen.emplace(std::move(key), out.size());
            out.push_back(std::move(r));
            canon_rhs.push_back(rhs);
            continue;
        }
        std::size_t k = it->second;
        if (key.first == 0 && rhs < canon_rhs[k]) {
            out[k] = std::move(r);
            canon_rhs[k] = rhs;
        } else if (key.first == 1 && rhs != canon_rhs[k]) {
            out.push_back(std::move(r));  // conflicting equalities stay visible
            canon_rhs.push_back(rhs);
        }
    }
    return out;
}

namespace {

// Series-parallel decomposition tree over edge indices.
struct SpNode {
    enum Kind { Edge, Series, Parallel } kind;
    int edge = -1;
    std::vector<int> kids;
};

std::optional<int> decompose(const Lnf& g, std::vector<SpNode>& nodes) {
    struct Cur {
        int tail, head, node;
        bool alive;
    };
    std::vector<Cur> cur;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        nodes.push_back({SpNode::Edge, static_cast<int>(e), {}});
        cur.push_back({g.edges[e].tail, g.edges[e].head, static_cast<int>(e), true});
    }
    auto combine = [&](SpNode::Kind kind, const std::vector<int>& parts) {
        SpNode n{kind, -1, {}};
        for (int p : parts) {
            if (nodes[p].kind == kind)
                n.kids.insert(n.kids.end(), nodes[p].kids.begin(), nodes[p].kids.end());
            else
                n.kids.push_back(p);
        }
        nodes.push_back(std::move(n));
        return static_cast<int>(nodes.size()) - 1;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        std::map<std::pair<int, int>, std::vector<int>> groups;
        for (std::size_t i = 0; i < cur.size(); ++i)
            if (cur[i].alive) groups[{cur[i].tail, cur[i].head}].push_back(static_cast<int>(i));
        for (auto& [ends, ids] : groups) {
            if (ids.size() < 2) continue;
            std::vector<int> parts;
            for (int i : ids) {
                parts.push_back(cur[i].node);
                cur[i].alive = false;
            }
            cur.push_back({ends.first, ends.second, combine(SpNode::Parallel, parts), true});
            changed = true;
        }
        for (int v = 0; v < g.num_vertices; ++v) {
            if (v == g.source || v == g.target) continue;
            int in = -1, out = -1, nin = 0, nout = 0;
            for (std::size_t i = 0; i < cur.size(); ++i) {
                if (!cur[i].alive) continue;
                if (cur[i].head == v) in = static_cast<int>(i), ++nin;
                if (cur[i].tail == v) out = static_cast<int>(i), ++nout;
            }
            if (nin != 1 || nout != 1) continue;
            cur[in].alive = cur[out].alive = false;
            int node = combine(SpNode::Series, {cur[in].node, cur[out].node});
            cur.push_back({cur[in].tail, cur[out].head, node, true});
            changed = true;
        }
    }
    std::optional<int> root;
    int alive = 0;
    for (const Cur& c : cur) {
        if (!c.alive) continue;
        ++alive;
        if (c.tail == g.source && c.head == g.target) root = c.node;
    }
    if (alive != 1) return std::nullopt;
    return root;
}

using Form = std::vector<int>;  // sorted edge ids
using Forms = std::vector<Form>;

class TooManyForms {};

// Keeps only maximal forms (y >= 0 makes subsets redundant).
void prune(Forms& f, std::size_t cap) {
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
    std::sort(f.begin(), f.end(), [](const Form& a, const Form& b) { return a.size() > b.size() || (a.size() == b.size() && a < b); });
    Forms keep;
    for (Form& x : f) {
        bool dominated = false;
        for (const Form& k : keep)
            if (std::includes(k.begin(), k.end(), x.begin(), x.end())) {
                dominated = true;
                break;
            }
        if (!dominated) keep.push_back(std::move(x));
    }
    if (keep.size() > cap) throw TooManyForms{};
    std::sort(keep.begin(), keep.end());
    f = std::move(keep);
}

Forms sum_forms(const std::vector<const Forms*>& parts, std::size_t cap) {
    Forms acc;
    bool any = false;
    for (const Forms* p : parts) {
        if (p->empty()) continue;
        if (!any) {
            acc = *p;
            any = true;
            continue;
        }
        Forms next;
        for (const Form& a : acc)
            for (const Form& b : *p) {
                Form u;
                std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
                next.push_back(std::move(u));
                if (next.size() > cap * 4) throw TooManyForms{};
            }
        prune(next, cap);
        acc = std::move(next);
    }
    return acc;
}

struct ProjRow {
    std::vector<std::pair<int, double>> y;  // edge -> coef
    double zcoef = 0.0;
    Sense sense = Sense::Le;
    double rhs = 0.0;
    std::string tag;
};

// Exact projection of one flow component through the series-parallel tree.
class SpProjector {
public:
    SpProjector(const Lnf& g, const std::vector<SpNode>& nodes, int root, std::size_t cap)
        : g_(g), nodes_(nodes), root_(root), cap_(cap) {}

    std::vector<ProjRow> run(const TimedAtom& a) {
        atom_ = a;
        rows_.clear();
        Info r = visit(root_, true);
        for (const Form& f : r.lo) {
            ProjRow row{{}, 1.0, Sense::Ge, 0.0, "lo"};
            for (int e : f) row.y.emplace_back(e, -1.0);
            rows_.push_back(std::move(row));
        }
        for (const Form& f : r.neg) {
            ProjRow row{{}, 1.0, Sense::Le, 1.0, "up"};
            for (int e : f) row.y.emplace_back(e, 1.0);
            rows_.push_back(std::move(row));
        }
        return rows_;
    }

private:
    struct Info {
        Forms lo, neg;
        Form cut;
    };
    const Lnf& g_;
    const std::vector<SpNode>& nodes_;
    int root_;
    std::size_t cap_;
    TimedAtom atom_;
    std::vector<ProjRow> rows_;

    int sign_on(int e) const {
        for (const TimedAtom& l : g_.edges[e].lits)
            if (l.pred == atom_.pred && l.k == atom_.k) return l.neg ? -1 : 1;
        return 0;
    }

    Info visit(int id, bool is_root) {
        const SpNode& n = nodes_[id];
        Info out;
        if (n.kind == SpNode::Edge) {
            int s = sign_on(n.edge);
            if (s > 0) out.lo = {{n.edge}};
            if (s < 0) out.neg = {{n.edge}};
            out.cut = {n.edge};
            return out;
        }
        std::vector<Info> kids;
        for (int k : n.kids) kids.push_back(visit(k, false));
        if (n.kind == SpNode::Parallel) {
            std::vector<const Forms*> lo, neg;
            for (const Info& k : kids) {
                lo.push_back(&k.lo);
                neg.push_back(&k.neg);
                out.cut.insert(out.cut.end(), k.cut.begin(), k.cut.end());
            }
            std::sort(out.cut.begin(), out.cut.end());
            out.lo = sum_forms(lo, cap_);
            out.neg = sum_forms(neg, cap_);
            return out;
        }
        out.cut = kids.front().cut;
        for (const Info& k : kids) {
            out.lo.insert(out.lo.end(), k.lo.begin(), k.lo.end());
            out.neg.insert(out.neg.end(), k.neg.begin(), k.neg.end());
        }
        prune(out.lo, cap_);
        prune(out.neg, cap_);
        // the common flow through the chain must fit every lower part next to every negated part
        for (std::size_t a = 0; a < kids.size(); ++a)
            for (std::size_t b = 0; b < kids.size(); ++b) {
                if (a == b) continue;
                for (const Form& f : kids[a].lo)
                    for (const Form& h : kids[b].neg) {
                        ProjRow row{{}, 0.0, Sense::Le, is_root ? 1.0 : 0.0, "x"};
                        for (int e : f) row.y.emplace_back(e, 1.0);
                        for (int e : h) row.y.emplace_back(e, 1.0);
                        if (!is_root)
                            for (int e : out.cut) row.y.emplace_back(e, -1.0);
                        rows_.push_back(std::move(row));
                    }
            }
        return out;
    }
};

// Plain Fourier-Motzkin over one component: columns [y_0..y_{E-1}, z, w_0..w_{E-1}].
class FmProjector {
public:
    explicit FmProjector(const Lnf& g) : g_(g), E_(static_cast<int>(g.edges.size())) {}

    std::vector<ProjRow> run(const TimedAtom& a) {
        const int n = 2 * E_ + 1, zc = E_;
        auto w = [&](int e) { return E_ + 1 + e; };
        std::vector<Row> rows;
        for (int e = 0; e < E_; ++e) {
            int s = 0;
            for (const TimedAtom& l : g_.edges[e].lits)
                if (l.pred == a.pred && l.k == a.k) s = l.neg ? -1 : 1;
            Row lo{std::vector<double>(n, 0.0), 0.0, false};
            lo.a[w(e)] = -1.0;
            if (s > 0) lo.a[e] = 1.0;
            rows.push_back(lo);
            Row up{std::vector<double>(n, 0.0), 0.0, false};
            up.a[w(e)] = 1.0;
            if (s >= 0) up.a[e] = -1.0;
            rows.push_back(up);
        }
        for (int v = 0; v < g_.num_vertices; ++v) {
            if (v == g_.target) continue;
            Row c{std::vector<double>(n, 0.0), 0.0, true};
            for (int e : g_.in_edges(v)) c.a[w(e)] += 1.0;
            for (int e : g_.out_edges(v)) c.a[w(e)] -= 1.0;
            if (v == g_.source) c.a[zc] = 1.0;
            rows.push_back(c);
        }
        std::vector<int> order(E_);
        for (int e = 0; e < E_; ++e) order[e] = e;
        std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return g_.edges[x].tail < g_.edges[y].tail; });
        for (int e : order) {
            eliminate(rows, w(e));
            clean(rows, E_ + 1);
        }
        std::vector<ProjRow> out;
        for (const Row& r : rows) {
            ProjRow p{{}, r.a[zc], r.eq ? Sense::Eq : Sense::Le, r.b, "fm"};
            for (int e = 0; e < E_; ++e)
                if (r.a[e] != 0.0) p.y.emplace_back(e, r.a[e]);
            out.push_back(std::move(p));
        }
        return out;
    }

private:
    struct Row {
        std::vector<double> a;
        double b;
        bool eq;
    };
    const Lnf& g_;
    int E_;

    static void eliminate(std::vector<Row>& rows, int v) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!rows[i].eq || std::fabs(rows[i].a[v]) < 1e-12) continue;
            Row piv = rows[i];
            rows.erase(rows.begin() + static_cast<long>(i));
            for (Row& r : rows) {
                double f = r.a[v] / piv.a[v];
                if (f == 0.0) continue;
                for (std::size_t k = 0; k < r.a.size(); ++k) r.a[k] -= f * piv.a[k];
                r.b -= f * piv.b;
                r.a[v] = 0.0;
            }
            return;
        }
        std::vector<Row> pos, neg, keep;
        for (Row& r : rows) {
            if (r.a[v] > 1e-12)
                pos.push_back(std::move(r));
            else if (r.a[v] < -1e-12)
                neg.push_back(std::move(r));
            else
                keep.push_back(std::move(r));
        }
        for (const Row& p : pos)
            for (const Row& q : neg) {
                Row c{std::vector<double>(p.a.size()), 0.0, false};
                double fp = 1.0 / p.a[v], fq = -1.0 / q.a[v];
                for (std::size_t k = 0; k < c.a.size(); ++k) c.a[k] = fp * p.a[k] + fq * q.a[k];
                c.a[v] = 0.0;
                c.b = fp * p.b + fq * q.b;
                keep.push_back(std::move(c));
            }
        rows = std::move(keep);
    }

    // All columns are nonnegative, so a <= row with no positive entry and b >= 0 is implied.
    // Flow columns at or after `first_flow` still need their explicit bounds for the elimination.
    static void clean(std::vector<Row>& rows, std::size_t first_flow) {
        std::vector<Row> out;
        std::set<std::pair<std::vector<long long>, bool>> seen;
        for (Row& r : rows) {
            double mx = 0.0;
            for (double& x : r.a) {
                if (std::fabs(x) < 1e-12) x = 0.0;
                mx = std::max(mx, std::fabs(x));
            }
            if (mx == 0.0) {
                if ((r.eq && std::fabs(r.b) < 1e-12) || (!r.eq && r.b >= -1e-12)) continue;
            } else {
                for (double& x : r.a) x /= mx;
                r.b /= mx;
                if (r.eq) {
                    auto first = std::find_if(r.a.begin(), r.a.end(), [](double x) { return x != 0.0; });
                    if (*first < 0.0) {
                        for (double& x : r.a) x = -x;
                        r.b = -r.b;
                    }
                }
            }
            if (!r.eq && r.b >= -1e-12 && std::none_of(r.a.begin(), r.a.end(), [](double x) { return x > 0.0; }) &&
                std::all_of(r.a.begin() + static_cast<long>(first_flow), r.a.end(), [](double x) { return x == 0.0; }))
                continue;
            std::vector<long long> key;
            for (double x : r.a) key.push_back(std::llround(x * 1e9));
            key.push_back(std::llround(r.b * 1e9));
            if (!seen.insert({key, r.eq}).second) continue;
            out.push_back(std::move(r));
        }
        // same coefficients, weaker right-hand side
        std::vector<char> drop(out.size(), 0);
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t j = 0; j < out.size(); ++j) {
                if (i == j || drop[j] || out[i].eq || out[j].eq) continue;
                bool same = true;
                for (std::size_t k = 0; k < out[i].a.size() && same; ++k) same = std::fabs(out[i].a[k] - out[j].a[k]) < 1e-9;
                if (same && (out[i].b > out[j].b + 1e-12 || (out[i].b == out[j].b && i > j))) drop[i] = 1;
            }
        rows.clear();
        for (std::size_t i = 0; i < out.size(); ++i)
            if (!drop[i]) rows.push_back(std::move(out[i]));
    }
};

}  // namespace

EliminationResult eliminate_flows(const Lnf& g, Model& m, const FlowEncoding& enc, const ElimOptions& opt) {
    EliminationResult res;
    res.stats.rows_before = m.num_rows();
    if (g.infeasible) {
        res.stats.rows_after = m.num_rows();
        return res;
    }
    const int E = static_cast<int>(g.edges.size());
    const int P = static_cast<int>(enc.atoms.size());
    if (static_cast<int>(enc.y.size()) != E || static_cast<int>(enc.flow.size()) != E || static_cast<int>(enc.z.size()) != P)
        throw ModelError("flow encoding does not match the graph");
    std::vector<char> is_flow(m.num_vars(), 0);
    for (const auto& per_edge : enc.flow) {
        if (static_cast<int>(per_edge.size()) != P) throw ModelError("flow encoding does not match the graph");
        for (int w : per_edge) {
            if (w < 0 || w >= m.num_vars()) throw ModelError("flow variable out of range");
            is_flow[w] = 1;
        }
    }

    std::vector<SpNode> nodes;
    std::optional<int> root;
    if (!opt.force_fm) root = decompose(g, nodes);
    std::vector<std::vector<ProjRow>> per_comp(P);
    bool sp = root.has_value();
    if (sp) {
        try {
            SpProjector proj(g, nodes, *root, opt.max_forms);
            for (int j = 0; j < P; ++j) per_comp[j] = proj.run(enc.atoms[j]);
        } catch (const TooManyForms&) {
            sp = false;
        }
    }
    if (!sp) {
        FmProjector proj(g);
        for (int j = 0; j < P; ++j) per_comp[j] = proj.run(enc.atoms[j]);
    }
    res.stats.series_parallel = sp;

    std::vector<int> drop_rows;
    for (int i = 0; i < m.num_rows(); ++i)
        for (const Term& t : m.rows[i].terms)
            if (is_flow[t.var]) {
                drop_rows.push_back(i);
                break;
            }
    m.remove_rows(drop_rows);
    std::vector<int> drop_vars;
    for (int v = 0; v < static_cast<int>(is_flow.size()); ++v)
        if (is_flow[v]) drop_vars.push_back(v);
    std::vector<int> remap = m.remove_vars(drop_vars);
    res.stats.vars_removed = static_cast<int>(drop_vars.size());
    for (int y : enc.y) res.y.push_back(remap[y]);
    for (int z : enc.z) res.z.push_back(remap[z]);

    std::vector<Constraint> gen;
    std::map<std::string, int> count;
    for (int j = 0; j < P; ++j) {
        for (const ProjRow& r : per_comp[j]) {
            Constraint c;
            c.name = "elim_" + r.tag + "_" + std::to_string(++count[r.tag]);
            c.sense = r.sense;
            c.rhs = r.rhs;
            std::map<int, double> acc;
            if (r.zcoef != 0.0) acc[res.z[j]] += r.zcoef;
            for (auto [e, a] : r.y) acc[res.y[e]] += a;
            for (auto [v, a] : acc)
                if (std::fabs(a) > 1e-12) c.terms.push_back({v, a});
            // every column is in [0,1]; rows implied by nonnegativity are dropped
            if (c.sense == Sense::Le && c.rhs >= 0.0 &&
                std::none_of(c.terms.begin(), c.terms.end(), [](const Term& t) { return t.coef > 0.0; }))
                continue;
            if (c.sense == Sense::Ge && c.rhs <= 0.0 &&
                std::none_of(c.terms.begin(), c.terms.end(), [](const Term& t) { return t.coef < 0.0; }))
                continue;
            gen.push_back(std::move(c));
        }
    }
    gen = reduce_rows(std::move(gen));
    for (Constraint& c : gen) {
        m.add_row(c.name, c.terms, c.sense, c.rhs);
        c = m.rows.back();
    }
    res.generated = std::move(gen);
    res.stats.rows_after = m.num_rows();
    return res;
}

EliminationResult encode_lnf(const Lnf& g, Model& m, AtomVars& z, const FlowOptions& fopt, const ElimOptions& eopt) {
    // atom variables must precede the flow columns so their indices survive the removal
    for (const TimedAtom& a : g.atoms()) z.get(m, a);
    FlowEncoding enc = encode_lnf_flow(g, m, z, fopt);
    return eliminate_flows(g, m, enc, eopt);
}

CdEncoding encode_cd_lnf(const CdForm& c, Model& m, AtomVars& zv, const CdOptions& opt) {
    CdEncoding enc;
    for (std::size_t l = 0; l < c.sections.size(); ++l) {
        const auto& sec = c.sections[l];
        const std::string base = "cd" + std::to_string(l + 1) + "_";
        enc.y.emplace_back();
        if (sec.empty()) {
            m.add_row(base + "unsatisfiable", {}, Sense::Eq, 1.0);
            continue;
        }
        std::vector<Term> pick;
        for (std::size_t a = 0; a < sec.size(); ++a) {
            std::string nm = c.sections.size() == 1 ? "y" + std::to_string(a + 1) : "y" + std::to_string(l + 1) + "_" + std::to_string(a + 1);
            enc.y.back().push_back(m.add_binary(nm));
            pick.push_back({enc.y.back().back(), 1.0});
        }
        m.add_row(base + "pick", pick, Sense::Eq, 1.0);
        std::map<std::pair<std::string, int>, std::pair<std::vector<int>, std::vector<int>>> by_atom;
        for (std::size_t a = 0; a < sec.size(); ++a)
            for (const TimedAtom& t : sec[a]) (t.neg ? by_atom[{t.pred, t.k}].second : by_atom[{t.pred, t.k}].first).push_back(enc.y.back()[a]);
        int n = 0;
        for (const auto& [key, ys] : by_atom) {
            int z = zv.get(m, key.first, key.second);
            ++n;
            if (!ys.first.empty()) {
                std::vector<Term> t{{z, 1.0}};
                for (int y : ys.first) t.push_back({y, -1.0});
                m.add_row(base + "lo" + std::to_string(n), t, Sense::Ge, 0.0);
            }
            if (!ys.second.empty()) {
                std::vector<Term> t{{z, 1.0}};
                for (int y : ys.second) t.push_back({y, 1.0});
                m.add_row(base + "up" + std::to_string(n), t, Sense::Le, 1.0);
            }
        }
        if (opt.completeness) {
            for (std::size_t a = 0; a < sec.size(); ++a) {
                std::vector<Term> t{{enc.y.back()[a], 1.0}};
                double k = 0.0;
                for (const TimedAtom& at : sec[a]) k += add_literal(t, zv.get(m, at), at.neg, -1.0);
                m.add_row(base + "complete" + std::to_string(a + 1), t, Sense::Ge, 1.0 - static_cast<double>(sec[a].size()) - k);
            }
        }
    }
    return enc;
}

}  // namespace lnf
