#include "lnf/logic_tree.hpp"

#include <algorithm>
#include <limits>

namespace lnf {

int AtomVars::get(Model& m, const std::string& pred, int k) {
    auto key = std::make_pair(pred, k);
    auto it = vars_.find(key);
    if (it != vars_.end()) return it->second;
    int v = m.add_binary("z_" + pred + "_" + std::to_string(k));
    vars_.emplace(key, v);
    return v;
}

int AtomVars::find(const std::string& pred, int k) const {
    auto it = vars_.find({pred, k});
    return it == vars_.end() ? -1 : it->second;
}

bool AtomVars::bind(const std::string& pred, int k, int var) { return vars_.emplace(std::make_pair(pred, k), var).second; }

double add_literal(std::vector<Term>& terms, int zvar, bool neg, double coef) {
    if (!neg) {
        terms.push_back({zvar, coef});
        return 0.0;
    }
    terms.push_back({zvar, -coef});
    return coef;
}

namespace {

int build_rec(const Formula& f, LogicTree& t, bool flatten) {
    int id = static_cast<int>(t.nodes.size());
    t.nodes.push_back({f.op == Op::Or ? NodeType::Or : NodeType::And, {}, std::numeric_limits<int>::max()});
    auto add_kids = [&](auto&& self, const Formula& g) -> void {
        for (const auto& c : g.kids) {
            if (c->op == Op::Atom) {
                if (c->time < 0) throw FormulaError("logic tree needs a time-expanded formula");
                t.leaves.push_back({c->pred, c->time, c->neg});
                t.nodes[id].kids.push_back({true, static_cast<int>(t.leaves.size()) - 1});
                t.nodes[id].start = std::min(t.nodes[id].start, c->time);
            } else if (flatten && c->op == g.op) {
                self(self, *c);
            } else if (c->op == Op::And || c->op == Op::Or) {
                int k = build_rec(*c, t, flatten);
                t.nodes[id].kids.push_back({false, k});
                t.nodes[id].start = std::min(t.nodes[id].start, t.nodes[k].start);
            } else {
                throw FormulaError("logic tree needs a time-expanded formula");
            }
        }
    };
    add_kids(add_kids, f);
    return id;
}

}  // namespace

LogicTree build_tree(const Formula& p, bool flatten) {
    LogicTree t;
    if (p.op == Op::Atom) {
        if (p.time < 0) throw FormulaError("logic tree needs a time-expanded formula");
        t.leaves.push_back({p.pred, p.time, p.neg});
        t.nodes.push_back({NodeType::And, {{true, 0}}, p.time});
        return t;
    }
    if (p.op != Op::And && p.op != Op::Or) throw FormulaError("logic tree needs a time-expanded formula");
    build_rec(p, t, flatten);
    return t;
}

LtEncoding encode_lt(const LogicTree& t, Model& m, AtomVars& z) {
    LtEncoding enc;
    enc.first_row = m.num_rows();
    for (std::size_t i = 0; i < t.nodes.size(); ++i) enc.node_var.push_back(m.add_binary("lt_" + std::to_string(i)));

    // value of child c appears as (coef * var) + constant
    auto child_term = [&](const LtChild& c, std::vector<Term>& terms, double coef) -> double {
        if (!c.leaf) {
            terms.push_back({enc.node_var[c.index], coef});
            return 0.0;
        }
        const TimedAtom& a = t.leaves[c.index];
        return add_literal(terms, z.get(m, a), a.neg, coef);
    };

    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        const LtNode& n = t.nodes[i];
        const int v = enc.node_var[i];
        const std::string base = "lt_" + std::to_string(i);
        const bool conj = n.type == NodeType::And;
        for (std::size_t c = 0; c < n.kids.size(); ++c) {
            // And: v - child <= 0; Or: v - child >= 0
            std::vector<Term> terms{{v, 1.0}};
            double k = child_term(n.kids[c], terms, -1.0);
            m.add_row(base + (conj ? "_le_" : "_ge_") + std::to_string(c), terms, conj ? Sense::Le : Sense::Ge, -k);
        }
        std::vector<Term> terms{{v, 1.0}};
        double k = 0.0;
        for (const LtChild& c : n.kids) k += child_term(c, terms, -1.0);
        if (conj)  // v >= 1 - p + sum
            m.add_row(base + "_all", terms, Sense::Ge, 1.0 - static_cast<double>(n.kids.size()) - k);
        else  // v <= sum
            m.add_row(base + "_any", terms, Sense::Le, -k);
    }
    m.add_row("lt_root", {{enc.node_var[t.root], 1.0}}, Sense::Eq, 1.0);
    enc.last_row = m.num_rows();
    return enc;
}

}  // namespace lnf
