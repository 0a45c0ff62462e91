#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lnf/formula.hpp"
#include "lnf/milp.hpp"

namespace lnf {

// Binary variables z for time-indexed atoms, created on first use as "z_<pred>_<k>".
class AtomVars {
public:
    int get(Model& m, const std::string& pred, int k);
    int get(Model& m, const TimedAtom& a) { return get(m, a.pred, a.k); }
    int find(const std::string& pred, int k) const;
    // Uses an existing model variable for the atom; false when the atom already has one.
    bool bind(const std::string& pred, int k, int var);
    const std::map<std::pair<std::string, int>, int>& all() const { return vars_; }

private:
    std::map<std::pair<std::string, int>, int> vars_;
};

// Adds the value of a possibly negated atom (z or 1 - z) to a row.
// Returns the constant that moves to the right-hand side.
double add_literal(std::vector<Term>& terms, int zvar, bool neg, double coef = 1.0);

enum class NodeType { And, Or };

struct LtChild {
    bool leaf;
    int index;  // into LogicTree::nodes or LogicTree::leaves
};

struct LtNode {
    NodeType type;
    std::vector<LtChild> kids;
    int start = 0;  // earliest time step below the node; documentation only
};

struct LogicTree {
    std::vector<LtNode> nodes;  // nodes[0] is the root
    std::vector<TimedAtom> leaves;
    int root = 0;

    std::size_t node_count() const { return nodes.size() + leaves.size(); }
};

// One node per And/Or of the expansion; `flatten` merges nested nodes of the same type.
LogicTree build_tree(const Formula& p, bool flatten = false);

struct LtEncoding {
    std::vector<int> node_var;  // internal node -> model variable
    int first_row = 0, last_row = 0;
};

LtEncoding encode_lt(const LogicTree& t, Model& m, AtomVars& z);

}  // namespace lnf
