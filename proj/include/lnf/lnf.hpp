#pragma once

#include <string>
#include <vector>

#include "lnf/formula.hpp"
#include "lnf/logic_tree.hpp"
#include "lnf/milp.hpp"

namespace lnf {

struct LnfEdge {
    int tail = 0;
    int head = 0;
    std::vector<TimedAtom> lits;  // sorted, unique, never both signs of one atom
};

// Vertices are numbered in a topological order; source is 0.
struct Lnf {
    int num_vertices = 0;
    int source = 0;
    int target = 0;
    std::vector<LnfEdge> edges;
    // no source-target path survives contradiction pruning
    bool infeasible = false;

    // distinct (pred, k) pairs on the edges, sign cleared, sorted
    std::vector<TimedAtom> atoms() const;
    std::vector<int> out_edges(int v) const;
    std::vector<int> in_edges(int v) const;
    // acyclic, all vertices on a source-target path, literal sets consistent
    void check() const;
    std::string to_dot() const;
};

Lnf build_lnf(const LogicTree& t);

struct FlowOptions {
    bool completeness = false;  // y_e >= 1 - |P_e| + satisfied literals
};

struct FlowEncoding {
    std::vector<TimedAtom> atoms;        // flow component order
    std::vector<int> z;                  // per component
    std::vector<int> y;                  // per edge
    std::vector<std::vector<int>> flow;  // per edge, per component
};

FlowEncoding encode_lnf_flow(const Lnf& g, Model& m, AtomVars& z, const FlowOptions& opt = {});

}  // namespace lnf
