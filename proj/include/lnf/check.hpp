#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "lnf/bench.hpp"
#include "lnf/dynamics.hpp"
#include "lnf/formula.hpp"

namespace lnf {

// Vertices whose position satisfies a'pos + b >= 0, per predicate.
std::map<std::string, std::set<int>> regions_from_predicates(const TemporalGraph& g, const PredicateTable& preds);

struct OracleLimits {
    int max_vertices = 5;
    int max_T = 6;
    int max_atoms = 12;
};

// Throws ModelError when the instance is beyond exhaustive enumeration.
void check_oracle_scale(const Instance& inst, const OracleLimits& lim = {});

struct WalkOracle {
    bool feasible = false;
    double optimum = kInf;
    long walks = 0;
    BoolTrace best;  // trace of an optimal walk
};

// Every walk of the single robot through the time-expanded network, scored
// with edge, hold and atom costs.
WalkOracle enumerate_walks(const Instance& inst, const OracleLimits& lim = {});

struct CheckReport {
    bool sound = true;     // the solver's atom values satisfy the formula
    bool complete = true;  // same feasibility verdict and optimum as the oracle
    std::string status;
    double solver_value = kInf;
    double oracle_value = kInf;
    std::string detail;
    bool pass() const { return sound && complete; }
};

CheckReport check_instance(const Instance& inst, Formulation f, const BbOptions& limits = {}, const OracleLimits& lim = {});

// Seeded instance within the oracle scale: 2-5 vertices, T in [2, 6], 2-3
// predicates over vertex subsets and a random formula over them.
Instance random_micro_instance(std::uint64_t seed);

}  // namespace lnf
