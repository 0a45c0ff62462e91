#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lnf/dynamics.hpp"
#include "lnf/formula.hpp"
#include "lnf/milp.hpp"

namespace lnf {

// splitmix64; uniform() takes the top 53 bits.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    double uniform();                   // [0, 1)
    double uniform(double lo, double hi);
    int below(int n);                   // [0, n)

private:
    std::uint64_t state_;
};

enum class ScenarioKind { MultiTarget, Vrptw, Sequential, PointMass, MinTime, CounterExample };

const char* to_string(ScenarioKind k);
ScenarioKind scenario_kind(const std::string& s);  // accepts "multi_target" and "multi-target"

struct Scenario {
    ScenarioKind kind = ScenarioKind::CounterExample;
    std::uint64_t seed = 1;
    int grid = 0;      // grid side; <= 0 picks 8 for multi_target, 3 otherwise
    int groups = 2;    // N_g
    int targets = 3;   // N_t per group
    int robots = 2;    // R
    int tasks = 4;     // K
    int horizon = 0;   // T; <= 0 picks the kind default (10 N_g, 20, 12, 50)
    double cost_lo = 0.0, cost_hi = 1.0;
    double drop = 0.0;  // vrptw fraction of corridors removed
    std::vector<double> initial;  // min_time initial state

    std::string id() const;
    std::string to_json() const;
    static Scenario from_json(const std::string& text);
};

// A logic specification over per-robot temporal graphs. Region maps give,
// for each predicate name, the spatial vertices where it holds.
struct Instance {
    std::vector<TemporalGraph> graphs;
    std::vector<std::map<std::string, std::set<int>>> regions;  // per robot
    FormulaPtr spec;
    int T = 0;
    std::map<std::string, double> atom_cost;  // per predicate, added for every time step
    std::optional<PwaSystem> pwa;  // mode indicators act as the predicates named after the modes
    std::string to_json() const;
};

// Rejection-samples obstacles and targets; throws ModelError after 1000 failed placements.
// Negative obstacles / T select 2 N_g and 10 N_g.
Instance gen_multi_target(int grid, int groups, int targets, std::uint64_t seed, int obstacles = -1, int T = -1,
                          double cost_lo = 0.0, double cost_hi = 1.0);

// `sequential` selects the Until-coupled template.
// Grid of corridors with travel times 1 or 2; `drop` removes corridors while the graph stays connected.
Instance gen_vrptw(int robots, int tasks, int T, std::uint64_t seed, bool sequential, int grid = 3, double drop = 0.0,
                   double cost_lo = 0.0, double cost_hi = 1.0);

Instance gen_counter_example();

// Point mass in the ring environment, starting in region0, asked to reach one nearby region.
Instance gen_point_mass(int T, std::uint64_t seed);

Instance build_instance(const Scenario& s);

enum class Formulation { Lt, LnfFlow, Lnf, Cd };
const char* to_string(Formulation f);
Formulation formulation(const std::string& s);

// Dynamics, atom costs and the chosen logic encoding in one model.
Model build_model(const Instance& inst, Formulation f);

struct TrialRecord {
    std::string scenario;
    std::uint64_t seed = 0;
    std::string formulation;
    int n_bin = 0, n_cont = 0, n_constr = 0;
    double root_gap = kInf;
    double incumbent = kInf;
    double lower_bound = -kInf;
    std::string status;
    double wall_ms = 0.0;
    long nodes = 0;
    std::vector<BbEvent> events;
};

TrialRecord solve_trial(const Model& m, const std::string& scenario, std::uint64_t seed, const std::string& formulation,
                        const BbOptions& limits);

// LT against eliminated LNF for the logic scenarios; graph-of-convex-sets,
// projected and baseline models for min_time. Incumbent disagreement between
// two optimal records throws.
std::vector<TrialRecord> run_comparison(const Scenario& s, const BbOptions& limits = {});

// Runs scenarios on `jobs` threads; output is in scenario order.
std::vector<TrialRecord> run_batch(const std::vector<Scenario>& s, const BbOptions& limits, int jobs = 1);

void write_csv(const std::vector<TrialRecord>& records, const std::string& path);
std::string to_csv(const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_csv(const std::string& path);
std::vector<TrialRecord> parse_csv(const std::string& text);

}  // namespace lnf
