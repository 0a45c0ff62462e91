#pragma once

#include <Eigen/Dense>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lnf/logic_tree.hpp"
#include "lnf/milp.hpp"

namespace lnf {

// ---------------------------------------------------------------- temporal graphs

struct TgVertex {
    std::string id;
    std::vector<double> pos;
};

// Costs are per time step; a single entry is a constant cost, and the last
// entry repeats past the end of the array.
struct TgEdge {
    int from = 0, to = 0;
    double travel_time = 1.0;
    int capacity = 1;
    std::vector<double> cost{0.0};
};

class TemporalGraph {
public:
    std::vector<TgVertex> vertices;
    std::vector<TgEdge> edges;
    std::vector<std::vector<double>> hold_cost;  // per vertex, same convention as edge costs
    std::vector<int> sources;

    int add_vertex(std::string id, std::vector<double> pos = {});
    int add_edge(int from, int to, double travel_time, int capacity = 1, std::vector<double> cost = {0.0});
    int index_of(const std::string& id) const;  // -1 when absent

    double edge_cost(int e, int k) const;
    double hold_cost_at(int v, int k) const;

    // Throws ModelError on non-positive travel times, capacities < 1 or negative costs.
    void validate() const;

    static TemporalGraph from_json(const std::string& text);
    static TemporalGraph load(const std::string& path);
    std::string to_json() const;
};

// Greatest common divisor of the travel times after scaling by 1e3.
double auto_time_quantum(const TemporalGraph& g);

struct DnfEdge {
    int tail = 0, head = 0;  // time-expanded vertex ids
    int spatial = -1;        // TemporalGraph edge, -1 for a hold loop
    int vertex = 0;          // spatial vertex of the tail
    int start = 0;           // departure step
    double cost = 0.0;
    double ub = 1.0;
};

struct DnfNetwork {
    int num_spatial = 0;
    int T = 0;
    double dT = 1.0;
    std::vector<int> steps;          // per spatial edge
    std::vector<char> rounded;       // per spatial edge, travel time was rounded up
    std::vector<DnfEdge> edges;
    std::vector<int> sources;        // spatial ids

    std::vector<std::vector<int>> in_adj, out_adj;  // per time-expanded vertex
    std::vector<std::vector<int>> by_start;         // [spatial edge][k] -> edge or -1

    int vertex_id(int p, int k) const { return p * (T + 1) + k; }
    int num_vertices() const { return num_spatial * (T + 1); }
    const std::vector<int>& in_edges(int p, int k) const { return in_adj[vertex_id(p, k)]; }
    const std::vector<int>& out_edges(int p, int k) const { return out_adj[vertex_id(p, k)]; }
    // The expansion of a spatial edge departing at step k, or -1.
    int find_edge(int spatial, int k) const;
};

// dT = 0 selects auto_time_quantum.
DnfNetwork expand_dnf(const TemporalGraph& g, int T, double dT = 0.0);

struct DnfOptions {
    bool binary_flows = false;
    std::string prefix = "r";
};

struct DnfEncoding {
    std::vector<int> r;  // per DnfEdge
    int linked_atoms = 0;
};

// Flow conservation, source injection, objective costs and the predicate
// links z <= sum of inflows, z >= each inflow, for every atom of `z` whose
// predicate is in `regions`. At step 0 the atom is fixed by the source position.
DnfEncoding encode_dnf(const DnfNetwork& n, Model& m, const std::map<std::string, std::set<int>>& regions, AtomVars& z,
                       const DnfOptions& opt = {});

struct ConflictSet {
    std::vector<std::pair<int, int>> vertices;  // (robot, spatial vertex)
    std::vector<std::pair<int, int>> edges;     // (robot, spatial edge)
};

struct RobotFlows {
    const DnfNetwork* net = nullptr;
    const DnfEncoding* enc = nullptr;
};

// One row per conflict set and time step with at least two terms; referenced flows become binary.
int add_conflict_constraints(Model& m, const std::vector<RobotFlows>& robots, const std::vector<ConflictSet>& conflicts);

// ---------------------------------------------------------------- piecewise-affine systems

// Mode domain: H1 x + H2 u <= h. Dynamics x+ = A x + B u.
struct PwaMode {
    std::string name;
    Eigen::MatrixXd A, B, H1, H2;
    Eigen::VectorXd h;
};

struct PwaSystem {
    int nx = 0, nu = 0;
    std::vector<PwaMode> modes;
    Eigen::VectorXd x0_lb, x0_ub;  // initial state box; equal ends pin the state
    Eigen::VectorXd u_lb, u_ub;    // optional input box, empty for free inputs

    void validate() const;
};

struct BigM {
    Eigen::VectorXd m1, m2, m3;
};

// Componentwise maxima over the domain of mode j of the slack each mode-i row
// needs when mode j is active.
BigM compute_big_m(const PwaSystem& s, int i, int j);

struct PwaOptions {
    // Registers delta_{i,k} as the atom (mode name, k); requires H2 = 0.
    bool alias_predicates = false;
};

struct PwaEncoding {
    std::vector<std::vector<int>> x;      // [k][d], k = 0..T
    std::vector<std::vector<int>> u;      // [k][d], k = 0..T-1
    std::vector<std::vector<int>> delta;  // [k][mode], k = 0..T-1
    std::vector<std::vector<BigM>> big_m;  // [i][j]
};

PwaEncoding encode_pwa_bigm(const PwaSystem& s, int T, Model& m, AtomVars& z, const PwaOptions& opt = {});

struct Box2 {
    double x0, y0, x1, y1;
    bool contains(double x, double y, double tol = 0.0) const {
        return x >= x0 - tol && x <= x1 + tol && y >= y0 - tol && y <= y1 + tol;
    }
};

// Planar point mass: state (x, y, vx, vy), input (ux, uy), one mode per region
// with shared double-integrator dynamics, a speed box and H2 = 0.
PwaSystem point_mass(const std::vector<Box2>& regions, double dt, double vmax, double umax, const Eigen::Vector4d& x0);

// Eight overlapping free-space boxes in a 6 x 5 workspace.
std::vector<Box2> point_mass_environment();

// ---------------------------------------------------------------- minimum-time control

struct MinTimeProblem {
    int K = 1;  // horizon
    Eigen::MatrixXd A, B;
    Eigen::VectorXd s_hat;
    Eigen::VectorXd s_lb, s_ub, a_lb, a_ub;

    void validate() const;
};

// Double integrator with step 0.01, |position|, |velocity| <= 1 and |input| <= 1.
MinTimeProblem double_integrator(int K, const Eigen::Vector2d& s_hat);

struct GcsModel {
    Model model;
    MinTimeProblem problem;
};

struct MinTimeModels {
    GcsModel gcs;
    Model baseline;
};

MinTimeModels build_min_time_models(const MinTimeProblem& p);

// Projects the flow variables out of the graph-of-convex-sets model: state and
// input variables come back with the baseline rows, the y-conservation rows
// stay, and `tightening` adds the four per-step families derived for k = 0.
Model eliminate_gcs_flows(const GcsModel& g, bool tightening = false);

}  // namespace lnf
