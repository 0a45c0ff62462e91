#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lnf {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Binary, Continuous };
enum class Sense { Le, Eq, Ge };

struct Variable {
    std::string name;
    VarKind kind = VarKind::Continuous;
    double lb = 0.0;
    double ub = kInf;
};

struct Term {
    int var;
    double coef;
};

struct Constraint {
    std::string name;
    std::vector<Term> terms;  // sorted by var, no zeros, no repeats
    Sense sense = Sense::Le;
    double rhs = 0.0;
};

// coef * x_i * x_j with i <= j
struct QuadTerm {
    int i;
    int j;
    double coef;
};

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Minimization model: linear rows, bounded variables, linear objective and
// an optional quadratic part that is stored and exported only.
class Model {
public:
    std::string name = "model";
    std::vector<Variable> vars;
    std::vector<Constraint> rows;
    std::vector<double> obj;
    double obj_const = 0.0;
    std::vector<QuadTerm> quad;

    int add_var(std::string name, VarKind kind, double lb, double ub);
    int add_binary(std::string name) { return add_var(std::move(name), VarKind::Binary, 0.0, 1.0); }
    int add_continuous(std::string name, double lb = 0.0, double ub = kInf) {
        return add_var(std::move(name), VarKind::Continuous, lb, ub);
    }

    // Merges repeated variables and drops zero coefficients.
    int add_row(std::string name, std::vector<Term> terms, Sense sense, double rhs);

    void set_obj(int var, double c);
    void add_obj(int var, double c);
    void add_quad(int i, int j, double coef);

    int num_vars() const { return static_cast<int>(vars.size()); }
    int num_rows() const { return static_cast<int>(rows.size()); }
    int num_binary() const;
    int num_continuous() const { return num_vars() - num_binary(); }
    int find_var(const std::string& name) const;  // -1 when absent

    // Removes the listed rows (indices into rows).
    void remove_rows(const std::vector<int>& idx);
    // Removes variables that appear in no row; returns old->new index map (-1 for removed).
    std::vector<int> remove_vars(const std::vector<int>& idx);

    double eval_objective(const std::vector<double>& x) const;
    // Largest violation over bounds and rows.
    double max_violation(const std::vector<double>& x) const;
    void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

struct LpOptions {
    double feas_tol = 1e-9;
    double opt_tol = 1e-9;
    long max_iter = 5000000;
    // IterLimit is also returned once this passes
    std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max();
};

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    std::vector<double> x;
    long iterations = 0;
};

// LP relaxation: binary variables become continuous in their bounds.
LpResult lp_solve(const Model& m, const LpOptions& opt = {});

enum class SolveStatus { Optimal, Infeasible, GapLimit, NodeLimit, TimeLimit };

const char* to_string(SolveStatus s);
const char* to_string(LpStatus s);

struct BbOptions {
    double gap_tol = 1e-6;
    double int_tol = 1e-6;
    double feas_tol = 1e-8;
    double time_limit = kInf;  // seconds
    long node_limit = std::numeric_limits<long>::max();
};

struct BbEvent {
    long node;
    double seconds;
    double bound;
    double incumbent;
};

struct SolveResult {
    SolveStatus status = SolveStatus::Infeasible;
    bool has_incumbent = false;
    double incumbent = kInf;
    std::vector<double> x;
    double lower_bound = -kInf;
    double root_lp = -kInf;
    double abs_gap = kInf;   // |UB - LB| / |UB|
    double root_gap = kInf;  // |UB - LP0| / |UB|
    long nodes = 0;
    double seconds = 0.0;
    bool rounding_found = false;
    std::vector<BbEvent> events;
};

// |ub - lb| / |ub| with 0/0 = 0.
double relative_gap(double ub, double lb);

SolveResult bb_solve(const Model& m, const BbOptions& opt = {});

// Name sanitization for file formats; returns original -> written for changed names.
using NameMap = std::map<std::string, std::string>;

NameMap export_mps(const Model& m, const std::string& path);
NameMap export_lp(const Model& m, const std::string& path);
std::string write_mps(const Model& m, NameMap* renamed = nullptr);
std::string write_lp(const Model& m, NameMap* renamed = nullptr);
Model read_mps(const std::string& text);
Model read_lp(const std::string& text);
Model import_model(const std::string& path);  // by extension (.mps / .lp)

}  // namespace lnf
