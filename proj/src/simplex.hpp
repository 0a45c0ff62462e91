#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cstdint>
#include <vector>

#include "lnf/milp.hpp"

namespace lnf::detail {

// Bounded-variable revised simplex over rows A x - r = 0 with one logical r_i per row.
// Dual phase runs first (with cost shifting for missing bounds), primal phase cleans up.
class Simplex {
public:
    enum Status : std::int8_t { Basic = 0, AtLower = 1, AtUpper = 2, Free = 3 };

    struct Basis {
        std::vector<int> head;
        std::vector<std::int8_t> status;
    };

    explicit Simplex(const Model& m, const LpOptions& opt = {});

    void set_bounds(int j, double lb, double ub);
    double lower(int j) const { return lb_[j]; }
    double upper(int j) const { return ub_[j]; }

    LpStatus solve();

    double objective() const;
    std::vector<double> primal() const;
    long iterations() const { return iters_; }

    Basis basis() const { return {head_, status_}; }
    void set_basis(const Basis& b);

private:
    int m_ = 0, n_ = 0, N_ = 0;
    LpOptions opt_;
    bool out_of_time() const {
        return (iters_ & 63) == 0 && opt_.deadline != std::chrono::steady_clock::time_point::max() &&
               std::chrono::steady_clock::now() > opt_.deadline;
    }
    double obj_const_ = 0.0;
    std::vector<int> cs_, ci_;
    std::vector<double> cv_;
    std::vector<int> rs_, ri_;
    std::vector<double> rv_;
    std::vector<double> c_, shift_, lb_, ub_;
    std::vector<std::int8_t> status_;
    std::vector<int> head_, pos_;
    std::vector<double> x_, d_, w_;
    long iters_ = 0;
    long degenerate_ = 0;
    bool bland_ = false;

    struct Eta {
        int r;
        double pivot;
        std::vector<std::pair<int, double>> col;
    };
    mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
    std::vector<Eta> etas_;
    bool factored_ = false;

    bool refactor();
    void slack_basis();
    void ftran(Eigen::VectorXd& v) const;
    void btran(Eigen::VectorXd& v) const;
    void column(int j, Eigen::VectorXd& v) const;
    void compute_primal();
    void compute_dual();
    void place_nonbasic(int j);
    bool make_dual_feasible();
    bool has_shift() const;
    void clear_shift();
    void pivot_row(const Eigen::VectorXd& rho, std::vector<double>& alpha) const;
    void register_degenerate(double step);
    void push_eta(int r, const Eigen::VectorXd& a);
    void replace(int r, int q, std::int8_t leave_status);
    double primal_infeasibility(int p) const;

    enum class Phase { Done, Infeasible, Unbounded, Limit, Refactor };
    Phase dual_phase();
    Phase primal_phase();
    bool primal_feasible(double tol) const;
    bool dual_feasible(double tol) const;
};

}  // namespace lnf::detail
