#include "doctest.h"
#include "lnf/dynamics.hpp"
#include "rows.hpp"

using namespace lnf;

namespace {

MinTimeProblem fast_problem(int K, Eigen::Vector2d s) {
    MinTimeProblem p = double_integrator(K, s);
    p.a_lb[0] = -100.0;
    p.a_ub[0] = 100.0;
    p.s_lb[1] = -10.0;
    p.s_ub[1] = 10.0;
    return p;
}

std::map<int, std::string> names_of(const Model& m) {
    std::map<int, std::string> n;
    for (int j = 0; j < m.num_vars(); ++j) n[j] = m.vars[j].name;
    return n;
}

}  // namespace

TEST_CASE("minimum-time model sizes at horizon 250") {
    MinTimeModels mm = build_min_time_models(double_integrator(250, Eigen::Vector2d(0.4, 0.25)));
    CHECK(mm.gcs.model.num_binary() == 500);
    CHECK(mm.gcs.model.num_continuous() == 1500);
    CHECK(mm.gcs.model.num_rows() == 4251);
    CHECK(mm.baseline.num_binary() == 250);
    CHECK(mm.baseline.num_continuous() == 752);
    CHECK(mm.baseline.num_rows() == 1994);
    Model fm = eliminate_gcs_flows(mm.gcs);
    CHECK(fm.num_binary() == 500);
    CHECK(fm.num_continuous() == 752);
    // baseline rows plus the start, end and 249 conservation rows
    CHECK(fm.num_rows() == 1994 + 2 + 249);
    CHECK(eliminate_gcs_flows(mm.gcs, true).num_rows() == fm.num_rows() + 4 * 2 * 250);
}

TEST_CASE("projected model is the baseline plus conservation") {
    MinTimeModels mm = build_min_time_models(double_integrator(3, Eigen::Vector2d(0.1, 0.0)));
    Model fm = eliminate_gcs_flows(mm.gcs);
    CHECK(fm.num_continuous() == mm.baseline.num_continuous());
    auto have = rows::of(fm, names_of(fm));
    auto base = rows::of(mm.baseline, names_of(mm.baseline));
    for (const auto& r : base) CHECK(have.count(r) == 1);
    CHECK(have.size() == base.size() + 4);
    for (const char* r : {"y_0 + yp_0 = 1", "y_2 = 0", "y_1 + yp_1 = y_0", "y_2 + yp_2 = y_1"}) CHECK_MESSAGE(have.count(rows::parse(r)), r);
}

TEST_CASE("minimum-time degenerate cases") {
    MinTimeModels one = build_min_time_models(fast_problem(1, Eigen::Vector2d(0.0, 0.0)));
    SolveResult r = bb_solve(one.gcs.model);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.incumbent == doctest::Approx(1.0));
    CHECK(r.x[one.gcs.model.find_var("yp_0")] == doctest::Approx(1.0));
    // one step cannot stop a moving mass
    MinTimeModels moving = build_min_time_models(double_integrator(1, Eigen::Vector2d(0.0, 0.5)));
    CHECK(bb_solve(moving.gcs.model).status == SolveStatus::Infeasible);
    CHECK(bb_solve(eliminate_gcs_flows(moving.gcs)).status == SolveStatus::Infeasible);

    MinTimeModels rest = build_min_time_models(double_integrator(10, Eigen::Vector2d(0.0, 0.0)));
    for (const Model* m : {&rest.gcs.model, &rest.baseline}) {
        SolveResult s = bb_solve(*m);
        REQUIRE(s.status == SolveStatus::Optimal);
        CHECK(s.incumbent == doctest::Approx(1.0));
    }
    CHECK(bb_solve(rest.gcs.model).x[rest.gcs.model.find_var("yp_0")] == doctest::Approx(1.0));
    CHECK_THROWS_AS(build_min_time_models(double_integrator(0, Eigen::Vector2d(0.0, 0.0))), ModelError);
}

TEST_CASE("three minimum-time formulations agree") {
    MinTimeModels mm = build_min_time_models(fast_problem(20, Eigen::Vector2d(0.2, 0.0)));
    Model fm = eliminate_gcs_flows(mm.gcs);
    Model tight = eliminate_gcs_flows(mm.gcs, true);
    SolveResult a = bb_solve(mm.gcs.model), b = bb_solve(fm), c = bb_solve(mm.baseline), d = bb_solve(tight);
    REQUIRE(a.status == SolveStatus::Optimal);
    REQUIRE(b.status == SolveStatus::Optimal);
    REQUIRE(c.status == SolveStatus::Optimal);
    REQUIRE(d.status == SolveStatus::Optimal);
    CHECK(a.incumbent == doctest::Approx(b.incumbent).epsilon(1e-6));
    CHECK(a.incumbent == doctest::Approx(c.incumbent).epsilon(1e-6));
    CHECK(a.incumbent == doctest::Approx(d.incumbent).epsilon(1e-6));
    CHECK(a.incumbent > 2.0);
    // relaxations: baseline <= projected <= projected with tightening <= graph of convex sets
    double lb = lp_solve(mm.baseline).value, lf = lp_solve(fm).value, lt = lp_solve(tight).value, lg = lp_solve(mm.gcs.model).value;
    CHECK(lb <= lf + 1e-7);
    CHECK(lf <= lt + 1e-7);
    CHECK(lt <= lg + 1e-7);
}

TEST_CASE("projection rejects other models") {
    MinTimeModels mm = build_min_time_models(double_integrator(4, Eigen::Vector2d(0.1, 0.0)));
    GcsModel bad = mm.gcs;
    bad.model.rows.pop_back();
    CHECK_THROWS_AS(eliminate_gcs_flows(bad), ModelError);
    GcsModel neg = mm.gcs;
    neg.problem.A(0, 1) = -0.01;
    neg.model = build_min_time_models(neg.problem).gcs.model;
    CHECK_NOTHROW(eliminate_gcs_flows(neg));
    CHECK_THROWS_AS(eliminate_gcs_flows(neg, true), ModelError);
}
