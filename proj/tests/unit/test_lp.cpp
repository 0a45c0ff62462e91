#include "doctest.h"
#include "lnf/milp.hpp"

using namespace lnf;

TEST_CASE("lp single bound") {
    Model m;
    int x = m.add_continuous("x", 0.0, 1.0);
    m.set_obj(x, 1.0);
    m.add_row("lo", {{x, 1.0}}, Sense::Ge, 0.3);
    LpResult r = lp_solve(m);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == doctest::Approx(0.3));
}

#include <random>

#include "oracle.hpp"

namespace {

Model random_model(std::mt19937_64& rng, int n, int rows, int nbin) {
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<int> sense(0, 2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Model m;
    for (int j = 0; j < n; ++j) {
        if (j < nbin)
            m.add_binary("b" + std::to_string(j));
        else
            m.add_continuous("x" + std::to_string(j), -2.0 + coef(rng) * 0.25, 2.0 + u(rng));
        m.set_obj(j, coef(rng));
    }
    for (int i = 0; i < rows; ++i) {
        std::vector<Term> t;
        for (int j = 0; j < n; ++j)
            if (u(rng) < 0.7) t.push_back({j, static_cast<double>(coef(rng))});
        Sense s = static_cast<Sense>(sense(rng));
        m.add_row("r" + std::to_string(i), t, s, coef(rng) * 0.5);
    }
    return m;
}

}  // namespace

TEST_CASE("lp matches vertex enumeration on random bounded instances") {
    std::mt19937_64 rng(7);
    int feasible = 0;
    for (int it = 0; it < 300; ++it) {
        Model m = random_model(rng, 2 + it % 3, 1 + it % 4, 0);
        auto ref = oracle::lp_vertex_min(m, 1e-9);
        LpResult r = lp_solve(m);
        if (!ref) {
            CHECK_MESSAGE(r.status == LpStatus::Infeasible, "instance ", it);
            continue;
        }
        ++feasible;
        REQUIRE_MESSAGE(r.status == LpStatus::Optimal, "instance ", it);
        CHECK_MESSAGE(r.value == doctest::Approx(*ref).epsilon(1e-7), "instance ", it);
        CHECK(m.max_violation(r.x) <= 1e-7);
    }
    CHECK(feasible > 50);
}

TEST_CASE("lp detects unbounded and handles free variables") {
    Model m;
    int x = m.add_continuous("x", -kInf, kInf);
    int y = m.add_continuous("y", 0.0, kInf);
    m.set_obj(x, 1.0);
    m.add_row("a", {{x, 1.0}, {y, 1.0}}, Sense::Ge, -3.0);
    CHECK(lp_solve(m).status == LpStatus::Unbounded);
    m.set_obj(y, 2.0);
    LpResult r = lp_solve(m);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == doctest::Approx(-3.0));
}

TEST_CASE("branch and bound matches enumeration on random instances") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 150; ++it) {
        int nbin = 1 + it % 4;
        Model m = random_model(rng, nbin + 1 + it % 2, 1 + it % 3, nbin);
        auto ref = oracle::milp_min(m);
        SolveResult r = bb_solve(m);
        if (!ref) {
            CHECK_MESSAGE(r.status == SolveStatus::Infeasible, "instance ", it);
            continue;
        }
        REQUIRE_MESSAGE(r.status == SolveStatus::Optimal, "instance ", it);
        CHECK_MESSAGE(r.incumbent == doctest::Approx(*ref).epsilon(1e-7), "instance ", it);
        CHECK(r.root_lp <= r.incumbent + 1e-7);
        CHECK(m.max_violation(r.x) <= 1e-6);
    }
}

TEST_CASE("relative gap conventions") {
    CHECK(relative_gap(0.0, 0.0) == 0.0);
    CHECK(relative_gap(0.0, -1.0) == kInf);
    CHECK(relative_gap(2.0, 1.5) == doctest::Approx(0.25));
}
