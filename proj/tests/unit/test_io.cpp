#include <random>

#include "doctest.h"
#include "lnf/milp.hpp"

using namespace lnf;

namespace {

void require_same(const Model& a, const Model& b) {
    REQUIRE(a.num_vars() == b.num_vars());
    REQUIRE(a.num_rows() == b.num_rows());
    for (int j = 0; j < a.num_vars(); ++j) {
        CHECK(a.vars[j].name == b.vars[j].name);
        CHECK(a.vars[j].kind == b.vars[j].kind);
        CHECK(a.vars[j].lb == b.vars[j].lb);
        CHECK(a.vars[j].ub == b.vars[j].ub);
        CHECK(a.obj[j] == b.obj[j]);
    }
    CHECK(a.obj_const == b.obj_const);
    for (int i = 0; i < a.num_rows(); ++i) {
        const Constraint &r = a.rows[i], &s = b.rows[i];
        CHECK(r.name == s.name);
        CHECK(r.sense == s.sense);
        CHECK(r.rhs == s.rhs);
        REQUIRE(r.terms.size() == s.terms.size());
        for (std::size_t k = 0; k < r.terms.size(); ++k) {
            CHECK(r.terms[k].var == s.terms[k].var);
            CHECK(r.terms[k].coef == s.terms[k].coef);
        }
    }
    REQUIRE(a.quad.size() == b.quad.size());
    for (std::size_t k = 0; k < a.quad.size(); ++k) {
        CHECK(a.quad[k].i == b.quad[k].i);
        CHECK(a.quad[k].j == b.quad[k].j);
        CHECK(a.quad[k].coef == b.quad[k].coef);
    }
}

Model sample(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    Model m;
    m.name = "sample";
    for (int j = 0; j < 6; ++j) {
        if (j % 3 == 0)
            m.add_binary("b_" + std::to_string(j));
        else if (j % 3 == 1)
            m.add_continuous("x_" + std::to_string(j), u(rng) - 20.0, u(rng) + 20.0);
        else
            m.add_continuous("free_var_with_long_name_" + std::to_string(j), -kInf, kInf);
        m.set_obj(j, j == 4 ? 0.0 : u(rng) / 3.0);
    }
    m.obj_const = 1.0 / 3.0;
    for (int i = 0; i < 4; ++i)
        m.add_row("row_" + std::to_string(i), {{i, u(rng) / 7.0}, {i + 2, 1e-17 + u(rng)}}, static_cast<Sense>(i % 3),
                  u(rng) / 9.0);
    m.add_row("empty", {}, Sense::Le, 0.0);
    return m;
}

}  // namespace

TEST_CASE("mps round trip is exact") {
    std::mt19937_64 rng(3);
    for (int it = 0; it < 20; ++it) {
        Model m = sample(rng);
        if (it % 2) m.add_quad(1, 1, 0.75), m.add_quad(1, 2, -0.1);
        NameMap nm;
        Model back = read_mps(write_mps(m, &nm));
        CHECK(nm.empty());
        require_same(m, back);
    }
}

TEST_CASE("lp round trip is exact") {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 20; ++it) {
        Model m = sample(rng);
        if (it % 2) m.add_quad(1, 1, 0.75), m.add_quad(1, 2, -0.1);
        Model back = read_lp(write_lp(m));
        require_same(m, back);
    }
}

TEST_CASE("empty model round trips") {
    Model m;
    CHECK(read_mps(write_mps(m)).num_rows() == 0);
    CHECK(read_lp(write_lp(m)).num_vars() == 0);
}

TEST_CASE("integrality marker appears once") {
    Model m;
    int y = m.add_binary("y_1");
    int x = m.add_continuous("x", 0, 5);
    m.add_row("c", {{x, 1}, {y, 1}}, Sense::Le, 3);
    std::string s = write_mps(m);
    auto count = [&](const std::string& pat) {
        int c = 0;
        for (std::size_t p = s.find(pat); p != std::string::npos; p = s.find(pat, p + 1)) ++c;
        return c;
    };
    CHECK(count("'INTORG'") == 1);
    CHECK(count("'INTEND'") == 1);
    std::string l = write_lp(m);
    CHECK(l.find("Binaries") != std::string::npos);
}

TEST_CASE("invalid names are sanitized with a reported mapping") {
    Model m;
    m.add_continuous("bad name", 0, 1);
    m.add_continuous("3x", 0, 1);
    m.add_continuous("bad_name", 0, 1);
    m.add_row("a:b", {{0, 1}}, Sense::Le, 1);
    NameMap nm;
    Model back = read_mps(write_mps(m, &nm));
    CHECK(nm.at("bad name") == "bad_name");
    CHECK(nm.at("3x") == "_3x");
    CHECK(nm.at("bad_name") == "bad_name_2");
    CHECK(back.vars[2].name == "bad_name_2");
    CHECK(nm.at("a:b") == "a_b");
    Model back_lp = read_lp(write_lp(m));
    CHECK(back_lp.vars[0].name == "bad_name");
    CHECK(back_lp.rows[0].name == "a_b");
}

TEST_CASE("infeasible constant row") {
    Model m;
    m.add_continuous("x", 0, 1);
    m.add_row("bad", {}, Sense::Eq, 1.0);
    CHECK(bb_solve(m).status == SolveStatus::Infeasible);
    CHECK(lp_solve(m).status == LpStatus::Infeasible);
}
