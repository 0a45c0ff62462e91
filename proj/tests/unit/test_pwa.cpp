#include <random>

#include "doctest.h"
#include "lnf/dynamics.hpp"

using namespace lnf;

namespace {

// x+ = x on [0,1], x+ = 2x on [1,2], input free in [-1,1] and unused.
PwaSystem two_mode() {
    PwaSystem s;
    s.nx = 1;
    s.nu = 1;
    auto mode = [](const char* name, double a, double lo, double hi) {
        PwaMode m;
        m.name = name;
        m.A = Eigen::MatrixXd::Constant(1, 1, a);
        m.B = Eigen::MatrixXd::Zero(1, 1);
        m.H1 = Eigen::MatrixXd(2, 1);
        m.H1 << 1.0, -1.0;
        m.H2 = Eigen::MatrixXd::Zero(2, 1);
        m.h = Eigen::Vector2d(hi, -lo);
        return m;
    };
    s.modes = {mode("low", 1.0, 0.0, 1.0), mode("high", 2.0, 1.0, 2.0)};
    s.x0_lb = s.x0_ub = Eigen::VectorXd::Constant(1, 0.6);
    s.u_lb = Eigen::VectorXd::Constant(1, -1.0);
    s.u_ub = Eigen::VectorXd::Constant(1, 1.0);
    return s;
}

// Checks the mode-i rows at (x, u, x+) when mode j is active.
bool rows_hold(const PwaSystem& s, const BigM& M, int i, const Eigen::VectorXd& x, const Eigen::VectorXd& u,
               const Eigen::VectorXd& xn) {
    const PwaMode& mi = s.modes[i];
    Eigen::VectorXd r = xn - mi.A * x - mi.B * u;
    Eigen::VectorXd d = mi.H1 * x + mi.H2 * u - mi.h;
    return (r.array() >= -M.m1.array() - 1e-9).all() && (r.array() <= M.m2.array() + 1e-9).all() &&
           (d.array() <= M.m3.array() + 1e-9).all();
}

// Samples the domain of mode j by rejection inside a bounding box.
void sample_certificate(const PwaSystem& s, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int samples) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const int I = static_cast<int>(s.modes.size());
    for (int j = 0; j < I; ++j)
        for (int i = 0; i < I; ++i) {
            if (i == j) continue;
            BigM M = compute_big_m(s, i, j);
            int hits = 0, bad = 0;
            for (int t = 0; t < samples; ++t) {
                Eigen::VectorXd x(s.nx), u(s.nu);
                for (int d = 0; d < s.nx; ++d) x[d] = lo[d] + (hi[d] - lo[d]) * u01(rng);
                for (int d = 0; d < s.nu; ++d) u[d] = s.u_lb[d] + (s.u_ub[d] - s.u_lb[d]) * u01(rng);
                const PwaMode& mj = s.modes[j];
                if (((mj.H1 * x + mj.H2 * u - mj.h).array() > 0.0).any()) continue;
                ++hits;
                if (!rows_hold(s, M, i, x, u, mj.A * x + mj.B * u)) ++bad;
            }
            CHECK(hits > samples / 50);
            CHECK(bad == 0);
        }
}

}  // namespace

TEST_CASE("big-M constants of the two-mode line") {
    PwaSystem s = two_mode();
    BigM a = compute_big_m(s, 0, 1);
    // mode high active: x+ - x = x in [1,2]
    CHECK(a.m1[0] == doctest::Approx(-1.0));
    CHECK(a.m2[0] == doctest::Approx(2.0));
    CHECK(a.m3[0] == doctest::Approx(1.0));
    CHECK(a.m3[1] == doctest::Approx(-1.0));
    BigM own = compute_big_m(s, 1, 1);
    CHECK((own.m3.array() <= 1e-9).all());
    sample_certificate(s, Eigen::VectorXd::Constant(1, -0.5), Eigen::VectorXd::Constant(1, 2.5), 10000);
}

TEST_CASE("big-M needs a bounded domain") {
    PwaSystem s = two_mode();
    s.modes[1].H1 = Eigen::MatrixXd::Zero(2, 1);
    s.modes[1].h = Eigen::Vector2d(1.0, 1.0);
    CHECK_THROWS_WITH_AS(compute_big_m(s, 0, 1), doctest::Contains("high"), ModelError);
}

TEST_CASE("single mode gives exact linear dynamics") {
    PwaSystem s = two_mode();
    s.modes.pop_back();
    s.modes[0].B = Eigen::MatrixXd::Constant(1, 1, 0.5);
    s.modes[0].h = Eigen::Vector2d(5.0, 5.0);
    Model m;
    AtomVars z;
    PwaEncoding enc = encode_pwa_bigm(s, 3, m, z);
    for (int k = 0; k < 3; ++k) m.set_obj(enc.u[k][0], -1.0 - k);
    SolveResult r = bb_solve(m);
    REQUIRE(r.status == SolveStatus::Optimal);
    double x = 0.6;
    for (int k = 0; k < 3; ++k) {
        CHECK(r.x[enc.delta[k][0]] == doctest::Approx(1.0));
        CHECK(r.x[enc.u[k][0]] == doctest::Approx(1.0));
        x = x + 0.5 * r.x[enc.u[k][0]];
        CHECK(r.x[enc.x[k + 1][0]] == doctest::Approx(x));
    }
}

TEST_CASE("two-mode trajectory crosses the boundary") {
    PwaSystem s = two_mode();
    s.modes[0].B = Eigen::MatrixXd::Constant(1, 1, 1.0);  // low mode can push right
    Model m;
    AtomVars z;
    PwaEncoding enc = encode_pwa_bigm(s, 3, m, z, {true});
    // be in the high region at steps 1 and 2
    for (int k : {1, 2}) m.vars[z.find("high", k)].lb = 1.0;
    m.set_obj(enc.u[0][0], 1.0);
    SolveResult r = bb_solve(m);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.incumbent == doctest::Approx(0.4));  // push 0.6 -> 1.0 and stay in high with the doubling
    for (int k = 0; k < 3; ++k) {
        double on = 0.0;
        int active = -1;
        for (int i = 0; i < 2; ++i) {
            on += r.x[enc.delta[k][i]];
            if (r.x[enc.delta[k][i]] > 0.5) active = i;
        }
        CHECK(on == doctest::Approx(1.0));
        const PwaMode& md = s.modes[active];
        double pred = md.A(0, 0) * r.x[enc.x[k][0]] + md.B(0, 0) * r.x[enc.u[k][0]];
        CHECK(r.x[enc.x[k + 1][0]] == doctest::Approx(pred));
        CHECK(((md.H1 * Eigen::VectorXd::Constant(1, r.x[enc.x[k][0]]) - md.h).array() <= 1e-7).all());
    }
    CHECK(r.x[enc.delta[0][0]] == doctest::Approx(1.0));
}

TEST_CASE("predicate aliasing requires H2 = 0") {
    PwaSystem s = two_mode();
    s.modes[0].H2(0, 0) = 1.0;
    Model m;
    AtomVars z;
    CHECK_THROWS_AS(encode_pwa_bigm(s, 2, m, z, {true}), ModelError);
    PwaSystem bad = two_mode();
    bad.modes[0].A = Eigen::MatrixXd::Zero(2, 2);
    CHECK_THROWS_AS(encode_pwa_bigm(bad, 2, m, z), ModelError);
}

TEST_CASE("point mass big-M constants are finite and sound") {
    PwaSystem s = point_mass(point_mass_environment(), 0.5, 1.0, 1.0, Eigen::Vector4d(0.5, 0.5, 0.0, 0.0));
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            BigM M = compute_big_m(s, i, j);
            CHECK(M.m1.allFinite());
            CHECK(M.m3.allFinite());
            CHECK(M.m1.isZero(1e-12));  // shared dynamics
        }
    sample_certificate(s, Eigen::Vector4d(0, 0, -1, -1), Eigen::Vector4d(6, 5, 1, 1), 3000);
}

TEST_CASE("point mass reaches the far region") {
    auto env = point_mass_environment();
    PwaSystem s = point_mass(env, 0.5, 1.0, 1.0, Eigen::Vector4d(0.5, 0.5, 0.0, 0.0));
    const int T = 20;
    Model m;
    AtomVars z;
    PwaEncoding enc = encode_pwa_bigm(s, T, m, z, {true});
    // be in the far bottom region at the last step, costs favour early arrival
    m.vars[z.find("region2", T - 1)].lb = 1.0;
    for (int k = 0; k < T; ++k) m.set_obj(z.find("region2", k), -0.01 * (T - k));
    SolveResult r = bb_solve(m, {1e-4, 1e-6, 1e-8, 60.0});
    REQUIRE(r.has_incumbent);
    int prev = 0;
    for (int k = 0; k < T; ++k) {
        int active = -1;
        for (int i = 0; i < 8; ++i)
            if (r.x[enc.delta[k][i]] > 0.5) active = i;
        REQUIRE(active >= 0);
        double px = r.x[enc.x[k][0]], py = r.x[enc.x[k][1]];
        CHECK(env[active].contains(px, py, 1e-6));
        if (active != prev) {
            // consecutive regions overlap where the switch happens
            double qx = r.x[enc.x[k - 1][0]], qy = r.x[enc.x[k - 1][1]];
            CHECK((env[prev].contains(px, py, 1e-6) || env[active].contains(qx, qy, 1e-6)));
        }
        prev = active;
    }
    CHECK(prev == 2);
}
