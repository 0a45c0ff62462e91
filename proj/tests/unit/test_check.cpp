#include "doctest.h"
#include "lnf/check.hpp"

using namespace lnf;

namespace {

Instance three_vertices(FormulaPtr spec, int T) {
    TemporalGraph g;
    for (int v = 0; v < 3; ++v) g.add_vertex("p" + std::to_string(v), {static_cast<double>(v), 0.0});
    g.add_edge(0, 1, 1.0, 1, {0.5});
    g.add_edge(1, 2, 1.0, 1, {0.25});
    g.add_edge(0, 2, 2.0, 1, {1.0});
    g.sources = {0};
    Instance inst;
    inst.graphs = {g};
    inst.regions = {{{"goal", {2}}, {"start", {0}}}};
    inst.spec = std::move(spec);
    inst.T = T;
    return inst;
}

}  // namespace

TEST_CASE("regions from halfplane predicates") {
    TemporalGraph g;
    g.add_vertex("a", {0.0, 0.0});
    g.add_vertex("b", {1.0, 0.0});
    g.add_vertex("c", {0.5, 2.0});
    PredicateTable t;
    t.add({"right", {1.0, 0.0}, -0.5});
    t.add({"low", {0.0, -1.0}, 1.0});
    auto r = regions_from_predicates(g, t);
    CHECK(r.at("right") == std::set<int>{1, 2});
    CHECK(r.at("low") == std::set<int>{0, 1});
    PredicateTable bad;
    bad.add({"x", {1.0}, 0.0});
    CHECK_THROWS_AS(regions_from_predicates(g, bad), ModelError);
}

TEST_CASE("eventually on three vertices") {
    Instance inst = three_vertices(eventually(0, 3, atom("goal")), 3);
    WalkOracle o = enumerate_walks(inst);
    REQUIRE(o.feasible);
    CHECK(o.optimum == doctest::Approx(0.75));
    CHECK(o.walks > 1);
    for (Formulation f : {Formulation::Lt, Formulation::LnfFlow, Formulation::Lnf, Formulation::Cd}) {
        CheckReport r = check_instance(inst, f);
        CHECK_MESSAGE(r.pass(), r.detail);
        CHECK(r.solver_value == doctest::Approx(0.75));
    }
}

TEST_CASE("contradiction at step 0") {
    Instance inst = three_vertices(conj({atom("start"), atom("start", true)}), 2);
    WalkOracle o = enumerate_walks(inst);
    CHECK_FALSE(o.feasible);
    for (Formulation f : {Formulation::Lt, Formulation::Lnf}) {
        CheckReport r = check_instance(inst, f);
        CHECK(r.status == "infeasible");
        CHECK_MESSAGE(r.pass(), r.detail);
    }
}

TEST_CASE("goal out of reach is infeasible for both") {
    // the goal needs two steps
    Instance inst = three_vertices(eventually(0, 1, atom("goal")), 1);
    CHECK_FALSE(enumerate_walks(inst).feasible);
    CHECK(check_instance(inst, Formulation::Lnf).pass());
}

TEST_CASE("oracle scale is enforced") {
    Instance inst = three_vertices(eventually(0, 3, atom("goal")), 7);
    CHECK_THROWS_WITH_AS(enumerate_walks(inst), doctest::Contains("oracle scale"), ModelError);
    Instance wide = three_vertices(always(0, 6, conj({atom("goal"), atom("start")})), 6);
    CHECK_THROWS_WITH_AS(enumerate_walks(wide), doctest::Contains("atoms"), ModelError);
    Instance big = three_vertices(atom("goal"), 2);
    for (int v = 0; v < 3; ++v) big.graphs[0].add_vertex("x" + std::to_string(v));
    CHECK_THROWS_WITH_AS(enumerate_walks(big), doctest::Contains("vertices"), ModelError);
}

TEST_CASE("random micro-instances agree with enumeration") {
    int feasible = 0;
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        Instance inst = random_micro_instance(seed);
        CHECK(inst.graphs[0].vertices.size() <= 5);
        CHECK(inst.T <= 6);
        feasible += enumerate_walks(inst).feasible;
        for (Formulation f : {Formulation::Lt, Formulation::LnfFlow, Formulation::Lnf}) {
            CheckReport r = check_instance(inst, f);
            CHECK_MESSAGE(r.pass(), "seed " << seed << " " << to_string(f) << ": " << r.detail << " spec "
                                            << to_string(*inst.spec));
        }
    }
    // the generator should not be trivially infeasible
    CHECK(feasible >= 5);
    CHECK(random_micro_instance(7).to_json() == random_micro_instance(7).to_json());
}
