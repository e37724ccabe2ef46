#include <catch2/catch_amalgamated.hpp>

#include "lnelab/fixtures.hpp"

using namespace lnelab;

TEST_CASE("the registry ships the eight canonical fixtures") {
    auto names = fixture_names();
    REQUIRE(names.size() == 8);
    for (const char* expected :
         {"counterexample_z2", "cusp_remark", "parusinski_t", "halfline", "two_halflines_90",
          "convex_cone", "tangent_parabolas", "circle_cone"}) {
        REQUIRE(std::find(names.begin(), names.end(), expected) != names.end());
    }
}

TEST_CASE("unknown fixtures are input errors") {
    REQUIRE_THROWS_AS(load_fixture("no_such_fixture"), Error);
}

TEST_CASE("every fixture document parses and validates") {
    for (const auto& name : fixture_names()) {
        INFO(name);
        Fixture fx = load_fixture(name);
        REQUIRE(fx.set.ambient_dim() >= 2);
        REQUIRE_FALSE(fx.description.empty());
        REQUIRE(fx.config.steps >= 4);
        for (const auto& e : fx.expectations) {
            REQUIRE_FALSE(e.quantity.empty());
            REQUIRE(e.tolerance > 0);
            REQUIRE((e.kind == "rel" || e.kind == "abs"));
            REQUIRE((e.provenance == "exact" || e.provenance == "analytic" ||
                     e.provenance == "reported"));
        }
    }
}

TEST_CASE("fixture sets admit on-set points") {
    struct Probe {
        const char* fixture;
        Vec point;
    };
    std::vector<Probe> probes = {
        {"counterexample_z2", {0.4, 0.2, 0.08}},
        {"cusp_remark", {0.5, 0.2}},
        {"parusinski_t", {0.3, 0.09}},
        {"halfline", {0.7, 0.0}},
        {"two_halflines_90", {0.0, 0.7}},
        {"convex_cone", {0.1, 0.5}},
        {"tangent_parabolas", {0.3, 0.09}},
        {"circle_cone", {0.3, 0.4, 0.5}},
    };
    for (const auto& probe : probes) {
        INFO(probe.fixture);
        Fixture fx = load_fixture(probe.fixture);
        REQUIRE(fx.set.membership(probe.point, 1e-9).label == Membership::inside);
    }
}

TEST_CASE("expected verdicts cover both outcomes") {
    REQUIRE(load_fixture("counterexample_z2").expected_verdict == "NOT_LNE");
    REQUIRE(load_fixture("tangent_parabolas").expected_verdict == "NOT_LNE");
    REQUIRE(load_fixture("parusinski_t").expected_verdict == "NOT_LNE");
    REQUIRE(load_fixture("halfline").expected_verdict == "LNE");
    REQUIRE(load_fixture("circle_cone").expected_verdict == "LNE");
}

TEST_CASE("the horn fixture carries the refinement expectation and non-Lipschitz rho") {
    Fixture fx = load_fixture("cusp_remark");
    REQUIRE_FALSE(fx.rho.declared_lipschitz());
    bool found = false;
    for (const auto& e : fx.expectations)
        if (e.quantity.find("refinement") != std::string::npos) {
            found = true;
            REQUIRE(e.value == 2.0);
            REQUIRE(e.kind == "abs");
            REQUIRE(e.tolerance == 0.5);
        }
    REQUIRE(found);
}

TEST_CASE("growth expectation of the ruled surface matches the reported law") {
    Fixture fx = load_fixture("counterexample_z2");
    bool found = false;
    for (const auto& e : fx.expectations)
        if (e.quantity == "link_growth_exponent") {
            found = true;
            REQUIRE(e.value == -1.0);
            REQUIRE(e.provenance == "reported");
            REQUIRE(e.matches(-1.05));
            REQUIRE_FALSE(e.matches(-0.5));
        }
    REQUIRE(found);
}

TEST_CASE("flow blocks parse where present") {
    for (const char* name : {"halfline", "circle_cone", "counterexample_z2"}) {
        Fixture fx = load_fixture(name);
        REQUIRE(fx.document.contains("flow"));
        const auto& flow = fx.document["flow"];
        REQUIRE(flow.contains("start"));
        REQUIRE(flow.contains("target"));
        auto rho = radius_from_json(flow["rho"], fx.set.variables());
        Vec start = flow["start"].get<Vec>();
        REQUIRE(fx.set.membership(start, 1e-9).label == Membership::inside);
        REQUIRE(rho.eval(start) > flow["target"].get<double>());
    }
}
