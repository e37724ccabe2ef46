#include <catch2/catch_amalgamated.hpp>

#include "lnelab/link.hpp"
#include "support.hpp"

using namespace lnelab;

namespace {

SemialgebraicSet ruled_surface() {
    std::vector<std::string> vars{"t", "x", "z"};
    Region region{
        {parse_polynomial("z^2 - t^2*x^2", vars), Relation::eq0},
        {parse_polynomial("x", vars), Relation::ge0},
        {parse_polynomial("t - x", vars), Relation::ge0},
    };
    return SemialgebraicSet(3, vars, {region});
}

SemialgebraicSet two_halflines() {
    std::vector<std::string> vars{"x_1", "x_2"};
    Region r1{{parse_polynomial("x_2", vars), Relation::eq0},
              {parse_polynomial("x_1", vars), Relation::ge0}};
    Region r2{{parse_polynomial("x_1", vars), Relation::eq0},
              {parse_polynomial("x_2", vars), Relation::ge0}};
    return SemialgebraicSet(2, vars, {r1, r2});
}

// The same pair of perpendicular half-lines turned by the 3-4-5 angle, so the
// rotation stays exactly rational.
SemialgebraicSet two_halflines_rotated() {
    std::vector<std::string> vars{"x_1", "x_2"};
    Region r1{{parse_polynomial("3*x_2 - 4*x_1", vars), Relation::eq0},
              {parse_polynomial("3*x_1 + 4*x_2", vars), Relation::ge0}};
    Region r2{{parse_polynomial("3*x_1 + 4*x_2", vars), Relation::eq0},
              {parse_polynomial("3*x_2 - 4*x_1", vars), Relation::ge0}};
    return SemialgebraicSet(2, vars, {r1, r2});
}

SemialgebraicSet tangent_parabolas() {
    std::vector<std::string> vars{"x_1", "x_2"};
    Region r1{{parse_polynomial("x_2 - x_1^2", vars), Relation::eq0}};
    Region r2{{parse_polynomial("x_2 + x_1^2", vars), Relation::eq0},
              {parse_polynomial("x_1", vars), Relation::ge0}};
    return SemialgebraicSet(2, vars, {r1, r2});
}

SemialgebraicSet horn() {
    std::vector<std::string> vars{"x_1", "x_2"};
    Region region{{parse_polynomial("x_1^3 - 2*x_2^2", vars), Relation::ge0}};
    return SemialgebraicSet(2, vars, {region});
}

SemialgebraicSet circle_cone() {
    std::vector<std::string> vars{"x_1", "x_2", "x_3"};
    Region region{{parse_polynomial("x_3^2 - x_1^2 - x_2^2", vars), Relation::eq0},
                  {parse_polynomial("x_3", vars), Relation::ge0}};
    return SemialgebraicSet(3, vars, {region});
}

}  // namespace

TEST_CASE("coordinate link of the ruled surface is a single V") {
    auto slice = extract_link(ruled_surface(), RadiusFunction::coordinate(0), 0.2, 0.02);
    REQUIRE(slice.components.size() == 1);
    for (const auto& p : slice.cloud.points) {
        REQUIRE(std::abs(p[0] - 0.2) <= slice.band);
        REQUIRE(std::abs(std::abs(p[2]) - 0.2 * p[1]) <= 1e-6);
    }
}

TEST_CASE("euclidean link of two half-lines: two singleton clusters at chord distance") {
    for (double r : {0.5, 0.2}) {
        auto slice = extract_link(two_halflines(), RadiusFunction::euclidean(), r, 0.02);
        REQUIRE(slice.components.size() == 2);
        double sep = separation_ratio(slice);
        REQUIRE_THAT(sep, Catch::Matchers::WithinRel(std::sqrt(2.0), 0.01));
    }
}

TEST_CASE("composite link of the horn is the cusp curve") {
    auto rho = RadiusFunction::composite("x_1 - (x_2^2)^(1/3)", {"x_1", "x_2"}, false);
    auto slice = extract_link(horn(), rho, 0.1, 0.02);
    REQUIRE_FALSE(slice.low_confidence);
    REQUIRE(slice.components.size() == 1);
    REQUIRE(slice.cloud.points.size() > 50);
    for (const auto& p : slice.cloud.points) {
        REQUIRE(std::abs(rho.eval(p) - 0.1) <= slice.band);
        double residual = p[1] * p[1] - std::pow(p[0] - 0.1, 3.0);
        REQUIRE(std::abs(residual) <= 5e-3);
    }
}

TEST_CASE("component partition covers isolated vertices") {
    LinkSlice slice;
    slice.r = 1.0;
    slice.graph.cloud.points = {{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}};
    slice.graph.cloud.region_tag = {0, 0, 0};
    slice.graph.cloud.pass_mask = {1, 1, 1};
    slice.graph.rebuild_adjacency();
    auto comps = components(slice);
    REQUIRE(comps.size() == 3);
}

TEST_CASE("separation of tangent parabolas follows the vertical-gap chord formula") {
    for (double r : {0.4, 0.2, 0.1}) {
        auto slice = extract_link(tangent_parabolas(), RadiusFunction::euclidean(), r, 0.02);
        REQUIRE(slice.components.size() == 3);
        double a2 = (-1.0 + std::sqrt(1.0 + 4.0 * r * r)) / 2.0;
        double expected = 2.0 * a2 / r;
        REQUIRE_THAT(separation_ratio(slice), Catch::Matchers::WithinRel(expected, 0.03));
    }
}

TEST_CASE("single-component slices have infinite separation") {
    auto slice = extract_link(ruled_surface(), RadiusFunction::coordinate(0), 0.2, 0.03);
    REQUIRE(separation_ratio(slice) == kInf);
}

TEST_CASE("per-component link constants track the V-angle law") {
    auto set = ruled_surface();
    auto rho = RadiusFunction::coordinate(0);

    auto slice4 = extract_link(set, rho, 0.4, 0.02);
    auto ests4 = link_lne_constant(slice4, 0.1, 256);
    REQUIRE(ests4.size() == 1);
    REQUIRE_THAT(ests4[0].constant,
                 Catch::Matchers::WithinRel(std::sqrt(1.0 + 0.16) / 0.4, 0.10));

    auto slice2 = extract_link(set, rho, 0.2, 0.02);
    auto ests2 = link_lne_constant(slice2, 0.1, 256);
    REQUIRE_THAT(ests2[0].constant,
                 Catch::Matchers::WithinRel(std::sqrt(1.0 + 0.04) / 0.2, 0.10));

    // doubling resolution in r doubles K, the 1/r signature
    REQUIRE_THAT(ests2[0].constant / ests4[0].constant, Catch::Matchers::WithinAbs(1.89, 0.25));
}

TEST_CASE("circle link: antipodal points realize the semicircle ratio") {
    auto slice = extract_link(circle_cone(), RadiusFunction::euclidean(), 0.3, 0.02);
    REQUIRE(slice.components.size() == 1);
    auto ests = link_lne_constant(slice, 0.1, 256);
    REQUIRE_THAT(ests[0].constant, Catch::Matchers::WithinRel(M_PI / 2.0, 0.10));
}

TEST_CASE("separation ratio is invariant under an exact rotation") {
    auto straight = extract_link(two_halflines(), RadiusFunction::euclidean(), 0.4, 0.02);
    auto rotated = extract_link(two_halflines_rotated(), RadiusFunction::euclidean(), 0.4, 0.02);
    REQUIRE(std::abs(separation_ratio(straight) - separation_ratio(rotated)) /
                separation_ratio(straight) <
            0.02);
}

TEST_CASE("maxnorm link of a convex cone is flat: no spurious inflation") {
    std::vector<std::string> vars{"x_1", "x_2"};
    Region region{{parse_polynomial("x_2^2 - x_1^2", vars), Relation::ge0},
                  {parse_polynomial("x_2", vars), Relation::ge0}};
    SemialgebraicSet cone(2, vars, {region});
    const double h_rel = 0.02;
    auto slice = extract_link(cone, RadiusFunction::maxnorm(), 0.3, h_rel);
    REQUIRE(slice.components.size() == 1);
    auto ests = link_lne_constant(slice, 0.1, 128);
    REQUIRE(ests[0].constant >= 1.0 - 1e-12);
    REQUIRE(ests[0].constant <= 1.0 + 5.0 * h_rel);
}

TEST_CASE("V component count is stable across radii and resolutions") {
    auto set = ruled_surface();
    auto rho = RadiusFunction::coordinate(0);
    for (double r : {0.4, 0.2, 0.1, 0.05}) {
        for (double h_rel : {0.05, 0.04}) {
            auto slice = extract_link(set, rho, r, h_rel);
            INFO("r = " << r << ", h_rel = " << h_rel);
            REQUIRE(slice.components.size() == 1);
        }
    }
}

TEST_CASE("every slice point sits inside the level band") {
    auto slices = {
        extract_link(two_halflines(), RadiusFunction::euclidean(), 0.3, 0.02),
        extract_link(ruled_surface(), RadiusFunction::coordinate(0), 0.3, 0.03),
        extract_link(ruled_surface(), RadiusFunction::maxnorm(), 0.3, 0.03),
    };
    for (const auto& slice : slices) {
        for (const auto& p : slice.cloud.points)
            REQUIRE(std::abs(slice.rho.eval(p) - slice.r) <= slice.band);
    }
}

TEST_CASE("extract_link validates inputs") {
    REQUIRE_THROWS_AS(extract_link(two_halflines(), RadiusFunction::euclidean(), -0.1, 0.02), Error);
    REQUIRE_THROWS_AS(extract_link(two_halflines(), RadiusFunction::euclidean(), 0.1, 0.5), Error);
}
