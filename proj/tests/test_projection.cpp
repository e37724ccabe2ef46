#include <catch2/catch_amalgamated.hpp>

#include "lnelab/projection.hpp"

using namespace lnelab;

namespace {
const std::vector<std::string> kVars{"t", "x", "z"};
}

TEST_CASE("projection onto a smooth sheet converges near the seed") {
    auto surface = parse_polynomial("z^2 - t^2*x^2", kVars);
    auto res = project_to_variety({1.0, 0.5, 0.52}, {surface}, 1e-10);
    REQUIRE(res.ok());
    REQUIRE(std::abs(surface.eval(res.point)) <= 1e-10 * surface.term_scale(res.point));
    REQUIRE(dist2(res.point, {1.0, 0.5, 0.52}) < 0.05);
}

TEST_CASE("a point already on the variety is a fixed point with zero iterations") {
    auto surface = parse_polynomial("z^2 - t^2*x^2", kVars);
    auto res = project_to_variety({1.0, 0.5, 0.5}, {surface}, 1e-10);
    REQUIRE(res.ok());
    REQUIRE(res.iterations == 0);
    REQUIRE(res.point == Vec{1.0, 0.5, 0.5});
}

TEST_CASE("the origin lies on the variety") {
    auto surface = parse_polynomial("z^2 - t^2*x^2", kVars);
    auto res = project_to_variety({0.0, 0.0, 0.0}, {surface}, 1e-10);
    REQUIRE(res.ok());
    REQUIRE(res.iterations == 0);
    REQUIRE(res.point == Vec{0.0, 0.0, 0.0});
}

TEST_CASE("two equalities pin a curve point") {
    auto surface = parse_polynomial("z^2 - t^2*x^2", kVars);
    auto plane = parse_polynomial("t - 0.2", kVars);
    auto res = project_to_variety({0.22, 0.1, 0.025}, {surface, plane}, 1e-11);
    REQUIRE(res.ok());
    REQUIRE_THAT(res.point[0], Catch::Matchers::WithinAbs(0.2, 1e-10));
    REQUIRE(std::abs(surface.eval(res.point)) <= 1e-10);
}

TEST_CASE("an all-zero Jacobian at a non-solution reports rank deficiency") {
    // Gradient of x^2 + y^2 vanishes at the origin while the residual is 1.
    auto p = parse_polynomial("x^2 + y^2 + 1", {"x", "y"});
    auto res = project_to_variety({0.0, 0.0}, {p}, 1e-10, 5);
    REQUIRE_FALSE(res.ok());
    REQUIRE((res.status == ProjectionStatus::rank_deficient ||
             res.status == ProjectionStatus::max_iterations));
}

TEST_CASE("an unsatisfiable system reports non-convergence") {
    auto p = parse_polynomial("x^2 + 1", {"x"});
    auto res = project_to_variety({0.7}, {p}, 1e-10, 25);
    REQUIRE_FALSE(res.ok());
}

TEST_CASE("singular-axis seeds converge to the corner") {
    // From (t0, 0, 0) the least-squares step moves straight to t = r.
    auto surface = parse_polynomial("z^2 - t^2*x^2", kVars);
    auto plane = parse_polynomial("t - 0.2", kVars);
    auto res = project_to_variety({0.21, 0.0, 0.0}, {surface, plane}, 1e-11);
    REQUIRE(res.ok());
    REQUIRE_THAT(res.point[0], Catch::Matchers::WithinAbs(0.2, 1e-10));
    REQUIRE_THAT(res.point[1], Catch::Matchers::WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(res.point[2], Catch::Matchers::WithinAbs(0.0, 1e-12));
}
