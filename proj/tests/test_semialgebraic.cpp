#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "lnelab/semialgebraic.hpp"

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

SemialgebraicSet halfline() {
    std::vector<std::string> vars{"x_1", "x_2"};
    Region region{
        {parse_polynomial("x_2", vars), Relation::eq0},
        {parse_polynomial("x_1", vars), Relation::ge0},
    };
    return SemialgebraicSet(2, vars, {region});
}

}  // namespace

TEST_CASE("membership on and off the ruled surface") {
    auto set = ruled_surface();
    REQUIRE(set.membership({1.0, 0.5, 0.5}, 1e-9).label == Membership::inside);
    REQUIRE(set.membership({1.0, 0.5, 0.6}, 1e-9).label == Membership::outside);
}

TEST_CASE("membership rejects inequality violations") {
    auto set = halfline();
    REQUIRE(set.membership({-1.0, 0.0}, 1e-9).label == Membership::outside);
    REQUIRE(set.membership({1.0, 0.0}, 1e-9).label == Membership::inside);
}

TEST_CASE("points just off the surface land in the boundary band") {
    auto set = halfline();
    double tol = 1e-9;
    auto res = set.membership({1.0, 2e-9}, tol);
    REQUIRE(res.label == Membership::boundary_band);
    REQUIRE(res.margin < 0);
    REQUIRE(res.margin >= -3 * tol);
}

TEST_CASE("membership is monotone in tol") {
    auto set = ruled_surface();
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::uniform_real_distribution<double> logtol(-12.0, -2.0);
    for (int trial = 0; trial < 300; ++trial) {
        Vec x{coord(rng), coord(rng), coord(rng)};
        double t1 = std::pow(10.0, logtol(rng));
        double t2 = t1 * 10.0;
        bool inside1 = set.membership(x, t1).label == Membership::inside;
        bool inside2 = set.membership(x, t2).label == Membership::inside;
        if (inside1) REQUIRE(inside2);
    }
}

TEST_CASE("norm comparison holds on random points") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t dim = 1 + static_cast<std::size_t>(trial % 4);
        Vec x(dim);
        for (auto& c : x) c = coord(rng);
        double two = norm2(x), inf = norm_inf(x);
        REQUIRE(inf <= two * (1 + 1e-12));
        REQUIRE(two / std::sqrt(static_cast<double>(dim)) <= inf * (1 + 1e-12) + 1e-300);
    }
}

TEST_CASE("set documents round-trip through JSON") {
    auto set = ruled_surface();
    auto doc = set_to_json(set);
    auto back = set_from_json(doc);
    REQUIRE(back.ambient_dim() == 3);
    REQUIRE(back.regions().size() == 1);
    REQUIRE(back.regions()[0].size() == 3);
    REQUIRE(back.regions()[0][0].poly == set.regions()[0][0].poly);
}

TEST_CASE("malformed documents are rejected with input errors") {
    REQUIRE_THROWS_AS(set_from_json(nlohmann::json::parse(R"({"variables":["x"]})")), Error);
    REQUIRE_THROWS_AS(
        set_from_json(nlohmann::json::parse(
            R"({"ambient_dim":1,"variables":["x"],"regions":[]})")),
        Error);
    REQUIRE_THROWS_AS(
        set_from_json(nlohmann::json::parse(
            R"({"ambient_dim":1,"variables":["x"],"regions":[{"conjuncts":[{"poly":"y","rel":"=0"}]}]})")),
        ParseError);
    REQUIRE_THROWS_AS(
        set_from_json(nlohmann::json::parse(
            R"({"ambient_dim":1,"variables":["x"],"regions":[{"conjuncts":[{"poly":"x","rel":"~0"}]}]})")),
        Error);
}
