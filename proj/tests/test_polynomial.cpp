#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "lnelab/polynomial.hpp"

using namespace lnelab;

TEST_CASE("parse expands products and powers") {
    auto p = parse_polynomial("z^2 - t^2*x*x", {"t", "x", "z"});
    REQUIRE(p.terms().size() == 2);
    REQUIRE(p.terms().at({0, 0, 2}) == Rational(1));
    REQUIRE(p.terms().at({2, 2, 0}) == Rational(-1));
}

TEST_CASE("parse of zero collapses to the empty term map") {
    auto p = parse_polynomial("0", {"x"});
    REQUIRE(p.is_zero());
    REQUIRE(p.eval({3.7}) == 0.0);

    auto q = parse_polynomial("x - x + 0*x^5", {"x"});
    REQUIRE(q.is_zero());
}

TEST_CASE("parse matches the cleared-denominator horn boundary") {
    auto p = parse_polynomial("2*x_2^2 - x_1^3", {"x_1", "x_2"});
    REQUIRE(p.terms().size() == 2);
    REQUIRE(p.terms().at({0, 2}) == Rational(2));
    REQUIRE(p.terms().at({3, 0}) == Rational(-1));

    // Same region with the denominator kept: x_1^3/2 - x_2^2 >= 0.
    auto q = parse_polynomial("x_1^3/2 - x_2^2", {"x_1", "x_2"});
    REQUIRE(q.terms().at({3, 0}) == Rational(1, 2));
}

TEST_CASE("parse errors carry positions") {
    REQUIRE_THROWS_AS(parse_polynomial("x +* y", {"x", "y"}), ParseError);
    REQUIRE_THROWS_AS(parse_polynomial("x + w", {"x", "y"}), ParseError);
    REQUIRE_THROWS_AS(parse_polynomial("x^-2", {"x"}), ParseError);
    REQUIRE_THROWS_AS(parse_polynomial("x^1.5", {"x"}), ParseError);
    REQUIRE_THROWS_AS(parse_polynomial("x/(y)", {"x", "y"}), ParseError);
    try {
        parse_polynomial("x + ", {"x"});
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        REQUIRE(e.position() == 4);
    }
}

TEST_CASE("eval on and off the ruled surface") {
    auto p = parse_polynomial("z^2 - t^2*x*x", {"t", "x", "z"});
    REQUIRE(p.eval({1.0, 0.5, 0.5}) == 0.0);
    REQUIRE_THAT(p.eval({1.0, 0.5, 0.6}), Catch::Matchers::WithinAbs(0.11, 1e-12));
    REQUIRE_THROWS_AS(p.eval({1.0, 0.5}), Error);
}

TEST_CASE("gradient: hand values and trivial cases") {
    // hand differentiation: (-2*t*x^2, -2*t^2*x, 2*z) at (1, 0.5, 0.5)
    auto p = parse_polynomial("z^2 - t^2*x*x", {"t", "x", "z"});
    Vec g = p.gradient({1.0, 0.5, 0.5});
    REQUIRE_THAT(g[0], Catch::Matchers::WithinAbs(-0.5, 1e-12));
    REQUIRE_THAT(g[1], Catch::Matchers::WithinAbs(-1.0, 1e-12));
    REQUIRE_THAT(g[2], Catch::Matchers::WithinAbs(1.0, 1e-12));

    auto c = parse_polynomial("7", {"x", "y"});
    REQUIRE(c.gradient({2.0, 3.0}) == Vec{0.0, 0.0});

    auto x1 = parse_polynomial("x", {"x", "y", "z"});
    REQUIRE(x1.gradient({0.3, -2.0, 5.0}) == Vec{1.0, 0.0, 0.0});
}

namespace {

Polynomial random_polynomial(std::mt19937_64& rng, std::size_t dim, unsigned max_degree) {
    std::uniform_int_distribution<int> coeff(-10, 10);
    std::uniform_int_distribution<int> den(1, 4);
    std::uniform_int_distribution<unsigned> expo(0, max_degree);
    std::uniform_int_distribution<int> terms(1, 6);
    Polynomial p(dim);
    int n = terms(rng);
    for (int t = 0; t < n; ++t) {
        Exponents e(dim);
        unsigned total = 0;
        for (std::size_t d = 0; d < dim; ++d) {
            unsigned k = expo(rng);
            if (total + k > max_degree) k = 0;
            e[d] = k;
            total += k;
        }
        int c = coeff(rng);
        if (c == 0) c = 1;
        p.add_term(e, Rational(c, den(rng)));
    }
    return p;
}

}  // namespace

TEST_CASE("print/parse round-trip on random polynomials") {
    std::mt19937_64 rng(20240601);
    std::vector<std::string> vars{"x_1", "x_2", "x_3", "x_4"};
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t dim = 1 + static_cast<std::size_t>(trial % 4);
        std::vector<std::string> names(vars.begin(), vars.begin() + static_cast<long>(dim));
        Polynomial p = random_polynomial(rng, dim, 6);
        Polynomial q = parse_polynomial(p.to_string(names), names);
        REQUIRE(p == q);
    }
}

TEST_CASE("gradient agrees with central differences on random inputs") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    const double h = 1e-5;
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t dim = 1 + static_cast<std::size_t>(trial % 3);
        std::vector<std::string> names{"x_1", "x_2", "x_3"};
        names.resize(dim);
        Polynomial p = random_polynomial(rng, dim, 4);
        Vec x(dim);
        for (auto& c : x) c = coord(rng);
        Vec g = p.gradient(x);
        for (std::size_t d = 0; d < dim; ++d) {
            Vec lo = x, hi = x;
            lo[d] -= h;
            hi[d] += h;
            double fd = (p.eval(hi) - p.eval(lo)) / (2.0 * h);
            double scale = std::max({1.0, std::abs(g[d]), std::abs(fd)});
            REQUIRE_THAT(g[d] / scale, Catch::Matchers::WithinAbs(fd / scale, 1e-6));
        }
    }
}

TEST_CASE("decimal literals are exact rationals") {
    auto p = parse_polynomial("0.5*x - 0.125", {"x"});
    REQUIRE(p.terms().at({1}) == Rational(1, 2));
    REQUIRE(p.terms().at({0}) == Rational(-1, 8));
}

TEST_CASE("rational_from_double is exact for representable values") {
    for (double v : {0.4, 0.2, 0.1, 0.05, 1.0, -0.375, 3.0}) {
        Rational q = rational_from_double(v);
        REQUIRE(to_double(q) == v);
    }
}
