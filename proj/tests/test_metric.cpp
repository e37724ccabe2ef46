#include <catch2/catch_amalgamated.hpp>

#include "lnelab/link.hpp"
#include "lnelab/metric.hpp"
#include "support.hpp"

using namespace lnelab;

namespace {

MeshGraph handmade_graph(std::vector<Vec> points, std::vector<Edge> edges) {
    MeshGraph g;
    g.cloud.points = std::move(points);
    g.cloud.region_tag.assign(g.cloud.points.size(), 0);
    g.cloud.pass_mask.assign(g.cloud.points.size(), 1u);
    g.cloud.spacing = 1.0;
    g.edges = std::move(edges);
    g.rebuild_adjacency();
    return g;
}

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

}  // namespace

TEST_CASE("Dijkstra on a unit path graph") {
    auto g = handmade_graph({{0.0}, {1.0}, {2.0}}, {{0, 1, 1.0}, {1, 2, 1.0}});
    REQUIRE(shortest_paths(g, 0) == Vec{0.0, 1.0, 2.0});
}

TEST_CASE("Dijkstra marks unreachable vertices infinite") {
    auto g = handmade_graph({{0.0}, {1.0}, {5.0}, {6.0}}, {{0, 1, 1.0}, {2, 3, 1.0}});
    Vec d = shortest_paths(g, 0);
    REQUIRE(d[1] == 1.0);
    REQUIRE(d[2] == kInf);
    REQUIRE(d[3] == kInf);
}

TEST_CASE("outer distance basics") {
    REQUIRE(outer_distance({0.0, 0.0}, {3.0, 4.0}) == 5.0);
    REQUIRE(outer_distance({1.0, 2.0}, {1.0, 2.0}) == 0.0);
    REQUIRE_THAT(outer_distance({0.2, 0.04}, {0.2, -0.04}), Catch::Matchers::WithinAbs(0.08, 1e-15));
    REQUIRE_THROWS_AS(outer_distance({1.0}, {1.0, 2.0}), Error);
}

TEST_CASE("V-slice tip-to-tip distance equals the two arm lengths") {
    auto slice = extract_link(ruled_surface(), RadiusFunction::coordinate(0), 0.2, 0.004);
    REQUIRE(slice.components.size() == 1);
    int tip_plus = testsupport::nearest_vertex(slice.graph, {0.2, 0.2, 0.04});
    int tip_minus = testsupport::nearest_vertex(slice.graph, {0.2, 0.2, -0.04});
    Vec dist = shortest_paths(slice.graph, tip_plus);
    double expected = 2.0 * 0.2 * std::sqrt(1.0 + 0.04);
    REQUIRE_THAT(dist[static_cast<std::size_t>(tip_minus)],
                 Catch::Matchers::WithinRel(expected, 0.005));
}

TEST_CASE("convex cone annulus: estimate stays within discretization of 1") {
    // the inner rim of the annulus must stay below the pair cutoff: pairs
    // hugging the rim detour around the hole and would report the arc ratio
    std::vector<std::string> vars{"x_1", "x_2"};
    Region region{{parse_polynomial("x_2^2 - x_1^2", vars), Relation::ge0},
                  {parse_polynomial("x_2", vars), Relation::ge0}};
    SemialgebraicSet cone(2, vars, {region});
    auto cloud = sample_set(cone, {0.03, 0.5}, 0.01);
    auto graph = build_graph(cloud, 3.0, cone);
    auto est = lne_constant(graph, 0.05, 200);
    REQUIRE(est.constant >= 1.0 - 1e-12);
    REQUIRE(est.constant <= 1.05);
    REQUIRE(est.witness_inner / est.witness_outer == est.constant);
}

TEST_CASE("two half-lines with apex: the right-angle constant") {
    auto set = two_halflines();
    auto cloud = sample_set(set, {0.05, 1.0}, 0.01);
    auto graph = attach_apex(build_graph(cloud, 3.0, set), 0.075);
    auto est = lne_constant(graph, 0.05, 200);
    REQUIRE_THAT(est.constant, Catch::Matchers::WithinRel(std::sqrt(2.0), 0.05));

    auto oracle = testsupport::oracle_max_ratio(graph, 0.05);
    REQUIRE_FALSE(oracle.disconnected);
    REQUIRE_THAT(oracle.ratio, Catch::Matchers::WithinRel(std::sqrt(2.0), 0.05));
}

TEST_CASE("ruled-surface link at r = 0.2: K tracks the V-angle formula") {
    auto slice = extract_link(ruled_surface(), RadiusFunction::coordinate(0), 0.2, 0.02);
    auto est = lne_constant(slice.graph, 0.02, 256);
    double expected = std::sqrt(1.0 + 0.2 * 0.2) / 0.2;  // 5.0990
    REQUIRE_THAT(est.constant, Catch::Matchers::WithinRel(expected, 0.10));
}

TEST_CASE("disconnected pairs above the cutoff yield an infinite constant") {
    auto set = two_halflines();
    auto cloud = sample_set(set, {0.05, 1.0}, 0.02);
    auto graph = build_graph(cloud, 3.0, set);  // no apex: components stay apart
    auto est = lne_constant(graph, 0.05, 64);
    REQUIRE(est.constant == kInf);
    REQUIRE(est.witness_source >= 0);
}

TEST_CASE("landmark estimate with all vertices equals the exhaustive maximum") {
    auto set = two_halflines();
    auto cloud = sample_set(set, {0.1, 1.0}, 0.02);
    auto graph = attach_apex(build_graph(cloud, 3.0, set), 0.15);
    REQUIRE(graph.vertex_count() <= 500);
    auto est = lne_constant(graph, 0.05, graph.vertex_count());
    auto oracle = testsupport::oracle_max_ratio(graph, 0.05);
    REQUIRE(est.constant == oracle.ratio);
}

TEST_CASE("estimate is monotone non-decreasing in the landmark budget") {
    auto slice = extract_link(ruled_surface(), RadiusFunction::coordinate(0), 0.2, 0.03);
    double previous = 0.0;
    for (std::size_t landmarks : {2ul, 4ul, 8ul, 16ul, 64ul}) {
        auto est = lne_constant(slice.graph, 0.02, landmarks);
        REQUIRE(est.constant >= previous);
        previous = est.constant;
    }
}

TEST_CASE("estimate is invariant under vertex relabeling") {
    auto set = two_halflines();
    auto cloud = sample_set(set, {0.1, 1.0}, 0.03);
    auto graph = attach_apex(build_graph(cloud, 3.0, set), 0.2);
    const std::size_t n = graph.vertex_count();

    MeshGraph permuted;
    permuted.cloud.spacing = graph.cloud.spacing;
    permuted.cloud.r_min = graph.cloud.r_min;
    permuted.cloud.r_max = graph.cloud.r_max;
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = (i * 7 + 3) % n;  // a fixed permutation
    std::vector<std::size_t> inv(n);
    for (std::size_t i = 0; i < n; ++i) inv[perm[i]] = i;
    permuted.cloud.points.resize(n);
    permuted.cloud.region_tag.resize(n);
    permuted.cloud.pass_mask.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        permuted.cloud.points[perm[i]] = graph.cloud.points[i];
        permuted.cloud.region_tag[perm[i]] = graph.cloud.region_tag[i];
        permuted.cloud.pass_mask[perm[i]] = graph.cloud.pass_mask[i];
    }
    for (const auto& e : graph.edges) {
        int a = static_cast<int>(perm[static_cast<std::size_t>(e.i)]);
        int b = static_cast<int>(perm[static_cast<std::size_t>(e.j)]);
        permuted.edges.push_back({std::min(a, b), std::max(a, b), e.weight});
    }
    permuted.rebuild_adjacency();

    auto est = lne_constant(graph, 0.05, 32);
    auto est_p = lne_constant(permuted, 0.05, 32);
    REQUIRE(est.constant == est_p.constant);
}

TEST_CASE("graph distances dominate straight chords") {
    auto slice = extract_link(ruled_surface(), RadiusFunction::coordinate(0), 0.2, 0.03);
    Vec dist = shortest_paths(slice.graph, 0);
    for (std::size_t t = 1; t < slice.graph.vertex_count(); ++t) {
        if (dist[t] == kInf) continue;
        REQUIRE(dist[t] >= dist2(slice.graph.cloud.points[0], slice.graph.cloud.points[t]) - 1e-9);
    }
}

TEST_CASE("lne_constant validates its inputs") {
    auto g = handmade_graph({{0.0}}, {});
    REQUIRE_THROWS_AS(lne_constant(g, 0.1, 8), Error);
    auto g2 = handmade_graph({{0.0}, {1.0}}, {{0, 1, 1.0}});
    REQUIRE_THROWS_AS(lne_constant(g2, -1.0, 8), Error);
    REQUIRE_THROWS_AS(lne_constant(g2, 0.1, 1), Error);
}
