#ifndef LNELAB_TESTS_SUPPORT_HPP
#define LNELAB_TESTS_SUPPORT_HPP

// Shared helpers for the test suites. The oracle here is deliberately
// independent of the library's landmark/FPS estimation path: plain Dijkstra
// from every vertex, exhaustive pair maximum.

#include <queue>
#include <vector>

#include "lnelab/sampler.hpp"

namespace testsupport {

using lnelab::MeshGraph;
using lnelab::Vec;

inline Vec oracle_dijkstra(const MeshGraph& graph, int source) {
    const std::size_t n = graph.vertex_count();
    Vec dist(n, lnelab::kInf);
    std::vector<char> done(n, 0);
    dist[static_cast<std::size_t>(source)] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.push({0.0, source});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (done[static_cast<std::size_t>(u)]) continue;
        done[static_cast<std::size_t>(u)] = 1;
        for (const auto& [v, w] : graph.adjacency[static_cast<std::size_t>(u)])
            if (dist[static_cast<std::size_t>(u)] + w < dist[static_cast<std::size_t>(v)]) {
                dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + w;
                heap.push({dist[static_cast<std::size_t>(v)], v});
            }
    }
    return dist;
}

struct OraclePair {
    double ratio = 0.0;
    int i = -1, j = -1;
    bool disconnected = false;
};

// Exhaustive all-pairs maximum of d_graph / d_out over pairs with d_out >= eta.
inline OraclePair oracle_max_ratio(const MeshGraph& graph, double eta) {
    OraclePair best;
    const std::size_t n = graph.vertex_count();
    for (std::size_t s = 0; s < n; ++s) {
        Vec dist = oracle_dijkstra(graph, static_cast<int>(s));
        for (std::size_t t = 0; t < n; ++t) {
            if (t == s) continue;
            double dout = lnelab::dist2(graph.cloud.points[s], graph.cloud.points[t]);
            if (dout < eta) continue;
            if (dist[t] == lnelab::kInf) {
                best.disconnected = true;
                continue;
            }
            double ratio = dist[t] / dout;
            if (ratio > best.ratio) {
                best.ratio = ratio;
                best.i = static_cast<int>(s);
                best.j = static_cast<int>(t);
            }
        }
    }
    return best;
}

inline int nearest_vertex(const MeshGraph& graph, const Vec& target) {
    int best = -1;
    double best_d = lnelab::kInf;
    for (std::size_t i = 0; i < graph.cloud.points.size(); ++i) {
        double d = lnelab::dist2(graph.cloud.points[i], target);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

}  // namespace testsupport

#endif  // LNELAB_TESTS_SUPPORT_HPP
