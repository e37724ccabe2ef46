#ifndef LNELAB_METRIC_HPP
#define LNELAB_METRIC_HPP

#include <queue>
#include <vector>

#include "lnelab/sampler.hpp"

namespace lnelab {

inline double outer_distance(const Vec& u, const Vec& v) {
    if (u.size() != v.size()) throw Error(ErrorKind::input, "outer_distance: dimension mismatch");
    return dist2(u, v);
}

// Single-source shortest paths (Dijkstra, lazy-deletion binary heap).
// Unreachable vertices stay at +inf.
inline Vec shortest_paths(const MeshGraph& graph, int source) {
    const std::size_t n = graph.vertex_count();
    if (source < 0 || static_cast<std::size_t>(source) >= n)
        throw Error(ErrorKind::input, "shortest_paths: source out of range");
    Vec dist(n, kInf);
    dist[static_cast<std::size_t>(source)] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.push({0.0, source});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[static_cast<std::size_t>(u)]) continue;
        for (const auto& [v, w] : graph.adjacency[static_cast<std::size_t>(u)]) {
            double nd = d + w;
            if (nd < dist[static_cast<std::size_t>(v)]) {
                dist[static_cast<std::size_t>(v)] = nd;
                heap.push({nd, v});
            }
        }
    }
    return dist;
}

struct LneEstimate {
    double constant = 1.0;
    int witness_source = -1;
    int witness_target = -1;
    double witness_inner = 0.0;
    double witness_outer = 0.0;
    std::size_t pairs_evaluated = 0;
    double eta = 0.0;
    std::size_t landmarks = 0;
};

namespace detail {

// Farthest-point sampling seeded at the point of largest norm, with
// lexicographic tie-breaks; invariant under vertex relabeling.
inline std::vector<int> farthest_point_landmarks(const std::vector<Vec>& points, std::size_t count) {
    std::vector<int> chosen;
    if (points.empty() || count == 0) return chosen;
    std::size_t first = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double n = norm2(points[i]);
        if (n > best || (n == best && lex_less(points[i], points[first]))) {
            best = n;
            first = i;
        }
    }
    chosen.push_back(static_cast<int>(first));
    Vec dist(points.size(), kInf);
    while (chosen.size() < std::min(count, points.size())) {
        const Vec& last = points[static_cast<std::size_t>(chosen.back())];
        std::size_t next = 0;
        double far = -1.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            dist[i] = std::min(dist[i], dist2(points[i], last));
            if (dist[i] > far || (dist[i] == far && lex_less(points[i], points[next]))) {
                far = dist[i];
                next = i;
            }
        }
        if (far <= 0) break;  // all remaining points coincide with landmarks
        chosen.push_back(static_cast<int>(next));
    }
    return chosen;
}

}  // namespace detail

// Estimates the least C with d_inn <= C*d_out over the graph: runs Dijkstra
// from farthest-point landmarks and maximizes d_graph/d_out over pairs with
// d_out >= eta. Pairs below eta are dominated by discretization noise.
// Disconnection yields +inf with the disconnected witness pair.
inline LneEstimate lne_constant(const MeshGraph& graph, double eta, std::size_t landmarks,
                                std::uint64_t seed = 0, unsigned threads = 0) {
    (void)seed;  // selection is geometric and needs no randomness
    const std::size_t n = graph.vertex_count();
    if (n < 2) throw Error(ErrorKind::input, "lne_constant: graph has fewer than 2 vertices");
    if (!(eta > 0)) throw Error(ErrorKind::input, "lne_constant: eta must be positive");
    if (landmarks < 2) throw Error(ErrorKind::input, "lne_constant: need at least 2 landmarks");

    std::vector<int> sources = detail::farthest_point_landmarks(graph.cloud.points, landmarks);

    struct Local {
        double best = 0.0;
        int si = -1, ti = -1;
        double din = 0.0, dout = 0.0;
        bool disconnected = false;
        int dsi = -1, dti = -1;
        double ddout = 0.0;
        std::size_t pairs = 0;
    };
    std::vector<Local> partial(sources.size());

    parallel_for(sources.size(), threads, [&](std::size_t k) {
        int s = sources[k];
        Vec dist = shortest_paths(graph, s);
        Local& local = partial[k];
        const Vec& ps = graph.cloud.points[static_cast<std::size_t>(s)];
        for (std::size_t t = 0; t < n; ++t) {
            if (static_cast<int>(t) == s) continue;
            double dout = dist2(ps, graph.cloud.points[t]);
            if (dout < eta) continue;
            ++local.pairs;
            double din = dist[t];
            if (din == kInf) {
                if (!local.disconnected) {
                    local.disconnected = true;
                    local.dsi = s;
                    local.dti = static_cast<int>(t);
                    local.ddout = dout;
                }
                continue;
            }
            double ratio = din / dout;
            if (ratio > local.best ||
                (ratio == local.best && (s < local.si || (s == local.si && static_cast<int>(t) < local.ti)))) {
                local.best = ratio;
                local.si = s;
                local.ti = static_cast<int>(t);
                local.din = din;
                local.dout = dout;
            }
        }
    });

    LneEstimate est;
    est.eta = eta;
    est.landmarks = sources.size();
    for (const auto& local : partial) {
        est.pairs_evaluated += local.pairs;
        if (local.disconnected && est.constant != kInf) {
            est.constant = kInf;
            est.witness_source = local.dsi;
            est.witness_target = local.dti;
            est.witness_inner = kInf;
            est.witness_outer = local.ddout;
        }
    }
    if (est.constant == kInf) return est;

    double best = 0.0;
    const Local* winner = nullptr;
    for (const auto& local : partial) {
        if (local.si < 0) continue;
        if (local.best > best ||
            (winner && local.best == best &&
             (local.si < winner->si || (local.si == winner->si && local.ti < winner->ti)))) {
            best = local.best;
            winner = &local;
        }
    }
    if (winner) {
        est.constant = winner->best;  // reproduces witness_inner / witness_outer exactly
        est.witness_source = winner->si;
        est.witness_target = winner->ti;
        est.witness_inner = winner->din;
        est.witness_outer = winner->dout;
    }
    return est;
}

}  // namespace lnelab

#endif  // LNELAB_METRIC_HPP
