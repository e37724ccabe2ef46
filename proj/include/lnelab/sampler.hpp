#ifndef LNELAB_SAMPLER_HPP
#define LNELAB_SAMPLER_HPP

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lnelab/projection.hpp"
#include "lnelab/semialgebraic.hpp"

namespace lnelab {

// Near-uniform point cloud on a set inside a Euclidean annulus. `pass_mask`
// records every region a point satisfies at tol(); `region_tag` is the region
// it was sampled from. Immutable once built.
struct SampleCloud {
    std::vector<Vec> points;
    std::vector<int> region_tag;
    std::vector<std::uint32_t> pass_mask;
    double spacing = 0.0;  // target inter-point distance h
    double r_min = 0.0;
    double r_max = 0.0;

    double tol() const { return 1e-7 * (1.0 + r_max); }
    std::size_t size() const { return points.size(); }
};

struct Edge {
    int i;
    int j;
    double weight;
};

// Proximity graph whose shortest paths approximate the inner metric.
struct MeshGraph {
    SampleCloud cloud;
    std::vector<Edge> edges;
    std::vector<std::vector<std::pair<int, double>>> adjacency;
    std::optional<int> apex_index;

    std::size_t vertex_count() const { return cloud.points.size(); }

    void rebuild_adjacency() {
        adjacency.assign(cloud.points.size(), {});
        for (const auto& e : edges) {
            adjacency[static_cast<std::size_t>(e.i)].push_back({e.j, e.weight});
            adjacency[static_cast<std::size_t>(e.j)].push_back({e.i, e.weight});
        }
    }
};

namespace detail {

// Uniform hash grid over integer cells; used for thinning and radius queries.
class CellIndex {
public:
    explicit CellIndex(double cell_size) : cell_(cell_size) {}

    void insert(std::size_t id, const Vec& p) {
        grid_[key(p)].push_back(id);
    }

    template <typename Fn>
    void for_neighbors(const Vec& p, Fn&& fn) const {
        std::vector<long long> base = coords(p);
        std::size_t dim = base.size();
        std::vector<long long> offset(dim, -1);
        while (true) {
            std::vector<long long> cell(dim);
            for (std::size_t d = 0; d < dim; ++d) cell[d] = base[d] + offset[d];
            auto it = grid_.find(pack(cell));
            if (it != grid_.end())
                for (std::size_t id : it->second) fn(id);
            std::size_t d = 0;
            while (d < dim) {
                if (++offset[d] <= 1) break;
                offset[d] = -1;
                ++d;
            }
            if (d == dim) break;
        }
    }

private:
    std::vector<long long> coords(const Vec& p) const {
        std::vector<long long> c(p.size());
        for (std::size_t d = 0; d < p.size(); ++d)
            c[d] = static_cast<long long>(std::floor(p[d] / cell_));
        return c;
    }

    std::uint64_t key(const Vec& p) const { return pack(coords(p)); }

    static std::uint64_t pack(const std::vector<long long>& c) {
        std::uint64_t h = 1469598103934665603ull;
        for (long long v : c) {
            std::uint64_t u = static_cast<std::uint64_t>(v);
            for (int b = 0; b < 8; ++b) {
                h ^= (u >> (8 * b)) & 0xffu;
                h *= 1099511628211ull;
            }
        }
        return h;
    }

    double cell_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid_;
};

inline std::vector<Polynomial> region_equalities(const Region& region) {
    std::vector<Polynomial> eqs;
    for (const auto& cond : region)
        if (cond.relation == Relation::eq0) eqs.push_back(cond.poly);
    return eqs;
}

inline std::vector<Polynomial> region_inequalities(const Region& region) {
    std::vector<Polynomial> ineqs;
    for (const auto& cond : region) {
        switch (cond.relation) {
            case Relation::ge0:
            case Relation::gt0: ineqs.push_back(cond.poly); break;
            case Relation::le0:
            case Relation::lt0: ineqs.push_back(-cond.poly); break;
            case Relation::eq0: break;
        }
    }
    return ineqs;
}

// Greedy thinning in lexicographic point order: deterministic regardless of
// how the candidates were produced. A nearby kept point only blocks a
// candidate when `same_sheet(midpoint)` holds, i.e. the two are neighbors
// along the set; distinct branches passing within min_dist of each other in
// the ambient space both keep their samples.
inline std::vector<std::size_t> thin_points(const std::vector<Vec>& candidates, double min_dist,
                                            const std::function<bool(const Vec&)>& same_sheet = nullptr) {
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (lex_less(candidates[a], candidates[b])) return true;
        if (lex_less(candidates[b], candidates[a])) return false;
        return a < b;
    });
    const double threshold = min_dist * (1.0 - 1e-6);
    CellIndex cells(std::max(min_dist, 1e-12));
    std::vector<Vec> kept_points;
    std::vector<std::size_t> kept;
    for (std::size_t idx : order) {
        const Vec& p = candidates[idx];
        bool blocked = false;
        cells.for_neighbors(p, [&](std::size_t k) {
            if (blocked || dist2(kept_points[k], p) >= threshold) return;
            if (same_sheet && !same_sheet(midpoint(kept_points[k], p))) return;
            blocked = true;
        });
        if (blocked) continue;
        cells.insert(kept_points.size(), p);
        kept_points.push_back(p);
        kept.push_back(idx);
    }
    return kept;
}

inline std::function<bool(const Vec&)> set_band_predicate(const SemialgebraicSet& set, double band) {
    return [&set, band](const Vec& m) { return set.within_band(m, band); };
}

// Conditions of the form c*x_d + b (rel) 0 clip the seed grid to an interval
// in dimension d; coordinate levels and max-norm faces collapse whole grid
// dimensions this way, which is what keeps fine meshes enumerable.
struct AxisBound {
    std::size_t dim;
    double lo;
    double hi;
};

inline std::optional<AxisBound> axis_aligned_bound(const SignCondition& cond, double slack) {
    double linear = 0.0, constant = 0.0;
    std::size_t var = 0;
    bool has_var = false;
    for (const auto& [e, c] : cond.poly.terms()) {
        unsigned total = 0;
        std::size_t last = 0;
        for (std::size_t d = 0; d < e.size(); ++d) {
            total += e[d];
            if (e[d] > 0) last = d;
        }
        if (total == 0) {
            constant = to_double(c);
        } else if (total == 1) {
            if (has_var && last != var) return std::nullopt;
            var = last;
            has_var = true;
            linear = to_double(c);
        } else {
            return std::nullopt;
        }
    }
    if (!has_var || linear == 0.0) return std::nullopt;
    double root = -constant / linear;
    double margin = slack;  // first-order distance |c*x+b|/|c| <= slack
    switch (cond.relation) {
        case Relation::eq0: return AxisBound{var, root - margin, root + margin};
        case Relation::ge0:
        case Relation::gt0:
            return linear > 0 ? AxisBound{var, root - margin, kInf}
                              : AxisBound{var, -kInf, root + margin};
        case Relation::le0:
        case Relation::lt0:
            return linear > 0 ? AxisBound{var, -kInf, root + margin}
                              : AxisBound{var, root - margin, kInf};
    }
    return std::nullopt;
}

struct RegionSampler {
    const SemialgebraicSet& set;
    std::size_t region_index;
    double r_min, r_max, h;
    double proj_tol;

    std::vector<Vec> collect() const {
        const Region& region = set.regions().at(region_index);
        const std::size_t dim = set.ambient_dim();
        const double delta = 0.5 * h;
        const double slack = 2.0 * delta * std::sqrt(static_cast<double>(dim));
        const auto equalities = region_equalities(region);
        const auto inequalities = region_inequalities(region);
        const double tol_sample = 1e-7 * (1.0 + r_max);

        std::vector<long long> k_lo(dim), k_hi(dim);
        {
            std::vector<double> lo(dim, -r_max), hi(dim, r_max);
            for (const auto& cond : region) {
                auto bound = axis_aligned_bound(cond, slack);
                if (!bound) continue;
                lo[bound->dim] = std::max(lo[bound->dim], bound->lo);
                hi[bound->dim] = std::min(hi[bound->dim], bound->hi);
            }
            for (std::size_t d = 0; d < dim; ++d) {
                k_lo[d] = static_cast<long long>(std::ceil(lo[d] / delta - 1e-9));
                k_hi[d] = static_cast<long long>(std::floor(hi[d] / delta + 1e-9));
                if (k_lo[d] > k_hi[d]) return {};
            }
        }

        std::vector<Vec> accepted;
        auto consider = [&](const Vec& p) {
            double n = norm2(p);
            if (n < r_min * (1.0 - 1e-12) || n > r_max * (1.0 + 1e-12)) return;
            if (!set.region_passes(region_index, p, tol_sample)) return;
            accepted.push_back(p);
        };

        auto handle_candidate = [&](const Vec& g) {
            Vec p = g;
            if (!equalities.empty()) {
                auto proj = project_to_variety(g, equalities, proj_tol);
                if (!proj.ok()) return;
                p = proj.point;
            }
            consider(p);
            // Corners dominate the extremal pairs, so also land exactly on
            // each nearby inequality boundary.
            for (const auto& q : inequalities) {
                double margin = std::abs(q.eval(p));
                double grad = norm2(q.gradient(p));
                if (margin > 3.0 * h * (grad + 1.0)) continue;
                std::vector<Polynomial> with_boundary = equalities;
                with_boundary.push_back(q);
                auto proj = project_to_variety(p, with_boundary, proj_tol);
                if (proj.ok()) consider(proj.point);
            }
        };

        // Odometer over the clipped grid k*delta with cheap first-order
        // rejection before any projection work.
        std::vector<long long> k = k_lo;
        Vec g(dim);
        while (true) {
            for (std::size_t d = 0; d < dim; ++d) g[d] = static_cast<double>(k[d]) * delta;
            double n = norm2(g);
            if (n >= r_min - slack && n <= r_max + slack) {
                bool plausible = true;
                for (const auto& p : equalities) {
                    double e = std::abs(p.eval(g));
                    if (e <= 1e-14 * p.term_scale(g)) continue;
                    double grad = norm2(p.gradient(g));
                    if (e > slack * std::max(grad, 1e-12)) {
                        plausible = false;
                        break;
                    }
                }
                if (plausible) handle_candidate(g);
            }
            std::size_t d = 0;
            while (d < dim) {
                if (++k[d] <= k_hi[d]) break;
                k[d] = k_lo[d];
                ++d;
            }
            if (d == dim) break;
        }
        return accepted;
    }
};

}  // namespace detail

// Grid-seeded sampling of one region inside a Euclidean annulus. Deterministic
// for fixed inputs; `seed` is accepted for interface stability but the grid
// pipeline does not consume randomness.
inline SampleCloud sample_region(const SemialgebraicSet& set, std::size_t region_index,
                                 std::pair<double, double> annulus, double h, std::uint64_t seed = 0) {
    (void)seed;
    auto [r_min, r_max] = annulus;
    if (!(r_min > 0) || !(r_max > r_min))
        throw Error(ErrorKind::input, "sample_region: need 0 < r_min < r_max");
    if (!(h > 0) || !(h < r_max - r_min))
        throw Error(ErrorKind::input, "sample_region: need 0 < h < r_max - r_min");
    if (region_index >= set.regions().size())
        throw Error(ErrorKind::input, "sample_region: region index out of range");

    detail::RegionSampler sampler{set, region_index, r_min, r_max, h, 1e-11 * (1.0 + r_max)};
    std::vector<Vec> candidates = sampler.collect();
    auto kept = detail::thin_points(candidates, 0.5 * h, detail::set_band_predicate(set, 0.2 * h));

    SampleCloud cloud;
    cloud.spacing = h;
    cloud.r_min = r_min;
    cloud.r_max = r_max;
    const double tol_sample = cloud.tol();
    for (std::size_t idx : kept) {
        cloud.points.push_back(candidates[idx]);
        cloud.region_tag.push_back(static_cast<int>(region_index));
        std::uint32_t mask = 0;
        for (std::size_t r = 0; r < set.regions().size(); ++r)
            if (set.region_passes(r, candidates[idx], tol_sample)) mask |= (1u << r);
        cloud.pass_mask.push_back(mask);
    }
    if (cloud.points.empty())
        throw Error(ErrorKind::numeric, "sample_region: region misses the annulus at this resolution");
    return cloud;
}

// Union cloud over all regions with one global thinning pass.
inline SampleCloud sample_set(const SemialgebraicSet& set, std::pair<double, double> annulus, double h,
                              std::uint64_t seed = 0) {
    if (set.regions().size() > 32)
        throw Error(ErrorKind::input, "sample_set: at most 32 regions supported");
    std::vector<Vec> candidates;
    std::vector<int> tags;
    for (std::size_t r = 0; r < set.regions().size(); ++r) {
        detail::RegionSampler sampler{set, r, annulus.first, annulus.second, h,
                                      1e-11 * (1.0 + annulus.second)};
        for (auto& p : sampler.collect()) {
            candidates.push_back(std::move(p));
            tags.push_back(static_cast<int>(r));
        }
    }
    (void)seed;
    auto kept = detail::thin_points(candidates, 0.5 * h, detail::set_band_predicate(set, 0.2 * h));

    SampleCloud cloud;
    cloud.spacing = h;
    cloud.r_min = annulus.first;
    cloud.r_max = annulus.second;
    const double tol_sample = cloud.tol();
    for (std::size_t idx : kept) {
        cloud.points.push_back(candidates[idx]);
        cloud.region_tag.push_back(tags[idx]);
        std::uint32_t mask = 0;
        for (std::size_t r = 0; r < set.regions().size(); ++r)
            if (set.region_passes(r, candidates[idx], tol_sample)) mask |= (1u << r);
        cloud.pass_mask.push_back(mask);
    }
    if (cloud.points.empty())
        throw Error(ErrorKind::numeric, "sample_set: set misses the annulus at this resolution");
    return cloud;
}

// Proximity graph: vertices within connect_factor*h are joined when they share
// a satisfied region and the segment midpoint stays within 0.2*h of it. The
// midpoint test is what keeps chords from crossing narrow gaps. An optional
// extra midpoint predicate lets callers restrict edges further (link slices
// add a level-band test there).
inline MeshGraph build_graph(const SampleCloud& cloud, double connect_factor,
                             const SemialgebraicSet& set,
                             const std::function<bool(const Vec&)>& midpoint_filter = nullptr) {
    if (!(connect_factor >= 2.0))
        throw Error(ErrorKind::input, "build_graph: connect_factor must be >= 2");
    MeshGraph graph;
    graph.cloud = cloud;
    const double radius = connect_factor * cloud.spacing;
    const double band = 0.2 * cloud.spacing;

    detail::CellIndex cells(radius);
    for (std::size_t i = 0; i < cloud.points.size(); ++i) cells.insert(i, cloud.points[i]);

    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const Vec& a = cloud.points[i];
        cells.for_neighbors(a, [&](std::size_t j) {
            if (j <= i) return;
            const Vec& b = cloud.points[j];
            double w = dist2(a, b);
            if (w > radius || w < 1e-15) return;
            std::uint32_t common = cloud.pass_mask[i] & cloud.pass_mask[j];
            if (common == 0) return;
            Vec m = midpoint(a, b);
            if (midpoint_filter && !midpoint_filter(m)) return;
            bool admitted = false;
            for (std::size_t r = 0; r < set.regions().size() && !admitted; ++r)
                if ((common >> r) & 1u)
                    admitted = set.region_within_band(r, m, band);
            if (admitted)
                graph.edges.push_back({static_cast<int>(i), static_cast<int>(j), w});
        });
    }
    std::sort(graph.edges.begin(), graph.edges.end(), [](const Edge& x, const Edge& y) {
        return x.i != y.i ? x.i < y.i : x.j < y.j;
    });
    graph.rebuild_adjacency();
    return graph;
}

// Adds an explicit origin vertex with straight-chord weights ||p||. Germ-level
// inner paths may legitimately pass through the origin; the chord weight
// overestimates the true inner distance by at most the local non-convexity.
inline MeshGraph attach_apex(const MeshGraph& graph, double apex_radius) {
    if (graph.apex_index)
        throw Error(ErrorKind::input, "attach_apex: graph already has an apex");
    MeshGraph out = graph;
    const std::size_t dim = out.cloud.points.empty() ? 0 : out.cloud.points.front().size();
    int apex = static_cast<int>(out.cloud.points.size());
    std::size_t attached = 0;
    for (std::size_t i = 0; i < graph.cloud.points.size(); ++i) {
        double n = norm2(graph.cloud.points[i]);
        if (n <= apex_radius && n > 0) {
            out.edges.push_back({static_cast<int>(i), apex, n});
            ++attached;
        }
    }
    if (attached == 0)
        throw Error(ErrorKind::numeric, "attach_apex: no points within apex radius; apex would be isolated");
    out.cloud.points.push_back(Vec(dim, 0.0));
    out.cloud.region_tag.push_back(-1);
    out.cloud.pass_mask.push_back(0);
    out.apex_index = apex;
    out.rebuild_adjacency();
    return out;
}

// Largest nearest-neighbor gap; empirical proxy for the covering radius.
inline double max_nearest_neighbor_distance(const SampleCloud& cloud) {
    double worst = 0.0;
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        double best = kInf;
        for (std::size_t j = 0; j < cloud.points.size(); ++j) {
            if (i == j) continue;
            best = std::min(best, dist2(cloud.points[i], cloud.points[j]));
        }
        if (best < kInf) worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace lnelab

#endif  // LNELAB_SAMPLER_HPP
