#ifndef LNELAB_LINK_HPP
#define LNELAB_LINK_HPP

#include <vector>

#include "lnelab/metric.hpp"
#include "lnelab/radius.hpp"
#include "lnelab/sampler.hpp"

namespace lnelab {

// One r-link of the germ: the sampled slice rho^-1(r) intersected with the
// set, its proximity graph, and the connected-component partition.
struct LinkSlice {
    double r = 0.0;
    double band = 0.0;  // |rho(x) - r| <= band for every point
    RadiusFunction rho = RadiusFunction::euclidean();
    SampleCloud cloud;
    MeshGraph graph;
    std::vector<std::vector<int>> components;  // ordered by smallest vertex index
    std::size_t slide_attempts = 0;
    std::size_t slide_failures = 0;
    bool low_confidence = false;
};

namespace detail {

inline std::vector<std::vector<int>> connected_components(const MeshGraph& graph) {
    const std::size_t n = graph.vertex_count();
    std::vector<int> comp(n, -1);
    std::vector<std::vector<int>> out;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        int id = static_cast<int>(out.size());
        std::vector<int> members;
        std::vector<std::size_t> stack{s};
        comp[s] = id;
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            members.push_back(static_cast<int>(u));
            for (const auto& [v, w] : graph.adjacency[u])
                if (comp[static_cast<std::size_t>(v)] < 0) {
                    comp[static_cast<std::size_t>(v)] = id;
                    stack.push_back(static_cast<std::size_t>(v));
                }
        }
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    return out;
}

inline MeshGraph induced_subgraph(const MeshGraph& graph, const std::vector<int>& vertices) {
    MeshGraph sub;
    sub.cloud.spacing = graph.cloud.spacing;
    sub.cloud.r_min = graph.cloud.r_min;
    sub.cloud.r_max = graph.cloud.r_max;
    std::vector<int> remap(graph.vertex_count(), -1);
    for (std::size_t k = 0; k < vertices.size(); ++k) {
        int v = vertices[k];
        remap[static_cast<std::size_t>(v)] = static_cast<int>(k);
        sub.cloud.points.push_back(graph.cloud.points[static_cast<std::size_t>(v)]);
        sub.cloud.region_tag.push_back(graph.cloud.region_tag[static_cast<std::size_t>(v)]);
        sub.cloud.pass_mask.push_back(graph.cloud.pass_mask[static_cast<std::size_t>(v)]);
    }
    for (const auto& e : graph.edges) {
        int a = remap[static_cast<std::size_t>(e.i)];
        int b = remap[static_cast<std::size_t>(e.j)];
        if (a >= 0 && b >= 0) sub.edges.push_back({a, b, e.weight});
    }
    sub.rebuild_adjacency();
    return sub;
}

// Composite rho: sample the set in a wide annulus, keep a thin rho-band, and
// slide each point to the exact level along its radial ray. A fan of extra
// radial seeds keeps resolution where the level curve runs nearly parallel to
// the rays (2-D only; higher dimensions rely on the grid band).
inline LinkSlice extract_link_composite(const SemialgebraicSet& set, const RadiusFunction& rho,
                                        double r, double h_rel, std::uint64_t seed) {
    const std::size_t dim = set.ambient_dim();
    const double h = r * h_rel;
    LinkSlice slice;
    slice.r = r;
    slice.band = 0.5 * h;
    slice.rho = rho;

    const double r_lo = dim <= 2 ? 0.2 * r : 0.3 * r;
    const double r_hi = dim <= 2 ? 6.0 * r : 2.5 * r;
    const double tol_sample = 1e-7 * (1.0 + r_hi);
    const double seed_band = std::max(0.15 * r, 4.0 * h);

    std::vector<Vec> candidates;
    std::vector<int> tags;

    enum class Settle { ok, root_failure, off_set };

    // Alternate slide and projection until the point sits on both the level
    // and the region's equality locus. Rays that exit the set are a
    // legitimate geometric drop, not a root-finding failure.
    auto settle = [&](Vec y, std::size_t region_hint) -> Settle {
        auto eqs = region_equalities(set.regions()[region_hint]);
        for (int round = 0; round < 3; ++round) {
            auto slid = radial_slide_to_level(rho, y, r);
            if (!slid) return Settle::root_failure;
            y = *slid;
            if (eqs.empty()) break;
            auto proj = project_to_variety(y, eqs, 1e-11 * (1.0 + r_hi));
            if (!proj.ok()) return Settle::root_failure;
            y = proj.point;
        }
        if (std::abs(rho.eval(y) - r) > slice.band) return Settle::root_failure;
        for (std::size_t k = 0; k < set.regions().size(); ++k) {
            if (set.region_passes(k, y, tol_sample)) {
                candidates.push_back(y);
                tags.push_back(static_cast<int>(k));
                return Settle::ok;
            }
        }
        return Settle::off_set;
    };

    for (std::size_t k = 0; k < set.regions().size(); ++k) {
        RegionSampler sampler{set, k, r_lo, r_hi, h, 1e-11 * (1.0 + r_hi)};
        for (auto& p : sampler.collect()) {
            if (std::abs(rho.eval(p) - r) > seed_band) continue;
            ++slice.slide_attempts;
            if (settle(std::move(p), k) == Settle::root_failure) ++slice.slide_failures;
        }
    }

    // Speculative probes: most fan rays miss the set entirely, so they do not
    // count toward the band-point failure rate.
    if (dim == 2) {
        const int fan = static_cast<int>(std::ceil(2.0 * M_PI * 16.0 / h_rel));
        for (int j = 0; j < fan; ++j) {
            double theta = 2.0 * M_PI * static_cast<double>(j) / fan;
            Vec p{r * std::cos(theta), r * std::sin(theta)};
            for (std::size_t k = 0; k < set.regions().size(); ++k)
                if (settle(p, k) == Settle::ok) break;
        }
    }
    (void)seed;

    if (candidates.empty())
        throw Error(ErrorKind::numeric, "extract_link: empty link at this resolution");
    if (slice.slide_attempts > 0 &&
        slice.slide_failures * 20 > slice.slide_attempts)  // > 5%
        slice.low_confidence = true;

    // Distance to the level measured by sliding the probe point radially back
    // onto it. A first-order |rho - r| / |grad rho| proxy is unusable here:
    // the gradient of a non-Lipschitz rho blows up near cusp tips and would
    // wave through chords that bridge distinct level branches.
    auto level_distance = [&](const Vec& m) {
        auto slid = radial_slide_to_level(rho, m, r);
        if (!slid) return kInf;
        return dist2(m, *slid);
    };

    auto kept = thin_points(candidates, 0.5 * h,
                            [&](const Vec& m) { return level_distance(m) <= 0.2 * h; });
    slice.cloud.spacing = h;
    slice.cloud.r_min = r_lo;
    slice.cloud.r_max = r_hi;
    for (std::size_t idx : kept) {
        slice.cloud.points.push_back(candidates[idx]);
        slice.cloud.region_tag.push_back(tags[idx]);
        std::uint32_t mask = 0;
        for (std::size_t k = 0; k < set.regions().size(); ++k)
            if (set.region_passes(k, candidates[idx], tol_sample)) mask |= (1u << k);
        slice.cloud.pass_mask.push_back(mask);
    }

    // Edge midpoints must stay near the level too, otherwise chords would
    // tunnel through the set interior between distinct level branches. The
    // 0.5h allowance matches the slice's own level band.
    auto level_filter = [&](const Vec& m) { return level_distance(m) <= 0.5 * h; };
    slice.graph = build_graph(slice.cloud, 3.0, set, level_filter);
    slice.components = connected_components(slice.graph);
    return slice;
}

}  // namespace detail

inline std::vector<std::vector<int>> components(const LinkSlice& slice) {
    return detail::connected_components(slice.graph);
}

// Minimal outer distance between distinct components, divided by r.
// +inf when the slice has a single component.
inline double separation_ratio(const LinkSlice& slice) {
    if (slice.components.size() < 2) return kInf;
    double best = kInf;
    for (std::size_t a = 0; a + 1 < slice.components.size(); ++a)
        for (std::size_t b = a + 1; b < slice.components.size(); ++b)
            for (int i : slice.components[a])
                for (int j : slice.components[b])
                    best = std::min(best, dist2(slice.cloud.points[static_cast<std::size_t>(i)],
                                                slice.cloud.points[static_cast<std::size_t>(j)]));
    return best / slice.r;
}

// Per-component LNE estimates at eta = eta_rel * r. Components with fewer
// than two vertices are reported with constant 1.
inline std::vector<LneEstimate> link_lne_constant(const LinkSlice& slice, double eta_rel,
                                                  std::size_t landmarks, unsigned threads = 0) {
    std::vector<LneEstimate> out;
    const double eta = eta_rel * slice.r;
    for (const auto& comp : slice.components) {
        if (comp.size() < 2) {
            LneEstimate trivial;
            trivial.constant = 1.0;
            trivial.eta = eta;
            out.push_back(trivial);
            continue;
        }
        MeshGraph sub = detail::induced_subgraph(slice.graph, comp);
        out.push_back(lne_constant(sub, eta, landmarks, 0, threads));
    }
    return out;
}

// Extracts the r-link of the set with respect to rho at mesh scale h = r*h_rel.
// Euclidean levels append ||x||^2 = r^2 to each region, maxnorm levels are
// assembled from the 2n affine faces, coordinate levels append x_i = r; all
// three reuse the grid sampler. Composite levels go through radial sliding.
inline LinkSlice extract_link(const SemialgebraicSet& set, const RadiusFunction& rho, double r,
                              double h_rel, std::uint64_t seed = 0) {
    if (!(r > 0)) throw Error(ErrorKind::input, "extract_link: r must be positive");
    if (!(h_rel > 0) || h_rel > 0.2)
        throw Error(ErrorKind::input, "extract_link: h_rel must lie in (0, 0.2]");
    const std::size_t dim = set.ambient_dim();
    const double h = r * h_rel;
    const double root_n = std::sqrt(static_cast<double>(dim));

    if (rho.kind() == RadiusKind::composite)
        return detail::extract_link_composite(set, rho, r, h_rel, seed);

    LinkSlice slice;
    slice.r = r;
    slice.band = 0.5 * h;
    slice.rho = rho;

    std::vector<Region> regions;
    std::pair<double, double> annulus{0.0, 0.0};
    const Rational rq = rational_from_double(r);

    switch (rho.kind()) {
        case RadiusKind::euclidean: {
            Polynomial level(dim);
            for (std::size_t i = 0; i < dim; ++i)
                level = level + Polynomial::variable(dim, i) * Polynomial::variable(dim, i);
            // r^2 squared in double first: squaring the exact rational would
            // overflow its 64-bit numerator for dyadic radii
            level = level - Polynomial::constant(dim, rational_from_double(r * r));
            for (const auto& region : set.regions()) {
                Region aug = region;
                aug.push_back(SignCondition{level, Relation::eq0});
                regions.push_back(std::move(aug));
            }
            annulus = {0.9 * r, 1.1 * r};
            break;
        }
        case RadiusKind::coordinate: {
            Polynomial level = Polynomial::variable(dim, rho.coordinate_index()) -
                               Polynomial::constant(dim, rq);
            for (const auto& region : set.regions()) {
                Region aug = region;
                aug.push_back(SignCondition{level, Relation::eq0});
                regions.push_back(std::move(aug));
            }
            // Assumes the set stays within ||x|| <= 2*sqrt(n)*rho near 0; the
            // recorded radius witness flags sets that escape this box.
            annulus = {0.99 * r, 2.0 * root_n * r};
            break;
        }
        case RadiusKind::maxnorm: {
            for (const auto& region : set.regions()) {
                for (std::size_t i = 0; i < dim; ++i) {
                    for (int sign = -1; sign <= 1; sign += 2) {
                        Region aug = region;
                        Polynomial face = Polynomial::variable(dim, i) -
                                          Polynomial::constant(dim, sign > 0 ? rq : -rq);
                        aug.push_back(SignCondition{face, Relation::eq0});
                        for (std::size_t j = 0; j < dim; ++j) {
                            if (j == i) continue;
                            aug.push_back(SignCondition{
                                Polynomial::constant(dim, rq) - Polynomial::variable(dim, j),
                                Relation::ge0});
                            aug.push_back(SignCondition{
                                Polynomial::variable(dim, j) + Polynomial::constant(dim, rq),
                                Relation::ge0});
                        }
                        regions.push_back(std::move(aug));
                    }
                }
            }
            annulus = {0.9 * r, 1.05 * root_n * r};
            break;
        }
        case RadiusKind::composite: break;  // handled above
    }

    SemialgebraicSet level_set(dim, set.variables(), std::move(regions));
    slice.cloud = sample_set(level_set, annulus, h, seed);
    slice.graph = build_graph(slice.cloud, 3.0, level_set);
    slice.components = detail::connected_components(slice.graph);
    return slice;
}

}  // namespace lnelab

#endif  // LNELAB_LINK_HPP
