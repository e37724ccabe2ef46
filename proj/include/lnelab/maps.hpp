#ifndef LNELAB_MAPS_HPP
#define LNELAB_MAPS_HPP

#include <array>
#include <random>

#include <Eigen/Dense>

#include "lnelab/projection.hpp"
#include "lnelab/radius.hpp"
#include "lnelab/sampler.hpp"

namespace lnelab {

// x -> (rho(x)/||x||_inf) * x, fixing every ray through the origin setwise and
// carrying the rho-level r onto the max-norm level r: ||phi(x)||_inf = rho(x)
// holds as an exact identity.
inline Vec transport_phi(const RadiusFunction& rho, const Vec& x) {
    double m = norm_inf(x);
    if (m == 0.0) return Vec(x.size(), 0.0);
    double factor = rho.eval(x) / m;
    return scaled(factor, x);
}

struct DistortionReport {
    double min_ratio = kInf;
    double max_ratio = 0.0;
    std::size_t pairs_used = 0;
    std::array<std::size_t, 20> histogram{};  // of log-ratios over [log min, log max]
    double log_lo = 0.0;
    double log_hi = 0.0;
};

// Empirical bi-Lipschitz distortion of the transport map over sampled point
// pairs with separation at least the cloud spacing.
inline DistortionReport transport_distortion(const SampleCloud& cloud, const RadiusFunction& rho,
                                             std::size_t pairs, std::uint64_t seed) {
    if (cloud.points.size() < 2)
        throw Error(ErrorKind::input, "transport_distortion: need at least 2 points");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, cloud.points.size() - 1);

    std::vector<double> ratios;
    ratios.reserve(pairs);
    std::size_t produced = 0;
    std::size_t budget = pairs * 20 + 100;  // rejected close pairs do not count
    for (std::size_t t = 0; t < budget && produced < pairs; ++t) {
        std::size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        double base = dist2(cloud.points[i], cloud.points[j]);
        if (base < cloud.spacing) continue;
        double mapped = dist2(transport_phi(rho, cloud.points[i]), transport_phi(rho, cloud.points[j]));
        ratios.push_back(mapped / base);
        ++produced;
    }
    if (ratios.empty())
        throw Error(ErrorKind::numeric, "transport_distortion: no admissible pairs found");

    DistortionReport report;
    report.pairs_used = ratios.size();
    for (double v : ratios) {
        report.min_ratio = std::min(report.min_ratio, v);
        report.max_ratio = std::max(report.max_ratio, v);
    }
    report.log_lo = std::log(report.min_ratio);
    report.log_hi = std::log(report.max_ratio);
    double width = report.log_hi - report.log_lo;
    for (double v : ratios) {
        std::size_t bin = 0;
        if (width > 0) {
            bin = static_cast<std::size_t>(std::floor((std::log(v) - report.log_lo) / width * 20.0));
            bin = std::min<std::size_t>(bin, 19);
        }
        ++report.histogram[bin];
    }
    return report;
}

// Discrete rho-descending path on the set: values, cumulative length, and the
// measured length/level-drop constant.
struct FlowPath {
    std::vector<Vec> vertices;
    Vec rho_values;
    Vec cumulative_length;
    Vec expected_levels;
    double arc_length = 0.0;
    double constant_C = 0.0;
    double level_band = 0.0;  // audits compare |rho - expected level| to 2*band
};

namespace detail {

// Orthogonal projection of -grad onto the null space of the active constraint
// Jacobian, with active inequalities forced non-decreasing.
inline Vec projected_descent_direction(const Vec& grad_rho, const std::vector<Vec>& equality_grads,
                                       const std::vector<Vec>& active_ineq_grads) {
    const std::size_t dim = grad_rho.size();
    std::vector<Vec> rows = equality_grads;
    Vec d(dim);

    for (std::size_t pass = 0; pass <= active_ineq_grads.size(); ++pass) {
        Eigen::VectorXd g(static_cast<Eigen::Index>(dim));
        for (std::size_t i = 0; i < dim; ++i) g(static_cast<Eigen::Index>(i)) = -grad_rho[i];
        Eigen::VectorXd proj = g;
        if (!rows.empty()) {
            Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
            for (std::size_t i = 0; i < rows.size(); ++i)
                for (std::size_t k = 0; k < dim; ++k)
                    a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
            Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
            proj = g - a.transpose() * cod.pseudoInverse().transpose() * g;
        }
        for (std::size_t i = 0; i < dim; ++i) d[i] = proj(static_cast<Eigen::Index>(i));

        // Keep active inequalities non-decreasing; add the worst violator to
        // the working set and re-project.
        const Vec* violator = nullptr;
        double worst = -1e-12;
        for (const auto& gq : active_ineq_grads) {
            bool already = false;
            for (const auto& row : rows)
                if (row == gq) already = true;
            if (already) continue;
            double along = dot(gq, d);
            if (along < worst) {
                worst = along;
                violator = &gq;
            }
        }
        if (!violator) break;
        rows.push_back(*violator);
    }
    return d;
}

}  // namespace detail

// Projected steepest descent of rho on the set, one exact level per step.
// Verifies the flow contract numerically: each step lands on the prescribed
// level and total length stays proportional to the level drop.
inline FlowPath descend_flow(const SemialgebraicSet& set, const RadiusFunction& rho, const Vec& start,
                             double target_level, double step_rel) {
    check_dim(start, set.ambient_dim(), "descend_flow");
    if (!(step_rel > 0) || step_rel > 0.1)
        throw Error(ErrorKind::input, "descend_flow: step_rel must lie in (0, 0.1]");
    const double rho_start = rho.eval(start);
    if (!(target_level > 0) || !(rho_start > target_level))
        throw Error(ErrorKind::input, "descend_flow: need rho(start) > target_level > 0");

    const double tol_sample = 1e-7 * (1.0 + norm2(start));
    auto mem = set.membership(start, tol_sample);
    if (mem.label == Membership::outside)
        throw Error(ErrorKind::input, "descend_flow: start point is not on the set");
    const Region& region = set.regions()[static_cast<std::size_t>(mem.region)];
    const auto equalities = detail::region_equalities(region);
    const auto inequalities = detail::region_inequalities(region);
    const double proj_tol = 1e-11 * (1.0 + norm2(start));

    const double delta = step_rel * rho_start;
    FlowPath path;
    path.level_band = 0.5 * delta;

    auto record = [&](const Vec& x, double level) {
        double value = rho.eval(x);
        if (!path.rho_values.empty() && value >= path.rho_values.back())
            throw Error(ErrorKind::numeric, "descend_flow: rho failed to decrease");
        if (!path.vertices.empty())
            path.arc_length += dist2(path.vertices.back(), x);
        path.vertices.push_back(x);
        path.rho_values.push_back(value);
        path.cumulative_length.push_back(path.arc_length);
        path.expected_levels.push_back(level);
    };
    record(start, rho_start);

    // Land exactly on the level: alternate radial slide with projection back
    // onto the equality locus.
    auto settle_on_level = [&](Vec x, double level) -> std::optional<Vec> {
        for (int round = 0; round < 8; ++round) {
            auto slid = radial_slide_to_level(rho, x, level);
            if (!slid) return std::nullopt;
            x = *slid;
            if (!equalities.empty()) {
                auto proj = project_to_variety(x, equalities, proj_tol);
                if (!proj.ok()) return std::nullopt;
                x = proj.point;
            }
            if (std::abs(rho.eval(x) - level) <= 1e-9 * level) return x;
        }
        return std::nullopt;
    };

    Vec x = start;
    const int max_steps = static_cast<int>(std::ceil((rho_start - target_level) / delta)) + 32;
    for (int step = 0; step < max_steps; ++step) {
        double current = rho.eval(x);
        if (std::abs(current - target_level) <= 1e-6 * target_level) break;
        double next_level = std::max(target_level, current - delta);

        Vec grad = rho.gradient(x);
        std::vector<Vec> eq_grads;
        for (const auto& p : equalities) eq_grads.push_back(p.gradient(x));
        std::vector<Vec> active;
        for (const auto& q : inequalities) {
            double residual = std::abs(q.eval(x)) / q.term_scale(x);
            if (residual <= 2.0 * tol_sample) active.push_back(q.gradient(x));
        }
        Vec d = detail::projected_descent_direction(grad, eq_grads, active);
        double dn = norm2(d);
        if (dn <= 1e-8 * std::max(norm2(grad), 1.0)) {
            std::string where;
            for (double c : x) where += (where.empty() ? "(" : ", ") + format_double(c);
            throw Error(ErrorKind::numeric,
                        "descend_flow: vanishing projected gradient at " + where +
                            "); stationary point of rho on the stratum");
        }
        Vec dhat = scaled(1.0 / dn, d);
        double slope = dot(grad, dhat);
        if (!(slope < 0))
            throw Error(ErrorKind::numeric, "descend_flow: direction fails to descend");
        double alpha = (current - next_level) / (-slope);
        Vec moved = axpy(alpha, dhat, x);

        if (!equalities.empty()) {
            auto proj = project_to_variety(moved, equalities, proj_tol);
            if (!proj.ok())
                throw Error(ErrorKind::numeric, "descend_flow: projection back to the set failed");
            moved = proj.point;
        }
        auto settled = settle_on_level(std::move(moved), next_level);
        if (!settled)
            throw Error(ErrorKind::numeric, "descend_flow: could not land on the next level");
        x = *settled;

        // The step may have slid outside an inequality; pull back to its
        // boundary when that happens.
        if (set.membership(x, 10.0 * tol_sample).label == Membership::outside) {
            bool recovered = false;
            for (const auto& q : inequalities) {
                if (q.eval(x) >= 0) continue;
                auto with_boundary = equalities;
                with_boundary.push_back(q);
                auto proj = project_to_variety(x, with_boundary, proj_tol);
                if (!proj.ok()) continue;
                auto again = settle_on_level(proj.point, next_level);
                if (again && set.membership(*again, 10.0 * tol_sample).label != Membership::outside) {
                    x = *again;
                    recovered = true;
                    break;
                }
            }
            if (!recovered)
                throw Error(ErrorKind::numeric, "descend_flow: flow left the set");
        }
        record(x, next_level);
    }

    if (std::abs(path.rho_values.back() - target_level) > 1e-6 * target_level)
        throw Error(ErrorKind::numeric, "descend_flow: did not reach the target level");
    path.constant_C = path.arc_length / (rho_start - target_level);
    return path;
}

}  // namespace lnelab

#endif  // LNELAB_MAPS_HPP
