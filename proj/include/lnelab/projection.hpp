#ifndef LNELAB_PROJECTION_HPP
#define LNELAB_PROJECTION_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "lnelab/polynomial.hpp"

namespace lnelab {

enum class ProjectionStatus { converged, max_iterations, rank_deficient, diverged };

struct ProjectionResult {
    ProjectionStatus status = ProjectionStatus::max_iterations;
    Vec point;
    int iterations = 0;
    double residual = 0.0;

    bool ok() const { return status == ProjectionStatus::converged; }
};

namespace detail {

inline Eigen::VectorXd residual_vector(const std::vector<Polynomial>& equalities, const Vec& x) {
    Eigen::VectorXd e(static_cast<Eigen::Index>(equalities.size()));
    for (std::size_t i = 0; i < equalities.size(); ++i) e(static_cast<Eigen::Index>(i)) = equalities[i].eval(x);
    return e;
}

inline bool within_tolerance(const std::vector<Polynomial>& equalities, const Vec& x, double tol) {
    for (const auto& p : equalities)
        if (std::abs(p.eval(x)) > tol * p.term_scale(x)) return false;
    return true;
}

}  // namespace detail

// Gauss-Newton projection onto the common zero locus of `equalities`, with a
// truncated-SVD least-squares step and simple backtracking. Failures are
// routine (seed points near singular loci get discarded by callers).
inline ProjectionResult project_to_variety(const Vec& start, const std::vector<Polynomial>& equalities,
                                           double tol, int max_iter = 40) {
    if (equalities.empty()) throw Error(ErrorKind::input, "project_to_variety: no equalities");
    if (!(tol > 0)) throw Error(ErrorKind::input, "project_to_variety: tol must be positive");
    const std::size_t dim = equalities.front().ambient_dim();
    check_dim(start, dim, "project_to_variety");
    const auto m = static_cast<Eigen::Index>(equalities.size());
    const auto n = static_cast<Eigen::Index>(dim);

    ProjectionResult result;
    result.point = start;

    if (detail::within_tolerance(equalities, start, tol)) {
        result.status = ProjectionStatus::converged;
        result.residual = detail::residual_vector(equalities, start).norm();
        return result;
    }

    const double initial_residual = detail::residual_vector(equalities, start).norm();

    // Smallest singular value at the seed bounds how far the solution may be;
    // 3x that first-order distance is the sanity radius.
    double travel_bound = kInf;
    {
        Eigen::MatrixXd j0(m, n);
        for (std::size_t i = 0; i < equalities.size(); ++i) {
            Vec g = equalities[i].gradient(start);
            for (std::size_t k = 0; k < dim; ++k) j0(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = g[k];
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(j0);
        double smin = svd.singularValues().minCoeff();
        if (smin > 1e-12) travel_bound = 3.0 * initial_residual / smin;
    }

    Vec x = start;
    double res_norm = initial_residual;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::MatrixXd jac(m, n);
        for (std::size_t i = 0; i < equalities.size(); ++i) {
            Vec g = equalities[i].gradient(x);
            for (std::size_t k = 0; k < dim; ++k) jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = g[k];
        }
        Eigen::VectorXd e = detail::residual_vector(equalities, x);

        Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
        double smax = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
        if (smax <= 1e-300) {
            result.status = ProjectionStatus::rank_deficient;
            result.point = x;
            result.iterations = it;
            result.residual = e.norm();
            return result;
        }
        svd.setThreshold(1e-12);
        Eigen::VectorXd step = svd.solve(-e);

        // Backtrack until the residual actually shrinks.
        double t = 1.0;
        Vec candidate(dim);
        double cand_norm = res_norm;
        for (int bt = 0; bt < 30; ++bt) {
            for (std::size_t k = 0; k < dim; ++k) candidate[k] = x[k] + t * step(static_cast<Eigen::Index>(k));
            cand_norm = detail::residual_vector(equalities, candidate).norm();
            if (cand_norm < res_norm) break;
            t *= 0.5;
        }
        if (!(cand_norm < res_norm)) {
            result.status = ProjectionStatus::max_iterations;
            result.point = x;
            result.iterations = it + 1;
            result.residual = res_norm;
            return result;
        }
        x = candidate;
        res_norm = cand_norm;
        result.iterations = it + 1;

        if (detail::within_tolerance(equalities, x, tol)) {
            if (dist2(x, start) > travel_bound) {
                result.status = ProjectionStatus::diverged;
                result.point = x;
                result.residual = res_norm;
                return result;
            }
            result.status = ProjectionStatus::converged;
            result.point = x;
            result.residual = res_norm;
            return result;
        }
    }
    result.status = ProjectionStatus::max_iterations;
    result.point = x;
    result.residual = res_norm;
    return result;
}

}  // namespace lnelab

#endif  // LNELAB_PROJECTION_HPP
