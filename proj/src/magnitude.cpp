#include "mag/magnitude.hpp"

#include "mag/errors.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <sstream>

namespace mag {

Eigen::MatrixXd similarity_matrix(const FiniteMetricSpace& space, double R) {
    if (!(R > 0.0)) throw InvalidInput("scale R must be positive");
    return (-R * space.dist().array()).exp().matrix();
}

namespace detail {

WeightVector weighting_from_dist(const Eigen::Ref<const Eigen::MatrixXd>& dist,
                                 double R, const SolveOptions& opts) {
    if (!(R > 0.0)) throw InvalidInput("scale R must be positive");
    const Eigen::Index n = dist.rows();
    Eigen::MatrixXd Z = (-R * dist.array()).exp().matrix();

    Eigen::LLT<Eigen::MatrixXd> llt(Z);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite(
            "similarity matrix is not numerically positive definite (Cholesky failed)",
            std::numeric_limits<double>::infinity());

    // Cheap condition lower bound: Z has unit diagonal, so the spread of the
    // Cholesky pivots bounds the eigenvalue spread from below.
    const auto diagL = llt.matrixLLT().diagonal();
    const double dmax = diagL.maxCoeff();
    const double dmin = diagL.minCoeff();
    const double cond = (dmin > 0.0) ? (dmax / dmin) * (dmax / dmin)
                                     : std::numeric_limits<double>::infinity();
    if (cond > opts.condition_refusal) {
        std::ostringstream msg;
        msg << "condition estimate " << cond << " exceeds refusal threshold "
            << opts.condition_refusal;
        throw NotPositiveDefinite(msg.str(), cond);
    }

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd w = llt.solve(ones);
    double residual = (Z * w - ones).cwiseAbs().maxCoeff();
    for (int step = 0; step < opts.max_refinement_steps && residual > opts.residual_tolerance;
         ++step) {
        const Eigen::VectorXd r = Z * w - ones;
        w -= llt.solve(r);
        residual = (Z * w - ones).cwiseAbs().maxCoeff();
    }
    if (!(residual <= opts.residual_tolerance)) {
        std::ostringstream msg;
        msg << "weight residual " << residual << " above tolerance "
            << opts.residual_tolerance << " after refinement (condition estimate " << cond
            << ")";
        throw NotPositiveDefinite(msg.str(), cond);
    }
    return WeightVector{std::move(w), residual, cond};
}

} // namespace detail

WeightVector weighting(const FiniteMetricSpace& space, double R, const SolveOptions& opts) {
    return detail::weighting_from_dist(space.dist(), R, opts);
}

double magnitude(const FiniteMetricSpace& space, double R, const SolveOptions& opts) {
    return weighting(space, R, opts).w.sum();
}

MagnitudeCurve magnitude_curve(const FiniteMetricSpace& space,
                               const std::vector<double>& R_grid,
                               const SolveOptions& opts) {
    for (size_t i = 1; i < R_grid.size(); ++i)
        if (!(R_grid[i] > R_grid[i - 1]))
            throw InvalidInput("R grid must be strictly increasing");
    MagnitudeCurve curve;
    for (double R : R_grid) {
        try {
            const WeightVector wv = weighting(space, R, opts);
            curve.samples.push_back({R, wv.w.sum(), space.size(), wv.condition_estimate});
        } catch (const Error& e) {
            curve.failures.push_back({R, e.what()});
        }
    }
    return curve;
}

} // namespace mag
