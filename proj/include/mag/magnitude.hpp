#pragma once

// Magnitude of finite metric spaces through the exponential similarity kernel.
//
// For a space (X, d) at scale R the similarity matrix is Z[i][j] =
// exp(-R * d(i,j)). A weighting w solves Z w = 1 (all-ones right-hand side)
// and the magnitude is the sum of the weights. Solves use a plain Cholesky
// factorization of Z: the kernel is never regularized or jittered, because
// perturbing Z changes the quantity being computed. Ill-conditioning is
// reported and, past the refusal threshold, rejected.

#include "mag/metric_space.hpp"

#include <Eigen/Core>

#include <vector>

namespace mag {

struct WeightVector {
    Eigen::VectorXd w;
    double residual_max = 0.0;       // max_i |(Z w)_i - 1|
    double condition_estimate = 0.0; // lower bound from the Cholesky diagonal
};

struct SolveOptions {
    double condition_refusal = 1e14;
    double residual_tolerance = 1e-9;
    int max_refinement_steps = 3;
};

/// Z[i][j] = exp(-R * dist[i][j]); unit diagonal, entries in (0, 1].
Eigen::MatrixXd similarity_matrix(const FiniteMetricSpace& space, double R);

/// Solve Z w = 1. Throws NotPositiveDefinite when the factorization fails,
/// when the condition estimate exceeds opts.condition_refusal, or when
/// iterative refinement cannot reach opts.residual_tolerance.
WeightVector weighting(const FiniteMetricSpace& space, double R,
                       const SolveOptions& opts = {});

/// Sum of the weight vector.
double magnitude(const FiniteMetricSpace& space, double R,
                 const SolveOptions& opts = {});

/// Batch evaluation over a strictly increasing grid. Per-point solver
/// failures are recorded in the curve, not thrown.
MagnitudeCurve magnitude_curve(const FiniteMetricSpace& space,
                               const std::vector<double>& R_grid,
                               const SolveOptions& opts = {});

namespace detail {

/// Core solve on a raw distance matrix block; used by the samplers to avoid
/// copying nested point-set prefixes.
WeightVector weighting_from_dist(const Eigen::Ref<const Eigen::MatrixXd>& dist,
                                 double R, const SolveOptions& opts);

} // namespace detail
} // namespace mag
