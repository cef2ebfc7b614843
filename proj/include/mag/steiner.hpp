#pragma once

// Intrinsic volumes of convex bodies by Steiner-polynomial fitting: estimate
// vol(X + t*B) over a grid of offsets t by stratified Monte Carlo membership
// (distance-to-body test per sample, shared across all t) and fit the cubic
// sum_k w_{3-k} V_k t^{3-k} where w_j is the volume of the unit j-ball.

#include "mag/domain.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace mag {

struct SteinerResult {
    std::array<double, 4> V{}; // V0..V3
    double fit_residual_rel = 0.0;
    std::vector<double> t_grid;
    std::vector<double> volumes;    // Monte Carlo estimate per t
    std::vector<double> std_errors; // binomial standard error per t
    long samples_used = 0;
};

/// Requires a convex spec (ball or ellipsoid; NonConvexSpec otherwise) and at
/// least 4 distinct positive offsets. Deterministic for a fixed seed via
/// counter-based sampling, independent of thread count.
SteinerResult intrinsic_volumes(const DomainSpec& spec, const std::vector<double>& t_grid,
                                long N_mc, std::uint64_t seed);

/// Volume of the unit k-ball, k = 0..3: 1, 2, pi, 4*pi/3.
double unit_ball_volume(int k);

} // namespace mag
