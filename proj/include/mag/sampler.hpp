#pragma once

// Magnitude of compact domains approximated from below by finite subsets.
//
// Estimates refine through nested point sets (each level contains the
// previous), so the reported sequence is nondecreasing for positive definite
// spaces and every level is a certified lower bound of the supremum over
// finite subsets. No extrapolation enters the headline value; an Aitken
// extrapolation is recorded as advisory metadata only.

#include "mag/domain.hpp"
#include "mag/magnitude.hpp"
#include "mag/metric_space.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace mag {

enum class SampleStrategy { Grid, FarthestPoint };

SampleStrategy strategy_from_name(const std::string& name);
std::string strategy_name(SampleStrategy s);

/// Deterministic sample of N points inside the closed domain.
///  - Grid on intervals: uniform including endpoints.
///  - Grid on 3D domains: the N lattice points nearest the centroid, taken
///    from the coarsest dyadic lattice holding at least N interior points.
///  - FarthestPoint: greedy max-min selection over a seeded candidate pool,
///    started at the pool point nearest the centroid; ties break toward the
///    lowest candidate index.
FiniteMetricSpace sample_domain(const DomainSpec& spec, int N, SampleStrategy strategy,
                                std::uint64_t seed);

/// The coordinates behind sample_domain, for membership checks and export.
std::vector<Eigen::Vector3d> sample_domain_points(const DomainSpec& spec, int N,
                                                  SampleStrategy strategy, std::uint64_t seed);

struct EstimateLevel {
    int n_points = 0;
    double value = 0.0;
    double condition_estimate = 0.0;
    double spacing = 0.0; // lattice spacing (grid) or covering-radius estimate (FPS)
};

struct EstimateReport {
    double R = 0.0;
    std::vector<EstimateLevel> estimates;
    bool converged = false;
    double final = 0.0;
    double delta_last = 0.0;
    double richardson = 0.0; // advisory Aitken extrapolation, never the headline
    std::string note;        // "", "budget exceeded", "spacing rule violated", ...

    nlohmann::json to_json() const;
};

struct EstimateOptions {
    double tol = 1e-3;
    int N_max = 4096;
    SampleStrategy strategy = SampleStrategy::FarthestPoint;
    std::uint64_t seed = 1;
    int N_start = 64;
    SolveOptions solve{};
};

/// Doubles the sample size until successive magnitudes differ by less than
/// tol (absolute) or the budget N_max is reached. Grid refinements must also
/// satisfy the sampling-density rule h*R <= 0.25 at the final level to count
/// as converged. Budget exhaustion is reported, not thrown; solver failures
/// propagate.
EstimateReport estimate_magnitude(const DomainSpec& spec, double R,
                                  const EstimateOptions& opts);

/// Magnitude of the solid interval [0, length]: 1 + length * R / 2.
double interval_magnitude_exact(double length, double R);

struct EstimateCurve {
    MagnitudeCurve curve; // final value per R
    std::vector<EstimateReport> reports;
};

/// Batch of estimate_magnitude over a strictly increasing R grid; per-R
/// failures are recorded in curve.failures.
EstimateCurve estimate_curve(const DomainSpec& spec, const std::vector<double>& R_grid,
                             const EstimateOptions& opts);

} // namespace mag
