#include "mag/steiner.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace mag {

double unit_ball_volume(int k) {
    switch (k) {
        case 0: return 1.0;
        case 1: return 2.0;
        case 2: return M_PI;
        case 3: return 4.0 * M_PI / 3.0;
        default: {
            if (k < 0) throw InvalidInput("negative ball dimension");
            return std::pow(M_PI, k / 2.0) / std::tgamma(k / 2.0 + 1.0);
        }
    }
}

namespace {

// splitmix64; counter-based so samples are indexed, not streamed.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline double unit_double(std::uint64_t h) {
    return (h >> 11) * 0x1.0p-53;
}

} // namespace

SteinerResult intrinsic_volumes(const DomainSpec& spec, const std::vector<double>& t_grid,
                                long N_mc, std::uint64_t seed) {
    if (spec.kind == DomainKind::SolidTorus)
        throw NonConvexSpec("intrinsic volumes require a convex body, got solid_torus");
    if (spec.kind != DomainKind::Ball && spec.kind != DomainKind::Ellipsoid)
        throw InvalidInput("intrinsic_volumes supports ball and ellipsoid specs");
    std::vector<double> ts = t_grid;
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    if (ts.size() < 4) throw InvalidInput("need at least 4 distinct offsets t");
    if (ts.front() <= 0.0) throw InvalidInput("offsets t must be positive");
    if (N_mc < 1000) throw InvalidInput("Monte Carlo sample budget too small");

    const double t_max = ts.back();
    const Eigen::Vector3d half = bounding_halfwidths(spec, t_max);
    const double box_vol = 8.0 * half.prod();

    // One stratum per cell of a k^3 grid over the bounding box; one sample
    // per stratum, jittered by the counter hash.
    const long k = std::max<long>(4, static_cast<long>(std::cbrt(static_cast<double>(N_mc))));
    const long n_samples = k * k * k;
    const int nt = static_cast<int>(ts.size());
    std::vector<long> counts(nt, 0);
    long* cnt = counts.data();

#pragma omp parallel for reduction(+ : cnt[:nt]) schedule(static)
    for (long idx = 0; idx < n_samples; ++idx) {
        const long iz = idx % k;
        const long iy = (idx / k) % k;
        const long ix = idx / (k * k);
        const std::uint64_t base = mix64(seed ^ mix64(static_cast<std::uint64_t>(idx)));
        Eigen::Vector3d p;
        p.x() = (-1.0 + 2.0 * (ix + unit_double(base)) / k) * half.x();
        p.y() = (-1.0 + 2.0 * (iy + unit_double(mix64(base ^ 1))) / k) * half.y();
        p.z() = (-1.0 + 2.0 * (iz + unit_double(mix64(base ^ 2))) / k) * half.z();
        const double d = distance_to_body(spec, p);
        for (int j = 0; j < nt; ++j)
            if (d <= ts[j]) ++cnt[j];
    }

    SteinerResult res;
    res.t_grid = ts;
    res.samples_used = n_samples;
    res.volumes.resize(nt);
    res.std_errors.resize(nt);
    for (int j = 0; j < nt; ++j) {
        const double p = static_cast<double>(counts[j]) / n_samples;
        res.volumes[j] = box_vol * p;
        res.std_errors[j] = box_vol * std::sqrt(std::max(p * (1.0 - p), 0.0) / n_samples);
    }

    // Fit vol(t) = b0 + b1 t + b2 t^2 + b3 t^3 and read the intrinsic volumes
    // off the Steiner coefficients b_j = w_j V_{3-j}.
    Eigen::MatrixXd A(nt, 4);
    Eigen::VectorXd y(nt);
    for (int j = 0; j < nt; ++j) {
        A(j, 0) = 1.0;
        A(j, 1) = ts[j];
        A(j, 2) = ts[j] * ts[j];
        A(j, 3) = ts[j] * ts[j] * ts[j];
        y(j) = res.volumes[j];
    }
    const Eigen::VectorXd beta = A.colPivHouseholderQr().solve(y);
    res.V[3] = beta(0);
    res.V[2] = beta(1) / unit_ball_volume(1);
    res.V[1] = beta(2) / unit_ball_volume(2);
    res.V[0] = beta(3) / unit_ball_volume(3);
    res.fit_residual_rel = (A * beta - y).norm() / y.norm();
    return res;
}

} // namespace mag
