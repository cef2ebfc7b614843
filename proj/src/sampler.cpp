#include "mag/sampler.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

namespace mag {

namespace {

using PointList = std::vector<Eigen::Vector3d>;

Eigen::MatrixXd distance_matrix(const PointList& pts, int n) {
    Eigen::MatrixXd d(n, n);
    for (int i = 0; i < n; ++i) {
        d(i, i) = 0.0;
        for (int j = i + 1; j < n; ++j) {
            const double dij = (pts[i] - pts[j]).norm();
            d(i, j) = dij;
            d(j, i) = dij;
        }
    }
    return d;
}

FiniteMetricSpace space_from_points(const PointList& pts, int n) {
    return FiniteMetricSpace(/*labels=*/{}, distance_matrix(pts, n));
}

PointList load_cloud(const std::string& path) {
    const FiniteMetricSpace dummy = FiniteMetricSpace::from_points_csv(path);
    (void)dummy; // validates format; re-read coordinates below
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    const int dim = header == "x" ? 1 : 3;
    PointList pts;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        Eigen::Vector3d p = Eigen::Vector3d::Zero();
        std::stringstream ss(line);
        std::string cell;
        for (int c = 0; c < dim && std::getline(ss, cell, ','); ++c) p[c] = std::stod(cell);
        pts.push_back(p);
    }
    return pts;
}

// -------- candidate pools and farthest-point ordering --------

/// Seeded candidate pool: uniform interior samples plus a boundary share.
/// The weight of a convex body concentrates near its boundary as the scale
/// grows, so interior-only pools undershoot badly; boundary candidates let
/// the greedy ordering resolve that layer.
PointList candidate_pool(const DomainSpec& spec, int pool_size, std::uint64_t seed) {
    if (spec.kind == DomainKind::PointCloud) return load_cloud(spec.path);
    PointList pool;
    pool.reserve(pool_size + 3);
    const Eigen::Vector3d c = domain_centroid(spec);
    if (domain_contains(spec, c)) pool.push_back(c);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Eigen::Vector3d half = bounding_halfwidths(spec);
    const Eigen::Vector3d center =
        spec.kind == DomainKind::Interval ? Eigen::Vector3d(spec.length / 2, 0, 0)
                                          : Eigen::Vector3d::Zero();
    const int dim = spec.dimension();

    if (spec.kind == DomainKind::Interval) {
        pool.emplace_back(0.0, 0.0, 0.0);
        pool.emplace_back(spec.length, 0.0, 0.0);
    }
    const int n_boundary = spec.dimension() == 3 ? pool_size / 4 : 0;
    for (int i = 0; i < n_boundary; ++i) {
        switch (spec.kind) {
            case DomainKind::Ball: {
                Eigen::Vector3d n(gauss(rng), gauss(rng), gauss(rng));
                if (n.norm() < 1e-12) continue;
                pool.push_back(spec.radius * n.normalized());
                break;
            }
            case DomainKind::Ellipsoid: {
                Eigen::Vector3d n(gauss(rng), gauss(rng), gauss(rng));
                if (n.norm() < 1e-12) continue;
                n.normalize();
                pool.emplace_back(n.x(), n.y(), spec.a * n.z());
                break;
            }
            case DomainKind::SolidTorus: {
                const double uu = M_PI * u(rng);
                const double vv = M_PI * u(rng);
                const double w = spec.R0 + spec.r0 * std::cos(vv);
                pool.emplace_back(w * std::cos(uu), w * std::sin(uu),
                                  spec.r0 * std::sin(vv));
                break;
            }
            default: break;
        }
    }
    while (static_cast<int>(pool.size()) < pool_size) {
        Eigen::Vector3d p = center;
        for (int k = 0; k < dim; ++k) p[k] = center[k] + half[k] * u(rng);
        if (domain_contains(spec, p)) pool.push_back(p);
    }
    return pool;
}

// Greedy max-min ordering of the pool. Incremental: extending the returned
// prefix never changes earlier picks, which is what makes refinement levels
// nested. Returns the selection order and keeps min-distances for the
// covering-radius estimate.
class FarthestPointOrder {
public:
    FarthestPointOrder(PointList pool, const Eigen::Vector3d& centroid)
        : pool_(std::move(pool)), min_dist_(pool_.size(), std::numeric_limits<double>::max()) {
        int start = 0;
        double best = std::numeric_limits<double>::max();
        for (size_t i = 0; i < pool_.size(); ++i) {
            const double d = (pool_[i] - centroid).norm();
            if (d < best) {
                best = d;
                start = static_cast<int>(i);
            }
        }
        take(start);
    }

    int available() const { return static_cast<int>(pool_.size()); }

    /// Extend the ordering to n points; returns the ordered points.
    const PointList& extend_to(int n) {
        while (static_cast<int>(selected_.size()) < n) {
            int pick = -1;
            double best = -1.0;
            for (size_t i = 0; i < pool_.size(); ++i) {
                if (used_[i]) continue;
                if (min_dist_[i] > best) {
                    best = min_dist_[i];
                    pick = static_cast<int>(i);
                }
            }
            if (pick < 0) break;
            take(pick);
        }
        return selected_;
    }

    /// Covering-radius estimate of the current prefix: the farthest any pool
    /// candidate sits from the selected set.
    double fill_distance() const {
        double m = 0.0;
        for (size_t i = 0; i < pool_.size(); ++i)
            if (!used_[i]) m = std::max(m, min_dist_[i]);
        return m;
    }

private:
    void take(int idx) {
        if (used_.empty()) used_.assign(pool_.size(), 0);
        used_[idx] = 1;
        selected_.push_back(pool_[idx]);
        for (size_t i = 0; i < pool_.size(); ++i) {
            const double d = (pool_[i] - pool_[idx]).norm();
            if (d < min_dist_[i]) min_dist_[i] = d;
        }
    }

    PointList pool_;
    std::vector<double> min_dist_;
    std::vector<char> used_;
    PointList selected_;
};

int pool_size_for(int N_max) {
    return std::clamp(8 * N_max, 16384, 300000);
}

// -------- dyadic lattices (grid strategy) --------

PointList interval_grid(double length, int n) {
    PointList pts;
    pts.reserve(n);
    if (n == 1) {
        pts.emplace_back(length / 2.0, 0.0, 0.0);
        return pts;
    }
    for (int i = 0; i < n; ++i) pts.emplace_back(length * i / (n - 1), 0.0, 0.0);
    return pts;
}

/// All lattice points center + h*Z^3 inside the domain, ordered by distance
/// to the centroid (ties by lexicographic index) so prefixes are stable.
PointList lattice_points(const DomainSpec& spec, double h) {
    const Eigen::Vector3d half = bounding_halfwidths(spec);
    const Eigen::Vector3d c = domain_centroid(spec);
    std::vector<std::pair<double, Eigen::Vector3d>> found;
    const int kx = static_cast<int>(std::floor(half.x() / h));
    const int ky = static_cast<int>(std::floor(half.y() / h));
    const int kz = static_cast<int>(std::floor(half.z() / h));
    for (int ix = -kx; ix <= kx; ++ix)
        for (int iy = -ky; iy <= ky; ++iy)
            for (int iz = -kz; iz <= kz; ++iz) {
                const Eigen::Vector3d p = c + h * Eigen::Vector3d(ix, iy, iz);
                if (domain_contains(spec, p)) found.emplace_back((p - c).norm(), p);
            }
    std::stable_sort(found.begin(), found.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    PointList pts;
    pts.reserve(found.size());
    for (auto& [d, p] : found) pts.push_back(p);
    return pts;
}

} // namespace

SampleStrategy strategy_from_name(const std::string& name) {
    if (name == "grid") return SampleStrategy::Grid;
    if (name == "farthest_point") return SampleStrategy::FarthestPoint;
    throw InvalidInput("unknown sampling strategy: " + name);
}

std::string strategy_name(SampleStrategy s) {
    return s == SampleStrategy::Grid ? "grid" : "farthest_point";
}

std::vector<Eigen::Vector3d> sample_domain_points(const DomainSpec& spec, int N,
                                                  SampleStrategy strategy,
                                                  std::uint64_t seed) {
    if (N < 1) throw InvalidInput("sample size must be at least 1");
    if (strategy == SampleStrategy::Grid) {
        if (spec.kind == DomainKind::PointCloud)
            throw InvalidInput("grid sampling is not defined for point clouds");
        if (spec.dimension() == 1) return interval_grid(spec.length, N);
        // Coarsest dyadic lattice with at least N interior points.
        double h = bounding_halfwidths(spec).maxCoeff();
        PointList pts = lattice_points(spec, h);
        while (static_cast<int>(pts.size()) < N) {
            h /= 2.0;
            pts = lattice_points(spec, h);
        }
        pts.resize(N);
        return pts;
    }
    PointList pool = candidate_pool(spec, pool_size_for(N), seed);
    if (static_cast<int>(pool.size()) < N)
        throw InvalidInput("domain/point cloud has fewer candidates than requested points");
    FarthestPointOrder order(std::move(pool), domain_centroid(spec));
    PointList pts = order.extend_to(N);
    pts.resize(N);
    return pts;
}

FiniteMetricSpace sample_domain(const DomainSpec& spec, int N, SampleStrategy strategy,
                                std::uint64_t seed) {
    const PointList pts = sample_domain_points(spec, N, strategy, seed);
    return space_from_points(pts, N);
}

double interval_magnitude_exact(double length, double R) {
    if (length < 0.0) throw InvalidInput("interval length must be nonnegative");
    if (!(R > 0.0)) throw InvalidInput("scale R must be positive");
    return 1.0 + length * R / 2.0;
}

namespace {

void finalize_report(EstimateReport& rep, double tol, bool spacing_ok, bool budget_hit) {
    const auto& lv = rep.estimates;
    rep.final = lv.back().value;
    rep.delta_last = lv.size() >= 2
                         ? std::abs(lv.back().value - lv[lv.size() - 2].value)
                         : std::numeric_limits<double>::quiet_NaN();
    const bool delta_ok = lv.size() >= 2 && rep.delta_last < tol;
    rep.converged = delta_ok && spacing_ok;
    if (!spacing_ok) rep.note = "spacing rule violated (h*R > 0.25 at final level)";
    else if (!delta_ok && budget_hit) rep.note = "budget exceeded";
    // Aitken extrapolation from the last three levels, advisory only.
    rep.richardson = std::numeric_limits<double>::quiet_NaN();
    if (lv.size() >= 3) {
        const double v0 = lv[lv.size() - 3].value;
        const double v1 = lv[lv.size() - 2].value;
        const double v2 = lv.back().value;
        const double den = (v1 - v0) - (v2 - v1);
        if (std::abs(den) > 1e-300)
            rep.richardson = v2 + (v2 - v1) * (v2 - v1) / den;
    }
}

} // namespace

EstimateReport estimate_magnitude(const DomainSpec& spec, double R,
                                  const EstimateOptions& opts) {
    if (!(opts.tol > 0.0)) throw InvalidInput("tolerance must be positive");
    if (opts.N_max < 1) throw InvalidInput("N_max must be at least 1");
    if (!(R > 0.0)) throw InvalidInput("scale R must be positive");

    EstimateReport rep;
    rep.R = R;

    if (opts.strategy == SampleStrategy::Grid) {
        if (spec.kind == DomainKind::PointCloud)
            throw InvalidInput("grid sampling is not defined for point clouds");
        const bool one_d = spec.dimension() == 1;
        double h = one_d ? spec.length : bounding_halfwidths(spec).maxCoeff();
        int n_prev = 0;
        bool budget_hit = false;
        double h_final = h;
        while (true) {
            PointList pts = one_d
                                ? interval_grid(spec.length,
                                                1 + static_cast<int>(std::round(spec.length / h)))
                                : lattice_points(spec, h);
            const int n = static_cast<int>(pts.size());
            if (n > opts.N_max) {
                budget_hit = true;
                break;
            }
            if (n > n_prev) {
                const WeightVector wv =
                    detail::weighting_from_dist(distance_matrix(pts, n), R, opts.solve);
                rep.estimates.push_back({n, wv.w.sum(), wv.condition_estimate, h});
                h_final = h;
                n_prev = n;
                if (rep.estimates.size() >= 2 &&
                    std::abs(rep.estimates.back().value -
                             rep.estimates[rep.estimates.size() - 2].value) < opts.tol)
                    break;
            }
            h /= 2.0;
        }
        if (rep.estimates.empty())
            throw InvalidInput("N_max too small for even the coarsest grid level");
        finalize_report(rep, opts.tol, h_final * R <= 0.25, budget_hit);
        return rep;
    }

    // Farthest-point ladder: one pool, nested prefixes of the greedy order.
    PointList pool = candidate_pool(spec, pool_size_for(opts.N_max), opts.seed);
    FarthestPointOrder order(std::move(pool), domain_centroid(spec));
    const int cap = std::min(opts.N_max, order.available());
    int n = std::min(std::max(1, opts.N_start), cap);
    bool budget_hit = false;
    while (true) {
        const PointList& pts = order.extend_to(n);
        const WeightVector wv =
            detail::weighting_from_dist(distance_matrix(pts, n), R, opts.solve);
        rep.estimates.push_back({n, wv.w.sum(), wv.condition_estimate, order.fill_distance()});
        if (rep.estimates.size() >= 2 &&
            std::abs(rep.estimates.back().value -
                     rep.estimates[rep.estimates.size() - 2].value) < opts.tol)
            break;
        if (n >= cap) {
            budget_hit = true;
            break;
        }
        n = std::min(2 * n, cap);
    }
    finalize_report(rep, opts.tol, /*spacing_ok=*/true, budget_hit);
    if (spec.kind == DomainKind::PointCloud && n >= order.available()) {
        // The supremum over subsets of a finite cloud is attained by the
        // whole cloud, so the estimate is exact.
        rep.converged = true;
        rep.note = "entire point cloud used";
    }
    return rep;
}

EstimateCurve estimate_curve(const DomainSpec& spec, const std::vector<double>& R_grid,
                             const EstimateOptions& opts) {
    for (size_t i = 1; i < R_grid.size(); ++i)
        if (!(R_grid[i] > R_grid[i - 1]))
            throw InvalidInput("R grid must be strictly increasing");
    EstimateCurve out;
    for (double R : R_grid) {
        try {
            EstimateReport rep = estimate_magnitude(spec, R, opts);
            out.curve.samples.push_back({R, rep.final, rep.estimates.back().n_points,
                                         rep.estimates.back().condition_estimate});
            out.reports.push_back(std::move(rep));
        } catch (const Error& e) {
            out.curve.failures.push_back({R, e.what()});
        }
    }
    return out;
}

nlohmann::json EstimateReport::to_json() const {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& l : estimates)
        levels.push_back({{"n_points", l.n_points},
                          {"value", l.value},
                          {"condition_estimate", l.condition_estimate},
                          {"spacing", l.spacing}});
    return {{"R", R},
            {"estimates", levels},
            {"converged", converged},
            {"final", final},
            {"delta_last", delta_last},
            {"richardson_advisory", richardson},
            {"note", note}};
}

} // namespace mag
