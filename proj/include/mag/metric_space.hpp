#pragma once

// Finite metric spaces stored as labeled symmetric distance matrices, and the
// sampled magnitude-function curve type shared across the toolkit.

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <vector>

namespace mag {

class FiniteMetricSpace {
public:
    /// Validates: square matrix, symmetric, zero diagonal, finite entries,
    /// strictly positive off-diagonal (duplicate points are rejected because
    /// they make every similarity matrix singular).
    FiniteMetricSpace(std::vector<std::string> labels, Eigen::MatrixXd dist);

    /// Euclidean space from a points-by-coordinates matrix (one row per point).
    static FiniteMetricSpace from_points(const Eigen::MatrixXd& points);

    /// CSV with header "x,y,z" (3D) or "x" (1D).
    static FiniteMetricSpace from_points_csv(const std::string& path);

    /// Headerless CSV holding a square distance matrix.
    static FiniteMetricSpace from_distance_csv(const std::string& path);

    int size() const { return static_cast<int>(dist_.rows()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const Eigen::MatrixXd& dist() const { return dist_; }

    FiniteMetricSpace rescaled(double s) const;
    FiniteMetricSpace subset(const std::vector<int>& indices) const;
    FiniteMetricSpace permuted(const std::vector<int>& perm) const;

    /// Opt-in O(N^3) validator; not run by the constructor.
    bool satisfies_triangle_inequality(double tol = 1e-12) const;

private:
    std::vector<std::string> labels_;
    Eigen::MatrixXd dist_;
};

struct CurveSample {
    double R = 0.0;
    double value = 0.0;
    int n_points = 0;
    double condition_estimate = 0.0;
};

struct CurveFailure {
    double R = 0.0;
    std::string message;
};

/// Sampled magnitude function. R values are strictly increasing and every
/// recorded value is finite; failed evaluations land in `failures` instead.
struct MagnitudeCurve {
    std::vector<CurveSample> samples;
    std::vector<CurveFailure> failures;

    // CSV header: R,value,n_points,condition_estimate
    void write_csv(std::ostream& os) const;
    static MagnitudeCurve read_csv(std::istream& is);
};

} // namespace mag
