#pragma once

// Parametrized compact domains: interval, ball, ellipsoid with semi-axes
// (1, 1, a), solid torus, and raw point clouds. The JSON form matches the CLI
// interface, e.g. {"kind":"ellipsoid","a":0.5}.

#include "mag/errors.hpp"

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include <string>

namespace mag {

enum class DomainKind { Interval, Ball, Ellipsoid, SolidTorus, PointCloud };

struct DomainSpec {
    DomainKind kind = DomainKind::Ball;
    double length = 0.0; // interval
    double radius = 0.0; // ball
    double a = 0.0;      // ellipsoid z semi-axis
    double R0 = 0.0;     // torus center-circle radius
    double r0 = 0.0;     // torus tube radius
    std::string path;    // point cloud CSV

    static DomainSpec interval(double length);
    static DomainSpec ball(double radius);
    static DomainSpec ellipsoid(double a);
    static DomainSpec solid_torus(double R0, double r0);
    static DomainSpec point_cloud(std::string path);

    int dimension() const; // 1 or 3
    bool is_convex() const;
    bool is_smooth_3d() const; // ball, ellipsoid, solid torus

    static DomainSpec from_json(const nlohmann::json& j);
    static DomainSpec from_json_string(const std::string& text);
    nlohmann::json to_json() const;
    std::string kind_name() const;
};

/// Closed-domain membership test. The point has `dimension()` meaningful
/// coordinates; extra coordinates must be zero for 1D domains.
bool domain_contains(const DomainSpec& spec, const Eigen::Vector3d& p);

/// Euclidean distance from p to the body (zero inside). Supported for the
/// convex kinds (interval, ball, ellipsoid).
double distance_to_body(const DomainSpec& spec, const Eigen::Vector3d& p);

Eigen::Vector3d domain_centroid(const DomainSpec& spec);

/// Axis-aligned bounding-box half-widths, optionally inflated by t.
Eigen::Vector3d bounding_halfwidths(const DomainSpec& spec, double inflate = 0.0);

namespace detail {
/// Distance from p to an axis-aligned ellipsoid with the given semi-axes
/// (zero inside); monotone root solve for the projection onto the surface.
double distance_to_ellipsoid(const Eigen::Vector3d& semi_axes, const Eigen::Vector3d& p);
} // namespace detail

} // namespace mag
