#include "mag/domain.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace mag {

DomainSpec DomainSpec::interval(double length) {
    if (!(length > 0.0)) throw InvalidInput("interval length must be positive");
    DomainSpec s;
    s.kind = DomainKind::Interval;
    s.length = length;
    return s;
}

DomainSpec DomainSpec::ball(double radius) {
    if (!(radius > 0.0)) throw InvalidInput("ball radius must be positive");
    DomainSpec s;
    s.kind = DomainKind::Ball;
    s.radius = radius;
    return s;
}

DomainSpec DomainSpec::ellipsoid(double a) {
    if (!(a > 0.0)) throw InvalidInput("ellipsoid aspect parameter must be positive");
    DomainSpec s;
    s.kind = DomainKind::Ellipsoid;
    s.a = a;
    return s;
}

DomainSpec DomainSpec::solid_torus(double R0, double r0) {
    if (!(R0 > 0.0) || !(r0 > 0.0)) throw InvalidInput("torus radii must be positive");
    if (!(r0 < R0)) throw InvalidInput("torus tube radius must be smaller than center radius");
    DomainSpec s;
    s.kind = DomainKind::SolidTorus;
    s.R0 = R0;
    s.r0 = r0;
    return s;
}

DomainSpec DomainSpec::point_cloud(std::string path) {
    DomainSpec s;
    s.kind = DomainKind::PointCloud;
    s.path = std::move(path);
    return s;
}

int DomainSpec::dimension() const {
    return kind == DomainKind::Interval ? 1 : 3;
}

bool DomainSpec::is_convex() const {
    switch (kind) {
        case DomainKind::Interval:
        case DomainKind::Ball:
        case DomainKind::Ellipsoid: return true;
        default: return false;
    }
}

bool DomainSpec::is_smooth_3d() const {
    switch (kind) {
        case DomainKind::Ball:
        case DomainKind::Ellipsoid:
        case DomainKind::SolidTorus: return true;
        default: return false;
    }
}

std::string DomainSpec::kind_name() const {
    switch (kind) {
        case DomainKind::Interval: return "interval";
        case DomainKind::Ball: return "ball";
        case DomainKind::Ellipsoid: return "ellipsoid";
        case DomainKind::SolidTorus: return "solid_torus";
        case DomainKind::PointCloud: return "point_cloud";
    }
    return "?";
}

DomainSpec DomainSpec::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw InvalidInput("domain JSON must be an object with a \"kind\" key");
    const std::string kind = j.at("kind").get<std::string>();
    try {
        if (kind == "interval") return interval(j.at("length").get<double>());
        if (kind == "ball") return ball(j.at("radius").get<double>());
        if (kind == "ellipsoid") return ellipsoid(j.at("a").get<double>());
        if (kind == "solid_torus")
            return solid_torus(j.at("R0").get<double>(), j.at("r0").get<double>());
        if (kind == "point_cloud") return point_cloud(j.at("path").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("bad domain JSON: ") + e.what());
    }
    throw InvalidInput("unknown domain kind: " + kind);
}

DomainSpec DomainSpec::from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("domain JSON parse error: ") + e.what());
    }
    return from_json(j);
}

nlohmann::json DomainSpec::to_json() const {
    nlohmann::json j;
    j["kind"] = kind_name();
    switch (kind) {
        case DomainKind::Interval: j["length"] = length; break;
        case DomainKind::Ball: j["radius"] = radius; break;
        case DomainKind::Ellipsoid: j["a"] = a; break;
        case DomainKind::SolidTorus:
            j["R0"] = R0;
            j["r0"] = r0;
            break;
        case DomainKind::PointCloud: j["path"] = path; break;
    }
    return j;
}

bool domain_contains(const DomainSpec& spec, const Eigen::Vector3d& p) {
    switch (spec.kind) {
        case DomainKind::Interval: return p.x() >= 0.0 && p.x() <= spec.length;
        case DomainKind::Ball: return p.squaredNorm() <= spec.radius * spec.radius;
        case DomainKind::Ellipsoid: {
            const double za = p.z() / spec.a;
            return p.x() * p.x() + p.y() * p.y() + za * za <= 1.0;
        }
        case DomainKind::SolidTorus: {
            const double rho = std::hypot(p.x(), p.y()) - spec.R0;
            return rho * rho + p.z() * p.z() <= spec.r0 * spec.r0;
        }
        case DomainKind::PointCloud:
            throw InvalidInput("membership test is undefined for point clouds");
    }
    return false;
}

namespace detail {

double distance_to_ellipsoid(const Eigen::Vector3d& s, const Eigen::Vector3d& p) {
    const Eigen::Vector3d q = p.cwiseQuotient(s);
    if (q.squaredNorm() <= 1.0) return 0.0;
    // Closest point x_i = s_i^2 p_i / (s_i^2 + lambda) with lambda > 0 solving
    // sum (s_i p_i / (s_i^2 + lambda))^2 = 1; the left side is strictly
    // decreasing in lambda, so bisection is safe.
    auto f = [&](double lam) {
        double v = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double t = s[i] * p[i] / (s[i] * s[i] + lam);
            v += t * t;
        }
        return v - 1.0;
    };
    double lo = 0.0;
    double hi = s.maxCoeff() * p.norm() + s.maxCoeff() * s.maxCoeff();
    while (f(hi) > 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    const double lam = 0.5 * (lo + hi);
    Eigen::Vector3d x;
    for (int i = 0; i < 3; ++i) x[i] = s[i] * s[i] * p[i] / (s[i] * s[i] + lam);
    return (p - x).norm();
}

} // namespace detail

double distance_to_body(const DomainSpec& spec, const Eigen::Vector3d& p) {
    switch (spec.kind) {
        case DomainKind::Interval: {
            double d = 0.0;
            if (p.x() < 0.0) d = -p.x();
            else if (p.x() > spec.length) d = p.x() - spec.length;
            return std::hypot(d, std::hypot(p.y(), p.z()));
        }
        case DomainKind::Ball: return std::max(0.0, p.norm() - spec.radius);
        case DomainKind::Ellipsoid:
            return detail::distance_to_ellipsoid({1.0, 1.0, spec.a}, p);
        default:
            throw NonConvexSpec("distance_to_body requires a convex domain, got " +
                                spec.kind_name());
    }
}

Eigen::Vector3d domain_centroid(const DomainSpec& spec) {
    switch (spec.kind) {
        case DomainKind::Interval: return {spec.length / 2.0, 0.0, 0.0};
        default: return Eigen::Vector3d::Zero();
    }
}

Eigen::Vector3d bounding_halfwidths(const DomainSpec& spec, double inflate) {
    switch (spec.kind) {
        case DomainKind::Interval:
            return {spec.length / 2.0 + inflate, inflate, inflate};
        case DomainKind::Ball: {
            const double h = spec.radius + inflate;
            return {h, h, h};
        }
        case DomainKind::Ellipsoid: return {1.0 + inflate, 1.0 + inflate, spec.a + inflate};
        case DomainKind::SolidTorus: {
            const double h = spec.R0 + spec.r0 + inflate;
            return {h, h, spec.r0 + inflate};
        }
        case DomainKind::PointCloud:
            throw InvalidInput("bounding box is undefined for point clouds");
    }
    return Eigen::Vector3d::Zero();
}

} // namespace mag
