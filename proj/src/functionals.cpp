#include "mag/functionals.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cmath>
#include <set>
#include <vector>

namespace mag {

nlohmann::json GeometricFunctionals::to_json() const {
    return {{"volume", volume},
            {"area", area},
            {"mean_curvature_integral", mean_curvature_integral},
            {"willmore", willmore}};
}

namespace detail {

void gauss_legendre(int n, double lo, double hi, std::vector<double>& x,
                    std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    // Newton iteration on P_n from the Chebyshev initial guess.
    for (int i = 0; i < n; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / pp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = lo + 0.5 * (hi - lo) * (1.0 - t);
        w[i] = (hi - lo) / ((1.0 - t * t) * pp * pp);
    }
}

GeometricFunctionals spheroid_functionals(double b, double c, int quad_order) {
    // Surface of revolution rho = b sin(theta), z = c cos(theta).
    // Meridian curvature bc/g^3, parallel curvature c/(b g), g^2 = b^2 cos^2 + c^2 sin^2.
    std::vector<double> x, w;
    gauss_legendre(quad_order, 0.0, M_PI, x, w);
    GeometricFunctionals f;
    for (int i = 0; i < quad_order; ++i) {
        const double th = x[i];
        const double s = std::sin(th), co = std::cos(th);
        const double rho = b * s;
        const double g = std::sqrt(b * b * co * co + c * c * s * s);
        const double H = 0.5 * (b * c / (g * g * g) + c / (b * g));
        const double dS = 2.0 * M_PI * rho * g * w[i];
        f.area += dS;
        f.mean_curvature_integral += H * dS;
        f.willmore += H * H * dS;
        f.volume += M_PI * rho * rho * (c * s) * w[i]; // -pi * rho^2 * z'
    }
    return f;
}

GeometricFunctionals torus_functionals(double R0, double r0, int quad_order) {
    // Tube curvature 1/r0, ring curvature cos(v)/(R0 + r0 cos(v)); the
    // integrands do not depend on the angle around the center circle.
    const int n = std::max(quad_order, 16);
    GeometricFunctionals f;
    for (int i = 0; i < n; ++i) {
        const double v = 2.0 * M_PI * i / n;
        const double wgt = 2.0 * M_PI / n;
        const double wrad = R0 + r0 * std::cos(v);
        const double H = 0.5 * (1.0 / r0 + std::cos(v) / wrad);
        const double dS = 2.0 * M_PI * r0 * wrad * wgt;
        f.area += dS;
        f.mean_curvature_integral += H * dS;
        f.willmore += H * H * dS;
    }
    f.volume = 2.0 * M_PI * M_PI * R0 * r0 * r0;
    return f;
}

} // namespace detail

GeometricFunctionals functionals_quadrature(const DomainSpec& spec, int quad_order) {
    if (quad_order < 4) throw InvalidInput("quadrature order too small");
    switch (spec.kind) {
        case DomainKind::Ball:
            return detail::spheroid_functionals(spec.radius, spec.radius, quad_order);
        case DomainKind::Ellipsoid: {
            // Flat spheroids have a boundary layer of width ~a near the
            // equator; scale the node count to keep spectral accuracy.
            const double ratio = std::max(spec.a, 1.0 / spec.a);
            const int order = quad_order * static_cast<int>(std::ceil(ratio));
            return detail::spheroid_functionals(1.0, spec.a, order);
        }
        case DomainKind::SolidTorus:
            return detail::torus_functionals(spec.R0, spec.r0, quad_order);
        default:
            throw InvalidInput("functionals_quadrature requires a smooth 3D domain, got " +
                               spec.kind_name());
    }
}

namespace {

std::vector<std::vector<int>> vertex_adjacency(const SurfaceMesh& m) {
    std::vector<std::set<int>> adj(m.vertex_count());
    for (const auto& t : m.triangles)
        for (int k = 0; k < 3; ++k) {
            adj[t[k]].insert(t[(k + 1) % 3]);
            adj[t[k]].insert(t[(k + 2) % 3]);
        }
    std::vector<std::vector<int>> out(m.vertex_count());
    for (int i = 0; i < m.vertex_count(); ++i) out[i].assign(adj[i].begin(), adj[i].end());
    return out;
}

std::vector<Eigen::Vector3d> estimated_normals(const SurfaceMesh& m) {
    std::vector<Eigen::Vector3d> n(m.vertex_count(), Eigen::Vector3d::Zero());
    for (const auto& t : m.triangles) {
        const Eigen::Vector3d fn = (m.vertices[t[1]] - m.vertices[t[0]])
                                       .cross(m.vertices[t[2]] - m.vertices[t[0]]);
        for (int k = 0; k < 3; ++k) n[t[k]] += fn; // area weighting
    }
    for (auto& v : n) v.normalize();
    return n;
}

/// Mean curvature at one vertex from a least-squares quartic height field
/// over the 2-ring, in the frame of the outward normal. The cubic/quartic
/// columns absorb the higher jet so the quadratic coefficients are clean;
/// linear columns enter only when the normal itself is estimated.
double quadric_mean_curvature(const SurfaceMesh& m,
                              const std::vector<std::vector<int>>& adj, int v,
                              const Eigen::Vector3d& normal, bool exact_normal) {
    std::set<int> ring(adj[v].begin(), adj[v].end());
    for (int u : adj[v]) ring.insert(adj[u].begin(), adj[u].end());
    ring.erase(v);

    Eigen::Vector3d t1 = normal.unitOrthogonal();
    Eigen::Vector3d t2 = normal.cross(t1);

    const int rows = static_cast<int>(ring.size());
    double scale = 0.0;
    for (int u : ring) scale += (m.vertices[u] - m.vertices[v]).norm();
    scale /= rows;

    const int n_linear = exact_normal ? 0 : 2;
    int n_high = 12; // quadratic + cubic + quartic
    if (rows < n_linear + n_high + 1) n_high = 7; // quadratic + cubic
    if (rows < n_linear + n_high + 1) n_high = 3; // quadratic only
    const int cols = n_linear + n_high;
    Eigen::MatrixXd A(rows, cols);
    Eigen::VectorXd h(rows);
    int r = 0;
    for (int u : ring) {
        const Eigen::Vector3d d = m.vertices[u] - m.vertices[v];
        const double x = d.dot(t1) / scale, y = d.dot(t2) / scale;
        int c = 0;
        if (!exact_normal) {
            A(r, c++) = x;
            A(r, c++) = y;
        }
        A(r, c++) = 0.5 * x * x;
        A(r, c++) = x * y;
        A(r, c++) = 0.5 * y * y;
        if (n_high > 3) {
            A(r, c++) = x * x * x;
            A(r, c++) = x * x * y;
            A(r, c++) = x * y * y;
            A(r, c++) = y * y * y;
        }
        if (n_high > 7) {
            A(r, c++) = x * x * x * x;
            A(r, c++) = x * x * x * y;
            A(r, c++) = x * x * y * y;
            A(r, c++) = x * y * y * y;
            A(r, c++) = y * y * y * y;
        }
        h(r) = d.dot(normal) / scale;
        ++r;
    }
    const Eigen::VectorXd q = A.colPivHouseholderQr().solve(h);
    const double fx = exact_normal ? 0.0 : q(0);
    const double fy = exact_normal ? 0.0 : q(1);
    const double fxx = q(n_linear) / scale;
    const double fxy = q(n_linear + 1) / scale;
    const double fyy = q(n_linear + 2) / scale;
    const double g = 1.0 + fx * fx + fy * fy;
    // Height-graph mean curvature against the +normal axis; the surface bends
    // away from the outward normal, hence the sign flip.
    const double Hgraph =
        ((1.0 + fy * fy) * fxx - 2.0 * fx * fy * fxy + (1.0 + fx * fx) * fyy) /
        (2.0 * std::pow(g, 1.5));
    return -Hgraph;
}

} // namespace

GeometricFunctionals functionals_mesh(const SurfaceMesh& mesh) {
    mesh.validate();
    GeometricFunctionals f;
    std::vector<double> vertex_area(mesh.vertex_count(), 0.0);
    for (const auto& t : mesh.triangles) {
        const Eigen::Vector3d e1 = mesh.vertices[t[1]] - mesh.vertices[t[0]];
        const Eigen::Vector3d e2 = mesh.vertices[t[2]] - mesh.vertices[t[0]];
        const double area = 0.5 * e1.cross(e2).norm();
        f.area += area;
        f.volume += mesh.vertices[t[0]].dot(mesh.vertices[t[1]].cross(mesh.vertices[t[2]])) / 6.0;
        for (int k = 0; k < 3; ++k) vertex_area[t[k]] += area / 3.0;
    }
    const auto adj = vertex_adjacency(mesh);
    const bool exact_normal = !mesh.normals.empty();
    const std::vector<Eigen::Vector3d> fallback =
        exact_normal ? std::vector<Eigen::Vector3d>{} : estimated_normals(mesh);
    const auto& normals = exact_normal ? mesh.normals : fallback;
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        const double H = quadric_mean_curvature(mesh, adj, v, normals[v], exact_normal);
        f.mean_curvature_integral += H * vertex_area[v];
        f.willmore += H * H * vertex_area[v];
    }
    return f;
}

} // namespace mag
