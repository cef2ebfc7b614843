#pragma once

// Boundary-geometric functionals of a 3D body: enclosed volume, boundary
// area, total mean curvature, and Willmore energy (integral of H^2 over the
// boundary). Two independent routes are provided on purpose: analytic
// quadrature over the shape parametrization, and a discrete estimator on a
// triangle mesh. The mesh route exists to cross-validate the quadrature one;
// neither calls the other.
//
// Sign convention: H = (k1 + k2)/2 against outward normals, so the unit
// sphere has H = 1, total mean curvature 4*pi, and Willmore energy 4*pi.

#include "mag/domain.hpp"
#include "mag/mesh.hpp"

#include <nlohmann/json_fwd.hpp>

namespace mag {

struct GeometricFunctionals {
    double volume = 0.0;                  // length^3
    double area = 0.0;                    // length^2
    double mean_curvature_integral = 0.0; // length
    double willmore = 0.0;                // dimensionless

    nlohmann::json to_json() const;
};

/// Quadrature over the analytic parametrization with exact principal
/// curvatures. quad_order is the number of quadrature nodes per coordinate.
GeometricFunctionals functionals_quadrature(const DomainSpec& spec, int quad_order = 96);

/// Discrete estimate on a closed mesh: divergence-theorem volume, summed
/// triangle areas, and per-vertex mean curvature from a local polynomial
/// height fit (quadric through quartic) over the 2-ring neighborhood,
/// integrated with barycentric vertex areas.
GeometricFunctionals functionals_mesh(const SurfaceMesh& mesh);

namespace detail {
/// Functionals of the spheroid with semi-axes (b, b, c); used by the
// quadrature route and by scale-invariance tests.
GeometricFunctionals spheroid_functionals(double b, double c, int quad_order);
GeometricFunctionals torus_functionals(double R0, double r0, int quad_order);
/// Gauss-Legendre nodes/weights on [lo, hi].
void gauss_legendre(int n, double lo, double hi, std::vector<double>& x,
                    std::vector<double>& w);
} // namespace detail

} // namespace mag
