#include "mag/mesh.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

namespace mag {

namespace {

using Tri = std::array<int, 3>;

struct EdgeUse {
    int forward = 0;  // (a,b) with a < b traversed as a->b
    int backward = 0; // traversed as b->a
};

std::map<std::pair<int, int>, EdgeUse> edge_uses(const SurfaceMesh& m) {
    std::map<std::pair<int, int>, EdgeUse> uses;
    for (const Tri& t : m.triangles) {
        for (int k = 0; k < 3; ++k) {
            const int a = t[k];
            const int b = t[(k + 1) % 3];
            if (a < b) ++uses[{a, b}].forward;
            else ++uses[{b, a}].backward;
        }
    }
    return uses;
}

double triangle_area(const SurfaceMesh& m, const Tri& t) {
    const Eigen::Vector3d e1 = m.vertices[t[1]] - m.vertices[t[0]];
    const Eigen::Vector3d e2 = m.vertices[t[2]] - m.vertices[t[0]];
    return 0.5 * e1.cross(e2).norm();
}

double signed_volume(const SurfaceMesh& m) {
    double v = 0.0;
    for (const Tri& t : m.triangles)
        v += m.vertices[t[0]].dot(m.vertices[t[1]].cross(m.vertices[t[2]])) / 6.0;
    return v;
}

// ---- icosphere construction ----

void icosahedron(std::vector<Eigen::Vector3d>& verts, std::vector<Tri>& tris) {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    const double s = 1.0 / std::sqrt(1.0 + phi * phi);
    auto v = [&](double x, double y, double z) { verts.emplace_back(s * x, s * y, s * z); };
    v(-1, phi, 0); v(1, phi, 0); v(-1, -phi, 0); v(1, -phi, 0);
    v(0, -1, phi); v(0, 1, phi); v(0, -1, -phi); v(0, 1, -phi);
    v(phi, 0, -1); v(phi, 0, 1); v(-phi, 0, -1); v(-phi, 0, 1);
    tris = {{0, 11, 5},  {0, 5, 1},   {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
            {1, 5, 9},   {5, 11, 4},  {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
            {3, 9, 4},   {3, 4, 2},   {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
            {4, 9, 5},   {2, 4, 11},  {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
}

void subdivide_on_sphere(std::vector<Eigen::Vector3d>& verts, std::vector<Tri>& tris) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
        const auto key = std::minmax(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const Eigen::Vector3d p = (verts[a] + verts[b]).normalized();
        verts.push_back(p);
        const int idx = static_cast<int>(verts.size()) - 1;
        midpoint[key] = idx;
        return idx;
    };
    std::vector<Tri> next;
    next.reserve(4 * tris.size());
    for (const Tri& t : tris) {
        const int ab = mid(t[0], t[1]);
        const int bc = mid(t[1], t[2]);
        const int ca = mid(t[2], t[0]);
        next.push_back({t[0], ab, ca});
        next.push_back({t[1], bc, ab});
        next.push_back({t[2], ca, bc});
        next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
}

SurfaceMesh ellipsoid_mesh(double b, double c, int refinement) {
    std::vector<Eigen::Vector3d> sphere;
    std::vector<Tri> tris;
    icosahedron(sphere, tris);
    for (int r = 0; r < refinement; ++r) subdivide_on_sphere(sphere, tris);
    SurfaceMesh m;
    m.triangles = std::move(tris);
    m.vertices.reserve(sphere.size());
    m.normals.reserve(sphere.size());
    for (const Eigen::Vector3d& u : sphere) {
        m.vertices.emplace_back(b * u.x(), b * u.y(), c * u.z());
        // gradient of (x/b)^2 + (y/b)^2 + (z/c)^2
        Eigen::Vector3d n(u.x() / b, u.y() / b, u.z() / c);
        m.normals.push_back(n.normalized());
    }
    return m;
}

SurfaceMesh torus_mesh(double R0, double r0, int refinement) {
    const int nu = 24 << refinement; // around the center circle
    const int nv = 12 << refinement; // around the tube
    SurfaceMesh m;
    m.vertices.reserve(static_cast<size_t>(nu) * nv);
    m.normals.reserve(static_cast<size_t>(nu) * nv);
    for (int i = 0; i < nu; ++i) {
        const double u = 2.0 * M_PI * i / nu;
        for (int j = 0; j < nv; ++j) {
            const double v = 2.0 * M_PI * j / nv;
            const double w = R0 + r0 * std::cos(v);
            m.vertices.emplace_back(w * std::cos(u), w * std::sin(u), r0 * std::sin(v));
            m.normals.emplace_back(std::cos(v) * std::cos(u), std::cos(v) * std::sin(u),
                                   std::sin(v));
        }
    }
    auto id = [&](int i, int j) { return (i % nu) * nv + (j % nv); };
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j) {
            const int p00 = id(i, j), p10 = id(i + 1, j), p01 = id(i, j + 1),
                      p11 = id(i + 1, j + 1);
            m.triangles.push_back({p00, p10, p11});
            m.triangles.push_back({p00, p11, p01});
        }
    return m;
}

} // namespace

int SurfaceMesh::edge_count() const {
    return static_cast<int>(edge_uses(*this).size());
}

int SurfaceMesh::euler_characteristic() const {
    return vertex_count() - edge_count() + triangle_count();
}

void SurfaceMesh::validate() const {
    if (vertices.empty() || triangles.empty()) throw DegenerateMesh("empty mesh");
    for (const Tri& t : triangles) {
        for (int idx : t)
            if (idx < 0 || idx >= vertex_count())
                throw DegenerateMesh("triangle index out of range");
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw DegenerateMesh("triangle repeats a vertex");
        if (triangle_area(*this, t) <= 0.0) throw DegenerateMesh("zero-area triangle");
    }
    for (const auto& [edge, use] : edge_uses(*this)) {
        if (use.forward != 1 || use.backward != 1)
            throw DegenerateMesh("edge (" + std::to_string(edge.first) + "," +
                                 std::to_string(edge.second) +
                                 ") not shared by exactly two opposite-oriented triangles");
    }
    if (signed_volume(*this) <= 0.0)
        throw DegenerateMesh("non-positive enclosed volume (inward orientation?)");
    if (!normals.empty() && normals.size() != vertices.size())
        throw DegenerateMesh("normal count does not match vertex count");
}

void SurfaceMesh::write_off(std::ostream& os) const {
    os << "OFF\n" << vertex_count() << " " << triangle_count() << " 0\n";
    char buf[128];
    for (const auto& v : vertices) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v.x(), v.y(), v.z());
        os << buf;
    }
    for (const auto& t : triangles) os << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
}

SurfaceMesh SurfaceMesh::read_off(std::istream& is) {
    std::string magic;
    is >> magic;
    if (magic != "OFF") throw InvalidInput("not an OFF file");
    int nv = 0, nf = 0, ne = 0;
    is >> nv >> nf >> ne;
    if (!is || nv <= 0 || nf <= 0) throw InvalidInput("bad OFF counts");
    SurfaceMesh m;
    m.vertices.resize(nv);
    for (auto& v : m.vertices) is >> v.x() >> v.y() >> v.z();
    m.triangles.resize(nf);
    for (auto& t : m.triangles) {
        int k = 0;
        is >> k;
        if (k != 3) throw InvalidInput("OFF face is not a triangle");
        is >> t[0] >> t[1] >> t[2];
    }
    if (!is) throw InvalidInput("truncated OFF file");
    return m;
}

SurfaceMesh mesh_domain(const DomainSpec& spec, int refinement) {
    if (refinement < 0) throw InvalidInput("refinement must be nonnegative");
    switch (spec.kind) {
        case DomainKind::Ball: return ellipsoid_mesh(spec.radius, spec.radius, refinement);
        case DomainKind::Ellipsoid: return ellipsoid_mesh(1.0, spec.a, refinement);
        case DomainKind::SolidTorus: return torus_mesh(spec.R0, spec.r0, refinement);
        default:
            throw InvalidInput("mesh_domain requires a smooth 3D domain, got " +
                               spec.kind_name());
    }
}

} // namespace mag
