#pragma once

// Triangulated closed surfaces with optional analytic vertex normals, OFF
// text I/O, and parametrized meshing of the smooth 3D domains.

#include "mag/domain.hpp"

#include <Eigen/Core>

#include <array>
#include <iosfwd>
#include <vector>

namespace mag {

struct SurfaceMesh {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<int, 3>> triangles; // outward-oriented
    std::vector<Eigen::Vector3d> normals;      // empty, or one unit normal per vertex

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }
    int edge_count() const;
    int euler_characteristic() const; // V - E + F

    /// Throws DegenerateMesh unless the mesh is a closed orientable surface:
    /// every edge shared by exactly two triangles with opposite orientation,
    /// no zero-area triangles, positive enclosed volume.
    void validate() const;

    void write_off(std::ostream& os) const;
    static SurfaceMesh read_off(std::istream& is);
};

/// Watertight mesh of a smooth 3D domain (ball, ellipsoid, solid torus) with
/// analytic outward vertex normals. Vertex count grows roughly 4x per
/// refinement level; refinement 0 of a ball is the projected icosahedron.
SurfaceMesh mesh_domain(const DomainSpec& spec, int refinement);

} // namespace mag
