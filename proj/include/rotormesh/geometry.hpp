#pragma once

#include <span>
#include <vector>

#include "rotormesh/exec.hpp"
#include "rotormesh/mesh.hpp"

namespace rotormesh {

/// Geometry of one cell face as seen from its owning cell. In 2D, faces are
/// edges: `area` is the edge length and the normal lies in the xy-plane.
struct FaceGeometry {
  double area = 0.0;
  Vec3 normal = Vec3::Zero();  ///< unit, outward from the owning cell
  Vec3 centroid = Vec3::Zero();
};

struct CellGeometry {
  double volume = 0.0;  ///< signed; area in 2D
  Vec3 centroid = Vec3::Zero();
};

/// Per-cell and per-face geometry. Faces use the layout of
/// Connectivity::face_offsets, so a shared face appears once per cell with
/// antiparallel normals.
struct MeshGeometry {
  std::vector<CellGeometry> cells;
  std::vector<FaceGeometry> faces;
};

/// Signed volume of the tetrahedron (a, b, c, d); positive when
/// (b - a) x (c - a) points toward d.
double tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

/// Area, unit normal and centroid of a polygonal face given in outward
/// order. Quadrilaterals are split along the diagonal through the vertex with
/// the lowest global index; the normal averages the two triangle normals.
FaceGeometry face_geometry(std::span<const Vec3> points, std::span<const Index> vertices);

/// Edge geometry for 2D meshes; the normal is the edge direction turned
/// clockwise (outward for counter-clockwise cells).
FaceGeometry edge_geometry(const Vec3& a, const Vec3& b);

/// Volume and centroid of one cell by tetrahedral (3D) or triangular (2D)
/// decomposition about the vertex average.
CellGeometry cell_geometry(std::span<const Vec3> points, const Element& cell, int dim);

MeshGeometry cell_geometry(const Mesh& mesh, Exec exec = Exec::parallel);

}  // namespace rotormesh
