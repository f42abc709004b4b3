#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "rotormesh/mesh.hpp"
#include "rotormesh/supermesh.hpp"

namespace rotormesh {

/// Chooses the intersection space for an interface from its vertices:
/// 2D meshes use the straight line through the points, 3D meshes a plane when
/// the points are coplanar, otherwise the cylinder about +z they lie on.
/// Throws Error when none fits.
Projection fit_projection(std::span<const Vec3> points, int mesh_dim);

struct InterfacePair {
  InterfaceFaceSet a;
  InterfaceFaceSet b;
};

/// Face sets of two markers in a shared projection. Throws Error for
/// unknown markers or unsupported geometry.
InterfacePair interface_face_sets(const Mesh& mesh, std::string_view marker_a,
                                  std::string_view marker_b);

struct InterfaceReport {
  std::size_t a_faces = 0;
  std::size_t b_faces = 0;
  std::size_t supermesh_faces = 0;
  double min_weight_sum = 0.0;
  double max_weight_sum = 0.0;
  std::size_t partially_covered = 0;  ///< A faces with weight sum below 1 - 1e-9
  std::size_t uncovered = 0;          ///< A faces with no donor
  std::size_t min_donors = 0;
  std::size_t max_donors = 0;
  double area_a = 0.0;
  double area_b = 0.0;
  double supermesh_area = 0.0;
  int reoriented_a = 0;
  int reoriented_b = 0;
  std::string projection;

  std::string text() const;
};

InterfaceReport summarize_interface(const Supermesh& sm, const InterfacePair& pair);

}  // namespace rotormesh
