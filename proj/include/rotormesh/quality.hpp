#pragma once

#include <vector>

#include "rotormesh/exec.hpp"
#include "rotormesh/geometry.hpp"
#include "rotormesh/mesh.hpp"

namespace rotormesh {

/// Orthogonality and volume summary of a mesh.
///
/// A face's orthogonality angle is 90° minus the angle between its outward
/// unit normal and the vector from the cell centroid to the neighbouring
/// cell centroid (boundary faces: to the face centroid), clamped to [0, 90].
/// A cell's value is the minimum over its faces.
struct QualityReport {
  double min_orthogonality_deg = 90.0;
  std::vector<double> cell_orthogonality_deg;
  std::size_t negative_volume_count = 0;  ///< cells with volume <= 0
  double min_volume = 0.0;
};

/// Throws Error for a mesh without cells.
QualityReport orthogonality_metrics(const Mesh& mesh, Exec exec = Exec::parallel);
QualityReport orthogonality_metrics(const Mesh& mesh, const MeshGeometry& geometry,
                                    Exec exec = Exec::parallel);

/// Angle in degrees between two nonzero vectors, robust near 0° and 180°.
double angle_between_deg(const Vec3& a, const Vec3& b);

}  // namespace rotormesh
