#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "rotormesh/greedy.hpp"
#include "rotormesh/mesh.hpp"
#include "rotormesh/quality.hpp"

namespace rotormesh {

struct DeformResult {
  Mesh mesh;
  GreedyHistory history;
  QualityReport before;
  QualityReport after;
};

/// Per-marker point displacements, ordered like extract_marker_points.
using MarkerDisplacements = std::map<std::string, std::vector<Vec3>, std::less<>>;

/// Moves a mesh by interpolating prescribed marker displacements into the
/// volume. Fixed markers are held at zero displacement. Control points are
/// chosen greedily among all prescribed points; afterwards every prescribed
/// point is set to its exact target, so surfaces land where they were asked
/// to regardless of the greedy tolerance.
///
/// Throws Error for unknown markers, count mismatches, non-finite values, or
/// a point shared by two markers with different displacements.
DeformResult deform_mesh(const Mesh& mesh, const MarkerDisplacements& marker_displacements,
                         std::span<const std::string> fixed_markers, const GreedyOptions& options);

/// Interpolation stage only: surface indices (sorted) with their displacements.
struct SurfaceData {
  std::vector<Index> indices;
  std::vector<Vec3> displacements;
};

SurfaceData gather_surface(const Mesh& mesh, const MarkerDisplacements& marker_displacements,
                           std::span<const std::string> fixed_markers);

}  // namespace rotormesh
