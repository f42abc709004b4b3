#include "rotormesh/quality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rotormesh/error.hpp"

namespace rotormesh {

double angle_between_deg(const Vec3& a, const Vec3& b) {
  return rad_to_deg(std::atan2(a.cross(b).norm(), a.dot(b)));
}

QualityReport orthogonality_metrics(const Mesh& mesh, Exec exec) {
  return orthogonality_metrics(mesh, cell_geometry(mesh, exec), exec);
}

QualityReport orthogonality_metrics(const Mesh& mesh, const MeshGeometry& geometry, Exec exec) {
  const auto ncells = static_cast<Index>(mesh.element_count());
  if (ncells == 0) throw Error("orthogonality metrics need at least one cell");
  const auto& conn = mesh.connectivity();

  QualityReport report;
  report.cell_orthogonality_deg.resize(static_cast<std::size_t>(ncells));

  auto one_cell = [&](Index c) {
    double worst = 90.0;
    const Vec3& centroid = geometry.cells[c].centroid;
    for (Index s = conn.face_offsets[c]; s < conn.face_offsets[c + 1]; ++s) {
      const FaceGeometry& f = geometry.faces[s];
      const Index nb = conn.face_neighbor[s];
      const Vec3 d = nb >= 0 ? Vec3(geometry.cells[nb].centroid - centroid)
                             : Vec3(f.centroid - centroid);
      double theta = 0.0;
      if (f.area > 0.0 && d.squaredNorm() > 0.0) {
        theta = std::clamp(90.0 - angle_between_deg(f.normal, d), 0.0, 90.0);
      }
      worst = std::min(worst, theta);
    }
    report.cell_orthogonality_deg[c] = worst;
  };

  if (exec == Exec::serial) {
    for (Index c = 0; c < ncells; ++c) one_cell(c);
  } else {
#pragma omp parallel for schedule(static)
    for (Index c = 0; c < ncells; ++c) one_cell(c);
  }

  report.min_orthogonality_deg =
      *std::min_element(report.cell_orthogonality_deg.begin(), report.cell_orthogonality_deg.end());
  report.min_volume = std::numeric_limits<double>::infinity();
  for (const auto& cg : geometry.cells) {
    report.min_volume = std::min(report.min_volume, cg.volume);
    if (cg.volume <= 0.0) ++report.negative_volume_count;
  }
  return report;
}

}  // namespace rotormesh
