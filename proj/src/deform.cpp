#include "rotormesh/deform.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "rotormesh/error.hpp"
#include "rotormesh/rbf.hpp"

namespace rotormesh {

SurfaceData gather_surface(const Mesh& mesh, const MarkerDisplacements& marker_displacements,
                           std::span<const std::string> fixed_markers) {
  std::map<Index, Vec3> prescribed;
  double scale = 0.0;
  for (const auto& [_, d] : marker_displacements) {
    for (const auto& v : d) scale = std::max(scale, v.norm());
  }
  const double tol = 1e-12 * std::max(scale, 1.0);

  auto add = [&](const std::string& name, Index idx, const Vec3& d) {
    if (!d.allFinite()) throw Error(fmt::format("marker '{}': non-finite displacement", name));
    auto [it, inserted] = prescribed.emplace(idx, d);
    if (!inserted && (it->second - d).norm() > tol) {
      throw Error(fmt::format("marker '{}': point {} is shared with another marker that prescribes "
                              "a different displacement",
                              name, idx));
    }
  };

  for (const auto& [name, disp] : marker_displacements) {
    const MarkerPoints mp = extract_marker_points(mesh, name);
    if (mp.indices.size() != disp.size()) {
      throw Error(fmt::format("marker '{}' has {} points but {} displacements were given", name,
                              mp.indices.size(), disp.size()));
    }
    for (std::size_t i = 0; i < disp.size(); ++i) add(name, mp.indices[i], disp[i]);
  }
  for (const auto& name : fixed_markers) {
    const MarkerPoints mp = extract_marker_points(mesh, name);
    for (Index idx : mp.indices) add(name, idx, Vec3::Zero());
  }

  SurfaceData out;
  out.indices.reserve(prescribed.size());
  out.displacements.reserve(prescribed.size());
  for (const auto& [idx, d] : prescribed) {
    out.indices.push_back(idx);
    out.displacements.push_back(d);
  }
  return out;
}

DeformResult deform_mesh(const Mesh& mesh, const MarkerDisplacements& marker_displacements,
                         std::span<const std::string> fixed_markers, const GreedyOptions& options) {
  const SurfaceData surface = gather_surface(mesh, marker_displacements, fixed_markers);
  if (surface.indices.empty()) throw Error("no prescribed surface points");

  std::vector<Vec3> surface_points;
  surface_points.reserve(surface.indices.size());
  for (Index i : surface.indices) surface_points.push_back(mesh.points()[i]);

  QualityReport before = orthogonality_metrics(mesh, options.exec);
  GreedyResult greedy = greedy_select(surface_points, surface.displacements, options);

  const auto& pts = mesh.points();
  std::vector<Vec3> moved(pts.begin(), pts.end());
  const bool all_zero = std::all_of(surface.displacements.begin(), surface.displacements.end(),
                                    [](const Vec3& d) { return d.isZero(0.0); });
  if (!all_zero) {
    const std::vector<Vec3> field = evaluate_field(greedy.solution, pts, options.exec);
    for (std::size_t i = 0; i < pts.size(); ++i) moved[i] = pts[i] + field[i];
    for (std::size_t k = 0; k < surface.indices.size(); ++k) {
      moved[surface.indices[k]] = pts[surface.indices[k]] + surface.displacements[k];
    }
  }

  Mesh out = mesh.with_points(std::move(moved));
  QualityReport after = orthogonality_metrics(out, options.exec);
  return {std::move(out), std::move(greedy.history), std::move(before), std::move(after)};
}

}  // namespace rotormesh
