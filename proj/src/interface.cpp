#include "rotormesh/interface.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "rotormesh/csv.hpp"
#include "rotormesh/error.hpp"

namespace rotormesh {

Projection fit_projection(std::span<const Vec3> points, int mesh_dim) {
  if (points.empty()) throw Error("interface has no points");
  Vec3 mean = Vec3::Zero();
  for (const auto& p : points) mean += p;
  mean /= double(points.size());
  Mat3 cov = Mat3::Zero();
  for (const auto& p : points) cov += (p - mean) * (p - mean).transpose();
  cov /= double(points.size());
  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  const Vec3 ev = eig.eigenvalues().cwiseMax(0.0);  // ascending
  const double extent = std::sqrt(ev(2));
  if (!(extent > 0.0)) throw Error("interface points are all coincident");

  Projection p;
  p.origin = mean;
  if (mesh_dim == 2) {
    if (std::sqrt(ev(1)) > 1e-9 * extent) throw Error("2D interfaces must be straight lines");
    p.kind = Projection::Kind::linear;
    p.e1 = eig.eigenvectors().col(2);
    p.e2 = Vec3::UnitZ().cross(p.e1);
    return p;
  }
  if (std::sqrt(ev(0)) <= 1e-9 * extent) {
    p.kind = Projection::Kind::planar;
    p.e1 = eig.eigenvectors().col(2);
    p.e2 = eig.eigenvectors().col(1);
    return p;
  }
  double r_min = std::numeric_limits<double>::infinity(), r_max = 0.0, r_sum = 0.0;
  for (const auto& x : points) {
    const double r = std::hypot(x.x(), x.y());
    r_min = std::min(r_min, r);
    r_max = std::max(r_max, r);
    r_sum += r;
  }
  const double r_mean = r_sum / double(points.size());
  if (r_mean > 0.0 && r_max - r_min <= 1e-6 * r_mean) {
    p.kind = Projection::Kind::cylindrical;
    p.origin = Vec3::Zero();
    p.radius = r_mean;
    return p;
  }
  throw Error("interface is neither planar nor a cylinder about the z axis");
}

InterfacePair interface_face_sets(const Mesh& mesh, std::string_view marker_a,
                                  std::string_view marker_b) {
  const Marker& ma = mesh.marker(marker_a);
  const Marker& mb = mesh.marker(marker_b);
  std::vector<Vec3> all;
  for (const Marker* m : {&ma, &mb}) {
    for (Index i : extract_marker_points(mesh, m->name).indices) all.push_back(mesh.points()[i]);
  }
  const Projection proj = fit_projection(all, mesh.dim());

  auto faces_of = [&](const Marker& m) {
    std::vector<std::vector<Vec3>> faces;
    for (const auto& f : m.faces) {
      std::vector<Vec3> poly;
      for (Index v : f.vertices) poly.push_back(mesh.points()[v]);
      faces.push_back(std::move(poly));
    }
    return faces;
  };
  return {make_face_set(ma.name, proj, faces_of(ma)), make_face_set(mb.name, proj, faces_of(mb))};
}

InterfaceReport summarize_interface(const Supermesh& sm, const InterfacePair& pair) {
  InterfaceReport r;
  r.a_faces = pair.a.face_count();
  r.b_faces = pair.b.face_count();
  r.supermesh_faces = sm.faces.size();
  r.min_weight_sum = std::numeric_limits<double>::infinity();
  r.max_weight_sum = -std::numeric_limits<double>::infinity();
  r.min_donors = std::numeric_limits<std::size_t>::max();
  for (std::size_t a = 0; a < r.a_faces; ++a) {
    const double s = sm.weight_sum(a);
    r.min_weight_sum = std::min(r.min_weight_sum, s);
    r.max_weight_sum = std::max(r.max_weight_sum, s);
    if (s < 1.0 - 1e-9) ++r.partially_covered;
    if (sm.donors_a[a].empty()) ++r.uncovered;
    r.min_donors = std::min(r.min_donors, sm.donors_a[a].size());
    r.max_donors = std::max(r.max_donors, sm.donors_a[a].size());
  }
  for (double v : sm.area_a) r.area_a += v;
  for (double v : sm.area_b) r.area_b += v;
  r.supermesh_area = sm.total_area();
  r.reoriented_a = pair.a.reoriented;
  r.reoriented_b = pair.b.reoriented;
  r.projection = std::string(projection_name(pair.a.projection.kind));
  return r;
}

std::string InterfaceReport::text() const {
  std::string s;
  s += fmt::format("projection: {}\n", projection);
  s += fmt::format("A faces: {}  B faces: {}  supermesh faces: {}\n", a_faces, b_faces, supermesh_faces);
  s += fmt::format("A measure: {}  B measure: {}  supermesh measure: {}\n", format_number(area_a),
                   format_number(area_b), format_number(supermesh_area));
  s += fmt::format("weight sum per A face: min {} max {}\n", format_number(min_weight_sum),
                   format_number(max_weight_sum));
  s += fmt::format("max |1 - weight sum|: {}\n",
                   format_number(std::max(std::abs(1.0 - min_weight_sum), std::abs(max_weight_sum - 1.0))));
  s += fmt::format("donors per A face: {}..{}\n", min_donors, max_donors);
  s += fmt::format("partially covered A faces: {}  uncovered: {}\n", partially_covered, uncovered);
  if (reoriented_a || reoriented_b) {
    s += fmt::format("warning: reoriented {} A faces and {} B faces\n", reoriented_a, reoriented_b);
  }
  return s;
}

}  // namespace rotormesh
