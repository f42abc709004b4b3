#include "rotormesh/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace rotormesh {
namespace {

struct Tri {
  Index a, b, c;
};

/// Triangles of a face in the same diagonal split used for both area and
/// volume so shared faces decompose identically from either side.
int split_face(std::span<const Index> v, Tri out[2]) {
  if (v.size() == 3) {
    out[0] = {v[0], v[1], v[2]};
    return 1;
  }
  const auto k = static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
  const Index a = v[k], b = v[(k + 1) % 4], c = v[(k + 2) % 4], d = v[(k + 3) % 4];
  out[0] = {a, b, c};
  out[1] = {a, c, d};
  return 2;
}

Vec3 vertex_average(std::span<const Vec3> points, const Element& cell) {
  Vec3 c = Vec3::Zero();
  for (Index v : cell.vertices) c += points[v];
  return c / static_cast<double>(cell.vertices.size());
}

}  // namespace

double tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).cross(c - a).dot(d - a) / 6.0;
}

FaceGeometry edge_geometry(const Vec3& a, const Vec3& b) {
  FaceGeometry g;
  const Vec3 t = b - a;
  g.area = t.norm();
  if (g.area > 0.0) g.normal = Vec3(t.y(), -t.x(), 0.0) / g.area;
  g.centroid = 0.5 * (a + b);
  return g;
}

FaceGeometry face_geometry(std::span<const Vec3> points, std::span<const Index> vertices) {
  Tri tris[2];
  const int nt = split_face(vertices, tris);
  FaceGeometry g;
  Vec3 normal_sum = Vec3::Zero();
  Vec3 weighted = Vec3::Zero();
  for (int t = 0; t < nt; ++t) {
    const Vec3& p0 = points[tris[t].a];
    const Vec3& p1 = points[tris[t].b];
    const Vec3& p2 = points[tris[t].c];
    const Vec3 area_vec = 0.5 * (p1 - p0).cross(p2 - p0);
    const double area = area_vec.norm();
    g.area += area;
    if (area > 0.0) normal_sum += area_vec / area;
    weighted += area * (p0 + p1 + p2) / 3.0;
  }
  const double n = normal_sum.norm();
  if (n > 0.0) g.normal = normal_sum / n;
  if (g.area > 0.0) {
    g.centroid = weighted / g.area;
  } else {
    for (Index v : vertices) g.centroid += points[v];
    g.centroid /= static_cast<double>(vertices.size());
  }
  return g;
}

CellGeometry cell_geometry(std::span<const Vec3> points, const Element& cell, int dim) {
  const Vec3 apex = vertex_average(points, cell);
  CellGeometry g;
  Vec3 moment = Vec3::Zero();

  if (dim == 2) {
    for (const auto& lf : local_faces(cell.kind)) {
      const Vec3& a = points[cell.vertices[lf.v[0]]];
      const Vec3& b = points[cell.vertices[lf.v[1]]];
      const Vec3 ea = a - apex, eb = b - apex;
      const double area = 0.5 * (ea.x() * eb.y() - ea.y() * eb.x());
      g.volume += area;
      moment += area * (a + b + apex) / 3.0;
    }
  } else {
    Index verts[4];
    Tri tris[2];
    for (const auto& lf : local_faces(cell.kind)) {
      for (int k = 0; k < lf.size; ++k) verts[k] = cell.vertices[lf.v[k]];
      const int nt = split_face({verts, static_cast<std::size_t>(lf.size)}, tris);
      for (int t = 0; t < nt; ++t) {
        const Vec3& a = points[tris[t].a];
        const Vec3& b = points[tris[t].b];
        const Vec3& c = points[tris[t].c];
        // outward face triangle, apex inside: positive sub-volume
        const double v = tet_volume(apex, a, b, c);
        g.volume += v;
        moment += v * (a + b + c + apex) / 4.0;
      }
    }
  }
  g.centroid = std::abs(g.volume) > 0.0 ? Vec3(moment / g.volume) : apex;
  return g;
}

MeshGeometry cell_geometry(const Mesh& mesh, Exec exec) {
  const auto& conn = mesh.connectivity();
  const auto& points = mesh.points();
  const auto ncells = static_cast<Index>(mesh.element_count());
  const int dim = mesh.dim();

  MeshGeometry out;
  out.cells.resize(static_cast<std::size_t>(ncells));
  out.faces.resize(mesh.face_count());

  auto one_cell = [&](Index c) {
    const Element& e = conn.elements[c];
    out.cells[c] = cell_geometry(points, e, dim);
    Index slot = conn.face_offsets[c];
    Index verts[4];
    for (const auto& lf : local_faces(e.kind)) {
      if (dim == 2) {
        out.faces[slot] = edge_geometry(points[e.vertices[lf.v[0]]], points[e.vertices[lf.v[1]]]);
      } else {
        for (int k = 0; k < lf.size; ++k) verts[k] = e.vertices[lf.v[k]];
        out.faces[slot] = face_geometry(points, {verts, static_cast<std::size_t>(lf.size)});
      }
      ++slot;
    }
  };

  if (exec == Exec::serial) {
    for (Index c = 0; c < ncells; ++c) one_cell(c);
  } else {
#pragma omp parallel for schedule(static)
    for (Index c = 0; c < ncells; ++c) one_cell(c);
  }
  return out;
}

}  // namespace rotormesh
