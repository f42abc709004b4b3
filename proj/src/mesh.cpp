#include "rotormesh/mesh.hpp"

#include <algorithm>
#include <array>
#include <set>

#include <fmt/format.h>

#include "rotormesh/error.hpp"

namespace rotormesh {
namespace {

constexpr LocalFace kTriangleEdges[] = {{2, {0, 1}}, {2, {1, 2}}, {2, {2, 0}}};
constexpr LocalFace kQuadEdges[] = {{2, {0, 1}}, {2, {1, 2}}, {2, {2, 3}}, {2, {3, 0}}};
constexpr LocalFace kTetFaces[] = {
    {3, {0, 2, 1}}, {3, {0, 1, 3}}, {3, {1, 2, 3}}, {3, {0, 3, 2}}};
constexpr LocalFace kHexFaces[] = {
    {4, {0, 3, 2, 1}}, {4, {4, 5, 6, 7}}, {4, {0, 1, 5, 4}},
    {4, {1, 2, 6, 5}}, {4, {2, 3, 7, 6}}, {4, {3, 0, 4, 7}}};
constexpr LocalFace kPrismFaces[] = {
    {3, {0, 1, 2}}, {3, {3, 5, 4}}, {4, {0, 3, 4, 1}}, {4, {1, 4, 5, 2}}, {4, {2, 5, 3, 0}}};
constexpr LocalFace kPyramidFaces[] = {
    {4, {0, 3, 2, 1}}, {3, {0, 1, 4}}, {3, {1, 2, 4}}, {3, {2, 3, 4}}, {3, {3, 0, 4}}};

using FaceKey = std::array<Index, 4>;

FaceKey make_key(std::span<const Index> verts) {
  FaceKey key{-1, -1, -1, -1};
  std::copy(verts.begin(), verts.end(), key.begin());
  std::sort(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(verts.size()));
  return key;
}

struct KeyedFace {
  FaceKey key;
  Index slot;
};

}  // namespace

int vertex_count(ElementKind kind) {
  switch (kind) {
    case ElementKind::line: return 2;
    case ElementKind::triangle: return 3;
    case ElementKind::quadrilateral: return 4;
    case ElementKind::tetrahedron: return 4;
    case ElementKind::hexahedron: return 8;
    case ElementKind::prism: return 6;
    case ElementKind::pyramid: return 5;
  }
  return 0;
}

int topological_dim(ElementKind kind) {
  switch (kind) {
    case ElementKind::line: return 1;
    case ElementKind::triangle:
    case ElementKind::quadrilateral: return 2;
    default: return 3;
  }
}

std::string_view kind_name(ElementKind kind) {
  switch (kind) {
    case ElementKind::line: return "line";
    case ElementKind::triangle: return "triangle";
    case ElementKind::quadrilateral: return "quadrilateral";
    case ElementKind::tetrahedron: return "tetrahedron";
    case ElementKind::hexahedron: return "hexahedron";
    case ElementKind::prism: return "prism";
    case ElementKind::pyramid: return "pyramid";
  }
  return "unknown";
}

std::optional<ElementKind> kind_from_code(int code) {
  switch (code) {
    case 3: case 5: case 9: case 10: case 12: case 13: case 14:
      return static_cast<ElementKind>(code);
    default:
      return std::nullopt;
  }
}

std::span<const LocalFace> local_faces(ElementKind kind) {
  switch (kind) {
    case ElementKind::line: return {};
    case ElementKind::triangle: return kTriangleEdges;
    case ElementKind::quadrilateral: return kQuadEdges;
    case ElementKind::tetrahedron: return kTetFaces;
    case ElementKind::hexahedron: return kHexFaces;
    case ElementKind::prism: return kPrismFaces;
    case ElementKind::pyramid: return kPyramidFaces;
  }
  return {};
}

Mesh::Mesh(int dim, std::vector<Vec3> points, std::vector<Element> elements,
           std::vector<Marker> markers) {
  if (dim != 2 && dim != 3) throw Error(fmt::format("mesh dimension must be 2 or 3, got {}", dim));
  const auto npoints = static_cast<Index>(points.size());

  auto check_element = [&](const Element& e, int want_dim, const std::string& where) {
    if (static_cast<int>(e.vertices.size()) != vertex_count(e.kind)) {
      throw Error(fmt::format("{}: {} needs {} vertices, got {}", where, kind_name(e.kind),
                              vertex_count(e.kind), e.vertices.size()));
    }
    if (topological_dim(e.kind) != want_dim) {
      throw Error(fmt::format("{}: {} is not valid in a {}D mesh", where, kind_name(e.kind), dim));
    }
    for (Index v : e.vertices) {
      if (v < 0 || v >= npoints) {
        throw Error(fmt::format("{}: vertex index {} out of range [0, {})", where, v, npoints));
      }
    }
  };

  for (std::size_t i = 0; i < elements.size(); ++i) {
    check_element(elements[i], dim, fmt::format("element {}", i));
  }
  std::set<std::string, std::less<>> names;
  for (const auto& m : markers) {
    if (!names.insert(m.name).second) throw Error(fmt::format("duplicate marker name '{}'", m.name));
    for (std::size_t i = 0; i < m.faces.size(); ++i) {
      check_element(m.faces[i], dim - 1, fmt::format("marker '{}' face {}", m.name, i));
    }
  }

  auto conn = std::make_shared<Connectivity>();
  conn->dim = dim;

  // Pair cell faces by their sorted vertex sets.
  std::vector<KeyedFace> keyed;
  conn->face_offsets.reserve(elements.size() + 1);
  conn->face_offsets.push_back(0);
  for (const auto& e : elements) {
    for (const auto& lf : local_faces(e.kind)) {
      Index verts[4];
      for (int k = 0; k < lf.size; ++k) verts[k] = e.vertices[lf.v[k]];
      keyed.push_back({make_key({verts, static_cast<std::size_t>(lf.size)}),
                       static_cast<Index>(keyed.size())});
    }
    conn->face_offsets.push_back(static_cast<Index>(keyed.size()));
  }
  std::vector<Index> slot_cell(keyed.size());
  for (std::size_t c = 0; c < elements.size(); ++c) {
    for (Index s = conn->face_offsets[c]; s < conn->face_offsets[c + 1]; ++s) {
      slot_cell[s] = static_cast<Index>(c);
    }
  }
  std::sort(keyed.begin(), keyed.end(), [](const KeyedFace& a, const KeyedFace& b) {
    return a.key < b.key || (a.key == b.key && a.slot < b.slot);
  });
  conn->face_neighbor.assign(keyed.size(), -1);
  for (std::size_t i = 0; i < keyed.size();) {
    std::size_t j = i + 1;
    while (j < keyed.size() && keyed[j].key == keyed[i].key) ++j;
    if (j - i > 2) {
      throw Error(fmt::format("non-manifold face shared by {} elements (element {})", j - i,
                              slot_cell[keyed[i].slot]));
    }
    if (j - i == 2) {
      conn->face_neighbor[keyed[i].slot] = slot_cell[keyed[i + 1].slot];
      conn->face_neighbor[keyed[i + 1].slot] = slot_cell[keyed[i].slot];
    }
    i = j;
  }

  for (const auto& m : markers) {
    for (std::size_t i = 0; i < m.faces.size(); ++i) {
      const FaceKey key = make_key(m.faces[i].vertices);
      auto lo = std::lower_bound(keyed.begin(), keyed.end(), key,
                                 [](const KeyedFace& f, const FaceKey& k) { return f.key < k; });
      auto hi = lo;
      while (hi != keyed.end() && hi->key == key) ++hi;
      if (hi - lo != 1) {
        throw Error(fmt::format("marker '{}' face {} is {}", m.name, i,
                                hi == lo ? "not a face of any element" : "an interior face"));
      }
    }
  }

  conn->elements = std::move(elements);
  conn->markers = std::move(markers);
  conn_ = std::move(conn);
  points_ = std::move(points);
}

Mesh::Mesh(std::shared_ptr<const Connectivity> conn, std::vector<Vec3> points)
    : conn_(std::move(conn)), points_(std::move(points)) {}

bool Mesh::has_marker(std::string_view name) const {
  return std::any_of(conn_->markers.begin(), conn_->markers.end(),
                     [&](const Marker& m) { return m.name == name; });
}

const Marker& Mesh::marker(std::string_view name) const {
  for (const auto& m : conn_->markers) {
    if (m.name == name) return m;
  }
  throw Error(fmt::format("unknown marker '{}'", name));
}

Mesh Mesh::with_points(std::vector<Vec3> points) const {
  if (points.size() != points_.size()) {
    throw Error(fmt::format("point count mismatch: mesh has {}, got {}", points_.size(),
                            points.size()));
  }
  return Mesh(conn_, std::move(points));
}

MarkerPoints extract_marker_points(const Mesh& mesh, std::string_view marker) {
  const Marker& m = mesh.marker(marker);
  MarkerPoints out;
  for (const auto& f : m.faces) {
    out.indices.insert(out.indices.end(), f.vertices.begin(), f.vertices.end());
  }
  std::sort(out.indices.begin(), out.indices.end());
  out.indices.erase(std::unique(out.indices.begin(), out.indices.end()), out.indices.end());
  out.coords.reserve(out.indices.size());
  for (Index i : out.indices) out.coords.push_back(mesh.points()[i]);
  return out;
}

}  // namespace rotormesh
