#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rotormesh/types.hpp"

namespace rotormesh {

/// Element kinds, numbered with the legacy visualization cell-type codes
/// (also used by the native mesh format).
enum class ElementKind : int {
  line = 3,
  triangle = 5,
  quadrilateral = 9,
  tetrahedron = 10,
  hexahedron = 12,
  prism = 13,
  pyramid = 14,
};

int vertex_count(ElementKind kind);
int topological_dim(ElementKind kind);
std::string_view kind_name(ElementKind kind);
std::optional<ElementKind> kind_from_code(int code);

struct Element {
  ElementKind kind;
  std::vector<Index> vertices;
};

struct Marker {
  std::string name;
  std::vector<Element> faces;
};

/// Local face of a cell: vertex positions within the cell's vertex list,
/// ordered so the right-hand normal points out of a positively oriented cell.
/// In 2D the faces are the cell edges.
struct LocalFace {
  int size;
  int v[4];
};

std::span<const LocalFace> local_faces(ElementKind kind);

/// Immutable connectivity shared between a mesh and its deformed copies.
struct Connectivity {
  int dim = 3;
  std::vector<Element> elements;
  std::vector<Marker> markers;
  /// Faces of cell c occupy [face_offsets[c], face_offsets[c + 1]) in the
  /// flat face arrays; face_neighbor holds the adjacent cell or -1.
  std::vector<Index> face_offsets;
  std::vector<Index> face_neighbor;
};

/// Unstructured mixed-element mesh with named boundary markers.
///
/// Construction validates vertex indices, vertex counts per kind, unique
/// marker names and that every marker face is a boundary face of exactly one
/// element. Points are 3-vectors; 2D meshes carry z = 0.
class Mesh {
 public:
  Mesh(int dim, std::vector<Vec3> points, std::vector<Element> elements,
       std::vector<Marker> markers);

  int dim() const { return conn_->dim; }
  const std::vector<Vec3>& points() const { return points_; }
  std::span<const Element> elements() const { return conn_->elements; }
  std::span<const Marker> markers() const { return conn_->markers; }
  const Connectivity& connectivity() const { return *conn_; }

  std::size_t point_count() const { return points_.size(); }
  std::size_t element_count() const { return conn_->elements.size(); }
  std::size_t face_count() const { return conn_->face_neighbor.size(); }

  bool has_marker(std::string_view name) const;
  /// Throws Error for an unknown name.
  const Marker& marker(std::string_view name) const;

  /// New mesh sharing this mesh's connectivity with a replaced point array.
  Mesh with_points(std::vector<Vec3> points) const;
  bool shares_connectivity(const Mesh& other) const { return conn_ == other.conn_; }

 private:
  Mesh(std::shared_ptr<const Connectivity> conn, std::vector<Vec3> points);

  std::shared_ptr<const Connectivity> conn_;
  std::vector<Vec3> points_;
};

struct MarkerPoints {
  std::vector<Index> indices;  ///< ascending, unique
  std::vector<Vec3> coords;
};

MarkerPoints extract_marker_points(const Mesh& mesh, std::string_view marker);

}  // namespace rotormesh
