#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "rotormesh/exec.hpp"
#include "rotormesh/types.hpp"

namespace rotormesh {

using Polygon = std::vector<Vec2>;

/// Shoelace area, positive for counterclockwise vertex order.
double signed_area(const Polygon& poly);
/// Absolute shoelace area.
double polygon_area(const Polygon& poly);
/// Cross-product sign test; collinear consecutive vertices are tolerated.
bool is_convex(const Polygon& poly);

/// Intersection of two convex polygons (either orientation). The result is
/// counterclockwise without repeated vertices, or empty when the overlap has
/// no area. Throws Error if either input is not convex.
Polygon clip_convex(const Polygon& a, const Polygon& b);

using Triangle = std::array<Vec2, 3>;

/// Fan from vertex 0. Throws Error for fewer than three vertices.
std::vector<Triangle> triangulate(const Polygon& poly);

/// Maps interface geometry to the common 2D (or 1D) parameter space where
/// faces are intersected, and back for output.
struct Projection {
  enum class Kind { planar, cylindrical, linear };
  Kind kind = Kind::planar;
  Vec3 origin = Vec3::Zero();
  Vec3 e1 = Vec3::UnitX();  ///< planar/linear: in-plane axes; cylindrical: unused
  Vec3 e2 = Vec3::UnitY();
  double radius = 1.0;      ///< cylindrical about +z through origin

  /// Planar: (x.e1, x.e2). Cylindrical: (radius * phi, z). Linear: (x.e1, 0).
  Vec2 project(const Vec3& x) const;
  Vec3 lift(const Vec2& p) const;
  int measure_dim() const { return kind == Kind::linear ? 1 : 2; }
};

std::string_view projection_name(Projection::Kind kind);

/// One side of an interface in projected coordinates. A parent face may be
/// stored as several convex pieces (non-convex quads are split).
struct InterfaceFaceSet {
  std::string side;
  Projection projection;
  std::vector<Polygon> pieces;       ///< counterclockwise; linear: 2 points with y = 0
  std::vector<Index> piece_parent;
  std::vector<double> parent_measure;  ///< projected area (or length) per parent face
  std::vector<Vec2> parent_centroid;
  int reoriented = 0;  ///< faces flipped to match the majority orientation

  std::size_t face_count() const { return parent_measure.size(); }
};

/// Builds a face set from projected parent polygons (each simple, any
/// orientation). Cylindrical parents are unwrapped so they do not straddle
/// the seam. Throws Error for empty input or zero-measure faces.
InterfaceFaceSet make_face_set(std::string side, const Projection& projection,
                               const std::vector<std::vector<Vec3>>& faces);

struct SupermeshFace {
  Index a = 0;
  Index b = 0;
  double area = 0.0;    ///< length for 1D interfaces
  double weight = 0.0;  ///< area / measure(A face)
  std::vector<Polygon> polygons;  ///< projected intersection pieces
};

struct Supermesh {
  Projection projection;
  std::vector<SupermeshFace> faces;  ///< sorted by (a, b)
  std::vector<double> area_a;
  std::vector<double> area_b;
  std::vector<std::vector<std::size_t>> donors_a;  ///< face indices per A face
  std::vector<std::vector<std::size_t>> donors_b;

  double weight_sum(std::size_t a) const;
  /// 1 - weight_sum, the uncovered fraction of an A face (not renormalized).
  double deficit(std::size_t a) const { return 1.0 - weight_sum(a); }
  double total_area() const;
  /// CSV `a_face,b_face,area,weight`.
  std::string to_csv() const;
  /// Legacy unstructured-grid file of the lifted intersection polygons.
  std::string to_vtk() const;
};

/// Intersects every A piece with every overlapping B piece. The parallel path
/// finds candidates through a uniform bin grid; the serial path checks all
/// pairs. Both give the same faces bitwise.
Supermesh build_supermesh(const InterfaceFaceSet& side_a, const InterfaceFaceSet& side_b,
                          Exec exec = Exec::parallel);

/// Per-A-face sum of W * value over its donors. Throws Error on a length
/// mismatch with the B face count.
std::vector<double> weighted_exchange(const Supermesh& mesh, std::span<const double> values_b);

}  // namespace rotormesh
