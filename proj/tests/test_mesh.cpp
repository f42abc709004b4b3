#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rotormesh/error.hpp"
#include "rotormesh/generate.hpp"
#include "rotormesh/geometry.hpp"
#include "rotormesh/mesh_io.hpp"
#include "rotormesh/quality.hpp"

using namespace rotormesh;

namespace {

const char* kSquare = R"(NDIME= 2
NELEM= 2
5 0 1 2
5 0 2 3
NPOIN= 4
0 0
1 0
1 1
0 1
NMARK= 1
MARKER_TAG= lower
MARKER_ELEMS= 1
3 0 1
)";

Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  return q.normalized().toRotationMatrix();
}

std::string expect_parse_error(const std::string& text) {
  try {
    parse_mesh(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  ADD_FAILURE() << "no parse error for:\n" << text;
  return {};
}

}  // namespace

TEST(ParseMesh, TwoTriangleSquare) {
  const Mesh m = parse_mesh(kSquare);
  EXPECT_EQ(m.dim(), 2);
  EXPECT_EQ(m.element_count(), 2u);
  EXPECT_EQ(m.point_count(), 4u);
  EXPECT_EQ(m.elements()[1].vertices, (std::vector<Index>{0, 2, 3}));
  EXPECT_EQ(m.points()[2], Vec3(1, 1, 0));
}

TEST(ParseMesh, EmptyElementSectionIsLegal) {
  const Mesh m = parse_mesh("NDIME= 3\nNELEM= 0\nNPOIN= 1\n0 0 0\n");
  EXPECT_EQ(m.element_count(), 0u);
  EXPECT_EQ(m.point_count(), 1u);
}

TEST(ParseMesh, CommentsAndTrailingIndicesIgnored) {
  const Mesh m = parse_mesh("% header\nNDIME= 2 % two\nNELEM= 1\n5 0 1 2 7\nNPOIN= 3\n0 0 0\n1 0 1\n% x\n0 1 2\n");
  EXPECT_EQ(m.elements()[0].vertices, (std::vector<Index>{0, 1, 2}));
  EXPECT_EQ(m.points()[2], Vec3(0, 1, 0));
}

TEST(ParseMesh, ErrorsCarryLineNumbers) {
  EXPECT_NE(expect_parse_error("NDIME= 2\nNELEM= 1\n99 0 1 2\nNPOIN= 3\n0 0\n1 0\n0 1\n")
                .find("line 3: unknown element type 99"),
            std::string::npos);
  EXPECT_NE(expect_parse_error("NDIME= 2\nNELEM= 1\n5 0 1 9\nNPOIN= 3\n0 0\n1 0\n0 1\n")
                .find("line 3: vertex index 9 out of range"),
            std::string::npos);
  EXPECT_NE(expect_parse_error("NDIME= 2\nNELEM= 2\n5 0 1 2\n").find("truncated"), std::string::npos);
  EXPECT_NE(expect_parse_error("NDIME= 2\nBOGUS= 1\n").find("line 2: malformed header"),
            std::string::npos);
  EXPECT_NE(expect_parse_error("NELEM= 0\n").find("malformed header"), std::string::npos);
}

TEST(ParseMesh, RejectsInteriorMarkerFace) {
  const std::string text = std::string(kSquare).replace(std::string(kSquare).find("3 0 1\n"), 6, "3 0 2\n");
  EXPECT_THROW(parse_mesh(text), Error);
}

TEST(MeshIo, RoundTripPreservesEverything) {
  const Mesh a = read_mesh_file(oracle::fixture("meshes/mixed_elements.su2"));
  const Mesh b = parse_mesh(write_mesh(a));
  ASSERT_EQ(a.element_count(), b.element_count());
  for (std::size_t i = 0; i < a.element_count(); ++i) {
    EXPECT_EQ(a.elements()[i].kind, b.elements()[i].kind);
    EXPECT_EQ(a.elements()[i].vertices, b.elements()[i].vertices);
  }
  EXPECT_EQ(a.points(), b.points());
  ASSERT_EQ(a.markers().size(), b.markers().size());
  EXPECT_EQ(a.markers()[1].name, "apex");
}

TEST(WriteVtk, GeometryOnlyAndScalarField) {
  const Mesh m = parse_mesh(kSquare);
  const auto plain = oracle::read_vtk(write_vtk(m));
  EXPECT_EQ(plain.points.size(), 4u);
  EXPECT_EQ(plain.cell_types, (std::vector<int>{5, 5}));
  EXPECT_TRUE(plain.scalars.empty());

  const std::vector<PointField> f{{"height", std::vector<double>{0.5, 1, 2, 3}}};
  const std::string text = write_vtk(m, f);
  EXPECT_NE(text.find("POINT_DATA 4"), std::string::npos);
  const auto g = oracle::read_vtk(text);
  EXPECT_EQ(g.scalars.at("height"), (std::vector<double>{0.5, 1, 2, 3}));
  EXPECT_EQ(g.cells[1], (std::vector<long>{0, 2, 3}));
}

TEST(WriteVtk, CoordinatesSurviveIndependentReader) {
  const Mesh m = generate::spherical_shell(1.0, 2.0, 3, 2);
  std::vector<Vec3> vel(m.point_count());
  for (std::size_t i = 0; i < vel.size(); ++i) vel[i] = m.points()[i] * 0.1;
  const std::vector<PointField> f{{"velocity", vel}};
  const auto g = oracle::read_vtk(write_vtk(m, f));
  ASSERT_EQ(g.points.size(), m.point_count());
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    EXPECT_EQ(g.points[i], m.points()[i]);
    EXPECT_EQ(g.vectors.at("velocity")[i], vel[i]);
  }
}

TEST(WriteVtk, FieldLengthMismatchThrows) {
  const Mesh m = parse_mesh(kSquare);
  const std::vector<PointField> f{{"bad", std::vector<double>{1, 2, 3}}};
  EXPECT_THROW(write_vtk(m, f), Error);
}

TEST(Geometry, UnitCubeAndTet) {
  const Mesh cube = read_mesh_file(oracle::fixture("meshes/unit_cube_hex.su2"));
  const MeshGeometry g = cell_geometry(cube);
  EXPECT_NEAR(g.cells[0].volume, 1.0, 1e-15);
  for (const auto& f : g.faces) {
    EXPECT_NEAR(f.area, 1.0, 1e-15);
    EXPECT_NEAR(f.normal.norm(), 1.0, 1e-15);
  }
  const Mesh tet = read_mesh_file(oracle::fixture("meshes/unit_tet.su2"));
  EXPECT_NEAR(cell_geometry(tet).cells[0].volume, 1.0 / 6.0, 1e-16);
  const Mesh inv = read_mesh_file(oracle::fixture("meshes/inverted_tet.su2"));
  EXPECT_NEAR(cell_geometry(inv).cells[0].volume, -1.0 / 6.0, 1e-16);
  EXPECT_EQ(orthogonality_metrics(inv).negative_volume_count, 1u);
}

TEST(Geometry, BlockVolumesSumToAnalytic) {
  const Mesh box = generate::box_hexes({0, 0.3, 1.1, 2}, {-1, 0, 0.5}, {0, 2, 3.5});
  double v = 0.0;
  for (const auto& c : cell_geometry(box).cells) v += c.volume;
  EXPECT_NEAR(v, 2.0 * 1.5 * 3.5, 1e-10 * 10.5);

  const Mesh mixed = read_mesh_file(oracle::fixture("meshes/mixed_elements.su2"));
  const auto g = cell_geometry(mixed);
  EXPECT_NEAR(g.cells[0].volume, 1.0, 1e-14);
  EXPECT_NEAR(g.cells[1].volume, 1.0 / 6.0, 1e-14);   // pyramid: base 1, height 0.5
  EXPECT_NEAR(g.cells[2].volume, 0.5, 1e-14);         // prism: triangle 0.5, height 1
  EXPECT_NEAR(g.cells[3].volume, 0.5 * 0.8 / 3.0, 1e-14);
}

TEST(Geometry, SharedFaceNormalsAreAntiparallel) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> jitter(-0.08, 0.08);
  const Mesh box = generate::box_hexes({0, 1, 2, 3}, {0, 1, 2}, {0, 1, 2});
  std::vector<Vec3> pts = box.points();
  for (auto& p : pts) p += Vec3(jitter(rng), jitter(rng), jitter(rng));
  const Mesh m = box.with_points(pts);
  const auto g = cell_geometry(m);
  const auto& c = m.connectivity();
  int checked = 0;
  for (std::size_t cell = 0; cell < m.element_count(); ++cell) {
    for (Index f = c.face_offsets[cell]; f < c.face_offsets[cell + 1]; ++f) {
      const Index nb = c.face_neighbor[f];
      if (nb < 0) continue;
      // find the matching face on the neighbour
      for (Index h = c.face_offsets[nb]; h < c.face_offsets[nb + 1]; ++h) {
        if (c.face_neighbor[h] == Index(cell) &&
            (g.faces[h].centroid - g.faces[f].centroid).norm() < 1e-12) {
          EXPECT_LT((g.faces[h].normal + g.faces[f].normal).norm(), 1e-12);
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(Quality, CartesianAndEquilateralAreOrthogonal) {
  EXPECT_DOUBLE_EQ(orthogonality_metrics(generate::box_hexes({0, 1, 2}, {0, 1, 3}, {0, 2})).min_orthogonality_deg, 90.0);
  EXPECT_NEAR(orthogonality_metrics(generate::equilateral_triangles(5)).min_orthogonality_deg, 90.0, 1e-9);
}

TEST(Quality, ShearedBlockGivesShearAngle) {
  const Mesh block = generate::rectangle_quads({0, 0.25, 0.5, 0.75, 1}, {0, 0.25, 0.5, 0.75, 1});
  const Mesh sheared = generate::shear_xy(block, deg_to_rad(45.0));
  EXPECT_NEAR(orthogonality_metrics(sheared).min_orthogonality_deg, 45.0, 0.5);
}

TEST(Quality, TwoTriangleSquareIncludesBoundaryFaces) {
  const QualityReport q = orthogonality_metrics(parse_mesh(kSquare));
  // interior diagonal is exactly orthogonal; the legs see atan(2)
  EXPECT_NEAR(q.min_orthogonality_deg, rad_to_deg(std::atan(2.0)), 1e-12);
  EXPECT_EQ(q.cell_orthogonality_deg.size(), 2u);
}

TEST(Quality, RigidMotionInvariance) {
  std::mt19937_64 rng(11);
  const Mesh base = read_mesh_file(oracle::fixture("meshes/mixed_elements.su2"));
  const QualityReport q0 = orthogonality_metrics(base);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat3 r = random_rotation(rng);
    const Vec3 t(trial, -2.0 * trial, 0.5);
    std::vector<Vec3> pts;
    for (const auto& p : base.points()) pts.push_back(r * p + t);
    const QualityReport q = orthogonality_metrics(base.with_points(pts));
    for (std::size_t c = 0; c < q0.cell_orthogonality_deg.size(); ++c) {
      EXPECT_NEAR(q.cell_orthogonality_deg[c], q0.cell_orthogonality_deg[c], 1e-9);
    }
  }
}

TEST(Quality, EmptyMeshThrows) {
  EXPECT_THROW(orthogonality_metrics(parse_mesh("NDIME= 3\nNELEM= 0\nNPOIN= 1\n0 0 0\n")), Error);
}

TEST(MarkerPoints, SortedUniqueAndUnknown) {
  const Mesh sq = parse_mesh(kSquare);
  EXPECT_EQ(extract_marker_points(sq, "lower").indices, (std::vector<Index>{0, 1}));
  EXPECT_THROW(extract_marker_points(sq, "missing"), Error);
  const Mesh rect = generate::rectangle_quads({0, 1, 2}, {0, 1});
  const auto lower = extract_marker_points(rect, "lower");
  EXPECT_EQ(lower.indices.size(), 3u);
  EXPECT_TRUE(std::is_sorted(lower.indices.begin(), lower.indices.end()));
}

TEST(Mesh, DeformedCopySharesConnectivity) {
  const Mesh m = parse_mesh(kSquare);
  std::vector<Vec3> pts = m.points();
  pts[2].x() = 1.2;
  const Mesh d = m.with_points(pts);
  EXPECT_TRUE(d.shares_connectivity(m));
  EXPECT_EQ(m.points()[2].x(), 1.0);
  EXPECT_THROW(m.with_points({}), Error);
}
