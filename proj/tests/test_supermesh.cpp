#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rotormesh/error.hpp"
#include "rotormesh/interface.hpp"
#include "rotormesh/mesh_io.hpp"
#include "rotormesh/supermesh.hpp"

using namespace rotormesh;

namespace {

Polygon rect(double x0, double y0, double x1, double y1) {
  return {Vec2(x0, y0), Vec2(x1, y0), Vec2(x1, y1), Vec2(x0, y1)};
}

std::vector<Vec3> lift(const Polygon& p) {
  std::vector<Vec3> out;
  for (const auto& v : p) out.emplace_back(v.x(), v.y(), 0.0);
  return out;
}

/// n x n grid of squares on [0,1]^2, optionally rotated by `angle` about the
/// origin and translated by `shift`.
InterfaceFaceSet grid(const std::string& side, int n, double angle = 0.0,
                      Vec2 shift = Vec2::Zero()) {
  const Eigen::Rotation2Dd rot(angle);
  std::vector<std::vector<Vec3>> faces;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      Polygon p = rect(double(i) / n, double(j) / n, double(i + 1) / n, double(j + 1) / n);
      for (auto& v : p) v = rot * v + shift;
      faces.push_back(lift(p));
    }
  }
  return make_face_set(side, Projection{}, faces);
}

InterfaceFaceSet single(const std::string& side, std::vector<Polygon> polys) {
  std::vector<std::vector<Vec3>> faces;
  for (const auto& p : polys) faces.push_back(lift(p));
  return make_face_set(side, Projection{}, faces);
}

Polygon convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(),
            [](const Vec2& a, const Vec2& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
  auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a - o).x() * (b - o).y() - (a - o).y() * (b - o).x();
  };
  Polygon h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i - 1]) <= 0) --k;
    h[k++] = pts[i - 1];
  }
  h.resize(k - 1);
  return h;
}

void bbox(const Polygon& p, Vec2& lo, Vec2& hi) {
  lo = hi = p[0];
  for (const auto& v : p) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
}

}  // namespace

TEST(Area, Examples) {
  EXPECT_EQ(polygon_area(rect(0, 0, 1, 1)), 1.0);
  EXPECT_EQ(polygon_area({Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}), 0.5);
  EXPECT_EQ(polygon_area({Vec2(0, 0), Vec2(1, 1), Vec2(2, 2)}), 0.0);
  Polygon cw = rect(0, 0, 2, 1);
  std::reverse(cw.begin(), cw.end());
  EXPECT_EQ(signed_area(cw), -2.0);
  EXPECT_EQ(polygon_area(cw), 2.0);
}

TEST(Clip, Examples) {
  EXPECT_NEAR(polygon_area(clip_convex(rect(0, 0, 1, 1), rect(0, 0, 1, 1))), 1.0, 1e-15);
  const Polygon half = clip_convex(rect(0, 0, 1, 1), rect(0.5, 0, 1.5, 1));
  EXPECT_NEAR(polygon_area(half), 0.5, 1e-15);
  EXPECT_GT(signed_area(half), 0.0);
  for (const auto& v : half) EXPECT_GE(v.x(), 0.5 - 1e-15);
  EXPECT_TRUE(clip_convex(rect(0, 0, 1, 1), rect(2, 2, 3, 3)).empty());
  // Touching along an edge has no area.
  EXPECT_TRUE(clip_convex(rect(0, 0, 1, 1), rect(1, 0, 2, 1)).empty());
}

TEST(Clip, NonConvexRejected) {
  const Polygon dart{Vec2(0, 0), Vec2(2, 0), Vec2(1, 0.3), Vec2(1, 2)};
  EXPECT_FALSE(is_convex(dart));
  EXPECT_THROW(clip_convex(dart, rect(0, 0, 1, 1)), Error);
  EXPECT_THROW(clip_convex(rect(0, 0, 1, 1), dart), Error);
}

TEST(Triangulate, Examples) {
  const Polygon tri{Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
  const auto t1 = triangulate(tri);
  ASSERT_EQ(t1.size(), 1u);
  EXPECT_EQ(t1[0][1], tri[1]);
  const auto t2 = triangulate(rect(0, 0, 1, 1));
  ASSERT_EQ(t2.size(), 2u);
  for (const auto& t : t2) EXPECT_NEAR(polygon_area({t[0], t[1], t[2]}), 0.5, 1e-15);
  Polygon hex;
  for (int k = 0; k < 6; ++k) hex.emplace_back(std::cos(k * kPi / 3), std::sin(k * kPi / 3));
  const auto t3 = triangulate(hex);
  ASSERT_EQ(t3.size(), 4u);
  double sum = 0.0;
  for (const auto& t : t3) sum += polygon_area({t[0], t[1], t[2]});
  EXPECT_NEAR(sum, 3 * std::sqrt(3.0) / 2, 1e-12);
  EXPECT_THROW(triangulate({Vec2(0, 0), Vec2(1, 0)}), Error);
}

TEST(Clip, RandomPairsMatchMonteCarlo) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> count(3, 9);
  int outliers = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Vec2> pa, pb;
    const Vec2 off(0.6 * u(rng) - 0.3, 0.6 * u(rng) - 0.3);
    for (int i = count(rng); i > 0; --i) pa.emplace_back(u(rng), u(rng));
    for (int i = count(rng); i > 0; --i) pb.push_back(Vec2(u(rng), u(rng)) * 0.8 + off);
    const Polygon a = convex_hull(pa), b = convex_hull(pb);
    if (a.size() < 3 || b.size() < 3) continue;
    const double area = polygon_area(clip_convex(a, b));
    // Sample the overlap of the two bounding boxes.
    Vec2 lo_a, hi_a, lo_b, hi_b;
    bbox(a, lo_a, hi_a);
    bbox(b, lo_b, hi_b);
    const Vec2 lo = lo_a.cwiseMax(lo_b), hi = hi_a.cwiseMin(hi_b);
    if ((hi - lo).minCoeff() <= 0.0) {
      EXPECT_EQ(area, 0.0);
      continue;
    }
    const std::size_t samples = 20000;
    const auto mc = oracle::mc_area({a, b}, lo, hi, samples, 7 + trial);
    // With no hits or no misses the binomial estimate collapses to zero;
    // one sample's worth of area is then the resolution of the estimate.
    const double sigma = std::max(mc.std_error, (hi - lo).prod() / double(samples));
    if (std::abs(area - mc.value) > 3 * sigma) ++outliers;
    EXPECT_LE(std::abs(area - mc.value), 5 * sigma) << "trial " << trial;
  }
  // At 3 standard errors about 0.27% of honest estimates fall outside.
  EXPECT_LE(outliers, 8);
  RecordProperty("three_sigma_outliers", outliers);
}

TEST(Supermesh, IdenticalSquare) {
  const auto a = single("A", {rect(0, 0, 1, 1)});
  const auto sm = build_supermesh(a, single("B", {rect(0, 0, 1, 1)}));
  ASSERT_EQ(sm.faces.size(), 1u);
  EXPECT_NEAR(sm.faces[0].weight, 1.0, 1e-15);
}

TEST(Supermesh, TwoHalfSquaresAndExchange) {
  const auto a = single("A", {rect(0, 0, 1, 1)});
  const auto b = single("B", {rect(0, 0, 0.5, 1), rect(0.5, 0, 1, 1)});
  const auto sm = build_supermesh(a, b);
  ASSERT_EQ(sm.faces.size(), 2u);
  EXPECT_NEAR(sm.faces[0].weight, 0.5, 1e-15);
  EXPECT_NEAR(sm.faces[1].weight, 0.5, 1e-15);
  const std::vector<double> v{3.0, -1.0};
  EXPECT_NEAR(weighted_exchange(sm, v)[0], 1.0, 1e-15);
  const std::vector<double> wrong{1.0};
  EXPECT_THROW(weighted_exchange(sm, wrong), Error);
}

TEST(Supermesh, FourByFourAgainstFiveByFive) {
  const auto a = grid("A", 4), b = grid("B", 5);
  const auto sm = build_supermesh(a, b);
  for (std::size_t f = 0; f < a.face_count(); ++f) EXPECT_NEAR(sm.weight_sum(f), 1.0, 1e-9);
  EXPECT_NEAR(sm.total_area(), 1.0, 1e-9);

  // Every intersection area against an independent Monte-Carlo estimate.
  double mc_total = 0.0, var_total = 0.0;
  for (const auto& f : sm.faces) {
    const Polygon& pa = a.pieces[f.a];
    const Polygon& pb = b.pieces[f.b];
    Vec2 lo, hi;
    bbox(pa, lo, hi);
    const auto mc = oracle::mc_area({pa, pb}, lo, hi, 1000000 / sm.faces.size() + 1, 100 + f.a * 31 + f.b);
    mc_total += mc.value;
    var_total += mc.std_error * mc.std_error;
  }
  EXPECT_LE(std::abs(mc_total - sm.total_area()), 3 * std::sqrt(var_total));

  // Constants are reproduced on fully covered faces.
  const std::vector<double> c(b.face_count(), 2.5);
  for (double v : weighted_exchange(sm, c)) EXPECT_NEAR(v, 2.5, 1e-12);
}

TEST(Supermesh, PartialCoverageReportsDeficit) {
  const auto a = grid("A", 2);
  const auto b = single("B", {rect(0, 0, 0.75, 1)});
  const auto sm = build_supermesh(a, b);
  EXPECT_NEAR(sm.weight_sum(0), 1.0, 1e-12);
  EXPECT_NEAR(sm.weight_sum(1), 0.5, 1e-12);
  EXPECT_NEAR(sm.deficit(1), 0.5, 1e-12);
  for (std::size_t f = 0; f < a.face_count(); ++f) EXPECT_LE(sm.weight_sum(f), 1.0 + 1e-9);
}

TEST(Supermesh, SymmetryAndConservation) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto a = grid("A", 6), b = grid("B", 7, 0.0);
  const auto sm = build_supermesh(a, b);
  double sum_a = 0.0, sum_b = 0.0;
  for (const auto& d : sm.donors_a) for (auto i : d) sum_a += sm.faces[i].area;
  for (const auto& d : sm.donors_b) for (auto i : d) sum_b += sm.faces[i].area;
  EXPECT_NEAR(sum_a, sum_b, 1e-12 * sum_a);

  std::vector<double> vb(b.face_count());
  for (auto& v : vb) v = u(rng);
  const auto va = weighted_exchange(sm, vb);
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) lhs += sm.area_a[i] * va[i];
  std::vector<double> covered(b.face_count(), 0.0);
  for (const auto& f : sm.faces) covered[f.b] += f.area;
  for (std::size_t j = 0; j < vb.size(); ++j) rhs += covered[j] * vb[j];
  EXPECT_NEAR(lhs, rhs, 1e-9 * std::max(1.0, std::abs(rhs)));
}

TEST(Supermesh, RigidMotionInvariance) {
  const auto ref = build_supermesh(grid("A", 4), grid("B", 5));
  for (double angle : {0.3, 1.1, -2.0}) {
    const Vec2 shift(3.7, -12.25);
    const auto moved = build_supermesh(grid("A", 4, angle, shift), grid("B", 5, angle, shift));
    ASSERT_EQ(moved.faces.size(), ref.faces.size());
    for (std::size_t i = 0; i < ref.faces.size(); ++i) {
      EXPECT_EQ(moved.faces[i].a, ref.faces[i].a);
      EXPECT_EQ(moved.faces[i].b, ref.faces[i].b);
      EXPECT_NEAR(moved.faces[i].weight, ref.faces[i].weight, 1e-12);
    }
  }
}

TEST(Supermesh, LinearFieldErrorHalvesUnderRefinement) {
  const auto a = grid("A", 3);
  auto p = [](const Vec2& x) { return 1.0 + 2.0 * x.x() - 3.0 * x.y(); };
  std::vector<double> errors;
  for (int n : {4, 8, 16, 32, 64}) {
    const auto b = grid("B", n);
    std::vector<double> vb;
    for (const auto& c : b.parent_centroid) vb.push_back(p(c));
    const auto va = weighted_exchange(build_supermesh(a, b), vb);
    double e = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) e = std::max(e, std::abs(va[i] - p(a.parent_centroid[i])));
    errors.push_back(e);
  }
  for (std::size_t i = 1; i < errors.size(); ++i) {
    EXPECT_LT(errors[i], errors[i - 1]);
  }
  // First-order: the error over the whole sequence drops like h_B.
  const double order = std::log2(errors.front() / errors.back()) / (errors.size() - 1);
  EXPECT_GT(order, 0.9) << "observed order " << order;
}

TEST(Supermesh, SerialAndParallelAgreeBitwise) {
  const auto a = grid("A", 13, 0.2), b = grid("B", 17, 0.25, Vec2(0.01, 0.02));
  const auto s = build_supermesh(a, b, Exec::serial);
  const auto p = build_supermesh(a, b, Exec::parallel);
  ASSERT_EQ(s.faces.size(), p.faces.size());
  for (std::size_t i = 0; i < s.faces.size(); ++i) {
    EXPECT_EQ(s.faces[i].a, p.faces[i].a);
    EXPECT_EQ(s.faces[i].b, p.faces[i].b);
    EXPECT_EQ(s.faces[i].area, p.faces[i].area);
    EXPECT_EQ(s.faces[i].weight, p.faces[i].weight);
  }
}

TEST(Supermesh, EmptySetRejected) {
  EXPECT_THROW(make_face_set("A", Projection{}, {}), Error);
  EXPECT_THROW(single("A", {{Vec2(0, 0), Vec2(1, 0), Vec2(2, 0)}}), Error);
}

TEST(Supermesh, NonConvexQuadIsSplit) {
  const Polygon dart{Vec2(0, 0), Vec2(2, 0), Vec2(1, 0.3), Vec2(1, 2)};
  const auto a = single("A", {dart});
  EXPECT_EQ(a.pieces.size(), 2u);
  EXPECT_NEAR(a.parent_measure[0], polygon_area(dart), 1e-15);
  const auto sm = build_supermesh(a, single("B", {rect(-1, -1, 3, 3)}));
  EXPECT_NEAR(sm.weight_sum(0), 1.0, 1e-12);
}

TEST(Supermesh, OrientationMismatchIsReoriented) {
  Polygon cw = rect(1, 0, 2, 1);
  std::reverse(cw.begin(), cw.end());
  const auto a = single("A", {rect(0, 0, 1, 1), cw, rect(2, 0, 3, 1)});
  EXPECT_EQ(a.reoriented, 1);
  for (const auto& p : a.pieces) EXPECT_GT(signed_area(p), 0.0);
}

TEST(Supermesh, CsvAndVtkExport) {
  const auto sm = build_supermesh(grid("A", 2), grid("B", 3));
  const std::string csv = sm.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "a_face,b_face,area,weight");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), long(sm.faces.size() + 1));
  const auto vtk = oracle::read_vtk(sm.to_vtk());
  EXPECT_GE(vtk.cells.size(), sm.faces.size());
  ASSERT_TRUE(vtk.scalars.count("weight"));
  double area = 0.0;
  for (const auto& cell : vtk.cells) {
    Polygon p;
    for (long i : cell) p.emplace_back(vtk.points[i].x(), vtk.points[i].y());
    area += polygon_area(p);
  }
  EXPECT_NEAR(area, 1.0, 1e-12);
}

TEST(Interface, CylindricalSlidingFixture) {
  const Mesh mesh = read_mesh_file(oracle::fixture("meshes/cylinder_sliding.su2"));
  const auto pair = interface_face_sets(mesh, "rotor_outer", "stator_inner");
  EXPECT_EQ(pair.a.projection.kind, Projection::Kind::cylindrical);
  const auto sm = build_supermesh(pair.a, pair.b);
  for (std::size_t f = 0; f < pair.a.face_count(); ++f) EXPECT_NEAR(sm.weight_sum(f), 1.0, 1e-9);
  EXPECT_NEAR(sm.total_area(), 2 * kPi * 1.0 * 0.5, 1e-9);
  const auto report = summarize_interface(sm, pair);
  EXPECT_EQ(report.partially_covered, 0u);
  EXPECT_EQ(report.projection, "cylindrical");
}

TEST(Interface, PlanarFixtures) {
  const Mesh m = read_mesh_file(oracle::fixture("meshes/interface_4x4_5x5.su2"));
  const auto pair = interface_face_sets(m, "side_a", "side_b");
  EXPECT_EQ(pair.a.face_count(), 16u);
  EXPECT_EQ(pair.b.face_count(), 25u);
  const auto sm = build_supermesh(pair.a, pair.b);
  const auto r = summarize_interface(sm, pair);
  EXPECT_NEAR(r.min_weight_sum, 1.0, 1e-9);
  EXPECT_NEAR(r.max_weight_sum, 1.0, 1e-9);
  EXPECT_EQ(r.supermesh_faces, 64u);

  const Mesh d = read_mesh_file(oracle::fixture("meshes/interface_disjoint.su2"));
  const auto dp = interface_face_sets(d, "side_a", "side_b");
  EXPECT_TRUE(build_supermesh(dp.a, dp.b).faces.empty());
  EXPECT_THROW(interface_face_sets(m, "side_a", "nope"), Error);
}

TEST(Interface, TwoDimensionalLine) {
  const std::vector<Vec3> pts{Vec3(0, 0, 0), Vec3(1, 1, 0), Vec3(2, 2, 0)};
  EXPECT_EQ(fit_projection(pts, 2).kind, Projection::Kind::linear);
  const std::vector<Vec3> bent{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0)};
  EXPECT_THROW(fit_projection(bent, 2), Error);

  const auto a = make_face_set("A", fit_projection(pts, 2),
                               {{Vec3(0, 0, 0), Vec3(1, 1, 0)}, {Vec3(1, 1, 0), Vec3(2, 2, 0)}});
  const auto b = make_face_set("B", a.projection, {{Vec3(0.5, 0.5, 0), Vec3(2, 2, 0)}});
  const auto sm = build_supermesh(a, b);
  EXPECT_NEAR(sm.weight_sum(0), 0.5, 1e-12);
  EXPECT_NEAR(sm.weight_sum(1), 1.0, 1e-12);
  EXPECT_NEAR(sm.faces[0].area, std::sqrt(2.0) / 2, 1e-12);
}
