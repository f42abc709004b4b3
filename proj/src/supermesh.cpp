#include "rotormesh/supermesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <tuple>

#include <fmt/format.h>

#include "rotormesh/csv.hpp"
#include "rotormesh/error.hpp"

namespace rotormesh {
namespace {

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

struct Box {
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi = -lo;

  void add(const Vec2& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  double diagonal() const { return (hi - lo).norm(); }
  bool overlaps(const Box& o, double pad) const {
    return lo.x() <= o.hi.x() + pad && o.lo.x() <= hi.x() + pad && lo.y() <= o.hi.y() + pad &&
           o.lo.y() <= hi.y() + pad;
  }
};

Box box_of(const Polygon& p) {
  Box b;
  for (const auto& v : p) b.add(v);
  return b;
}

Polygon ccw(Polygon p) {
  if (signed_area(p) < 0.0) std::reverse(p.begin(), p.end());
  return p;
}

/// Removes consecutive vertices closer than `snap` (including last-to-first).
Polygon dedupe(const Polygon& in, double snap) {
  Polygon out;
  for (const auto& v : in) {
    if (out.empty() || (v - out.back()).norm() > snap) out.push_back(v);
  }
  while (out.size() > 1 && (out.front() - out.back()).norm() <= snap) out.pop_back();
  return out;
}

Vec2 polygon_centroid(const Polygon& p) {
  if (p.size() == 2) return 0.5 * (p[0] + p[1]);
  double a2 = 0.0;
  Vec2 c = Vec2::Zero();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2& u = p[i];
    const Vec2& v = p[(i + 1) % p.size()];
    const double w = cross(u - p[0], v - p[0]);
    a2 += w;
    c += w * (u + v - 2.0 * p[0]);
  }
  return p[0] + c / (3.0 * a2);
}

struct Piece {
  Index a;
  Index b;
  double area;
  Polygon polygon;
};

struct Candidates {
  std::vector<Polygon> polys;
  std::vector<Index> parent;
  std::vector<Box> boxes;
};

Candidates candidates_b(const InterfaceFaceSet& b) {
  Candidates c;
  std::vector<double> shifts{0.0};
  if (b.projection.kind == Projection::Kind::cylindrical) {
    const double period = 2.0 * kPi * b.projection.radius;
    shifts = {0.0, -period, period};
  }
  for (double s : shifts) {
    for (std::size_t i = 0; i < b.pieces.size(); ++i) {
      Polygon p = b.pieces[i];
      for (auto& v : p) v.x() += s;
      c.boxes.push_back(box_of(p));
      c.polys.push_back(std::move(p));
      c.parent.push_back(b.piece_parent[i]);
    }
  }
  return c;
}

std::optional<Polygon> intersect(const Polygon& a, const Polygon& b, bool linear, double snap) {
  if (linear) {
    const double lo = std::max(a[0].x(), b[0].x());
    const double hi = std::min(a[1].x(), b[1].x());
    if (!(hi - lo > snap)) return std::nullopt;
    return Polygon{Vec2(lo, 0.0), Vec2(hi, 0.0)};
  }
  Polygon p = dedupe(clip_convex(a, b), snap);
  if (p.size() < 3) return std::nullopt;
  return p;
}

double measure(const Polygon& p, bool linear) {
  return linear ? p[1].x() - p[0].x() : polygon_area(p);
}

}  // namespace

double signed_area(const Polygon& poly) {
  if (poly.size() < 3) return 0.0;
  double s = 0.0;
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
    s += cross(poly[i] - poly[0], poly[i + 1] - poly[0]);
  }
  return 0.5 * s;
}

double polygon_area(const Polygon& poly) { return std::abs(signed_area(poly)); }

bool is_convex(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  int sign = 0;
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e1 = poly[(i + 1) % n] - poly[i];
    const Vec2 e2 = poly[(i + 2) % n] - poly[(i + 1) % n];
    const double c = cross(e1, e2);
    if (std::abs(c) > 1e-12 * e1.norm() * e2.norm()) {
      const int s = c > 0 ? 1 : -1;
      if (sign != 0 && s != sign) return false;
      sign = s;
    }
    turning += std::atan2(c, e1.dot(e2));
  }
  return sign != 0 && std::abs(std::abs(turning) - 2.0 * kPi) < 1e-6;
}

Polygon clip_convex(const Polygon& a_in, const Polygon& b_in) {
  if (!is_convex(a_in) || !is_convex(b_in)) throw Error("clip_convex: input polygon is not convex");
  Polygon out = ccw(a_in);
  const Polygon b = ccw(b_in);
  for (std::size_t j = 0; j < b.size() && !out.empty(); ++j) {
    const Vec2& p0 = b[j];
    const Vec2 edge = b[(j + 1) % b.size()] - p0;
    Polygon in = std::move(out);
    out.clear();
    for (std::size_t i = 0; i < in.size(); ++i) {
      const Vec2& cur = in[i];
      const Vec2& nxt = in[(i + 1) % in.size()];
      const double dc = cross(edge, cur - p0);
      const double dn = cross(edge, nxt - p0);
      if (dc >= 0.0) out.push_back(cur);
      if ((dc >= 0.0) != (dn >= 0.0) && dc != dn) {
        const double t = dc / (dc - dn);
        out.push_back(cur + t * (nxt - cur));
      }
    }
  }
  Box box = box_of(a_in);
  for (const auto& v : b_in) box.add(v);
  out = dedupe(out, 1e-12 * box.diagonal());
  if (out.size() < 3 || signed_area(out) <= 0.0) return {};
  return out;
}

std::vector<Triangle> triangulate(const Polygon& poly) {
  if (poly.size() < 3) throw Error("triangulate: polygon needs at least three vertices");
  std::vector<Triangle> tris;
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) tris.push_back({poly[0], poly[i], poly[i + 1]});
  return tris;
}

Vec2 Projection::project(const Vec3& x) const {
  const Vec3 d = x - origin;
  switch (kind) {
    case Kind::planar:
      return {d.dot(e1), d.dot(e2)};
    case Kind::cylindrical:
      return {radius * std::atan2(d.y(), d.x()), d.z()};
    case Kind::linear:
      return {d.dot(e1), 0.0};
  }
  return {};
}

Vec3 Projection::lift(const Vec2& p) const {
  switch (kind) {
    case Kind::planar:
      return origin + p.x() * e1 + p.y() * e2;
    case Kind::cylindrical:
      return origin + Vec3(radius * std::cos(p.x() / radius), radius * std::sin(p.x() / radius), p.y());
    case Kind::linear:
      return origin + p.x() * e1;
  }
  return origin;
}

std::string_view projection_name(Projection::Kind kind) {
  switch (kind) {
    case Projection::Kind::planar: return "planar";
    case Projection::Kind::cylindrical: return "cylindrical";
    case Projection::Kind::linear: return "linear";
  }
  return "?";
}

InterfaceFaceSet make_face_set(std::string side, const Projection& projection,
                               const std::vector<std::vector<Vec3>>& faces) {
  if (faces.empty()) throw Error(fmt::format("interface side '{}' has no faces", side));
  InterfaceFaceSet set;
  set.side = std::move(side);
  set.projection = projection;
  const bool linear = projection.kind == Projection::Kind::linear;

  std::vector<Polygon> projected;
  Box all;
  for (const auto& f : faces) {
    Polygon p;
    for (const auto& x : f) p.push_back(projection.project(x));
    if (projection.kind == Projection::Kind::cylindrical) {
      const double period = 2.0 * kPi * projection.radius;
      for (std::size_t k = 1; k < p.size(); ++k) {
        while (p[k].x() - p[0].x() > 0.5 * period) p[k].x() -= period;
        while (p[k].x() - p[0].x() < -0.5 * period) p[k].x() += period;
      }
    }
    for (const auto& v : p) all.add(v);
    projected.push_back(std::move(p));
  }
  const double tiny = 1e-14 * std::max(all.diagonal(), 1e-300);

  int positive = 0;
  std::vector<double> orient(projected.size());
  for (std::size_t i = 0; i < projected.size(); ++i) {
    const auto& p = projected[i];
    if (linear) {
      if (p.size() != 2) throw Error("1D interface faces must be segments");
      orient[i] = p[1].x() - p[0].x();
    } else {
      if (p.size() < 3) throw Error("2D interface faces need at least three vertices");
      orient[i] = signed_area(p);
    }
    const double scale = linear ? tiny : tiny * all.diagonal();
    if (!(std::abs(orient[i]) > scale)) {
      throw Error(fmt::format("interface side '{}': face {} has zero projected measure", set.side, i));
    }
    if (orient[i] > 0) ++positive;
  }
  const bool majority_positive = 2 * positive >= static_cast<int>(projected.size());

  for (std::size_t i = 0; i < projected.size(); ++i) {
    Polygon p = projected[i];
    if ((orient[i] > 0) != majority_positive) ++set.reoriented;
    if (orient[i] < 0) std::reverse(p.begin(), p.end());
    set.parent_measure.push_back(linear ? p[1].x() - p[0].x() : signed_area(p));
    set.parent_centroid.push_back(polygon_centroid(p));

    std::vector<Polygon> parts;
    if (linear || is_convex(p)) {
      parts.push_back(std::move(p));
    } else if (p.size() == 4) {
      const bool d02 = signed_area({p[0], p[1], p[2]}) > 0 && signed_area({p[0], p[2], p[3]}) > 0;
      if (d02) {
        parts = {{p[0], p[1], p[2]}, {p[0], p[2], p[3]}};
      } else {
        parts = {{p[1], p[2], p[3]}, {p[1], p[3], p[0]}};
      }
    } else {
      throw Error(fmt::format("interface side '{}': face {} is non-convex with {} vertices",
                              set.side, i, p.size()));
    }
    for (auto& part : parts) {
      set.pieces.push_back(std::move(part));
      set.piece_parent.push_back(static_cast<Index>(i));
    }
  }
  return set;
}

double Supermesh::weight_sum(std::size_t a) const {
  double s = 0.0;
  for (std::size_t f : donors_a.at(a)) s += faces[f].weight;
  return s;
}

double Supermesh::total_area() const {
  double s = 0.0;
  for (const auto& f : faces) s += f.area;
  return s;
}

std::string Supermesh::to_csv() const {
  CsvWriter csv({"a_face", "b_face", "area", "weight"});
  for (const auto& f : faces) csv.row(f.a, f.b, f.area, f.weight);
  return csv.str();
}

std::string Supermesh::to_vtk() const {
  const bool linear = projection.kind == Projection::Kind::linear;
  std::vector<Vec3> points;
  std::vector<std::vector<std::size_t>> cells;
  std::vector<std::size_t> owner;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    for (const auto& poly : faces[f].polygons) {
      std::vector<std::size_t> cell;
      for (const auto& v : poly) {
        cell.push_back(points.size());
        points.push_back(projection.lift(v));
      }
      cells.push_back(std::move(cell));
      owner.push_back(f);
    }
  }
  std::size_t list_size = 0;
  for (const auto& c : cells) list_size += c.size() + 1;

  std::string out = "# vtk DataFile Version 3.0\nsupermesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out += fmt::format("POINTS {} double\n", points.size());
  for (const auto& p : points) out += fmt::format("{:.17g} {:.17g} {:.17g}\n", p.x(), p.y(), p.z());
  out += fmt::format("CELLS {} {}\n", cells.size(), list_size);
  for (const auto& c : cells) {
    out += std::to_string(c.size());
    for (auto v : c) out += ' ' + std::to_string(v);
    out += '\n';
  }
  out += fmt::format("CELL_TYPES {}\n", cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) out += linear ? "3\n" : "7\n";
  out += fmt::format("CELL_DATA {}\n", cells.size());
  out += "SCALARS weight double 1\nLOOKUP_TABLE default\n";
  for (auto f : owner) out += fmt::format("{:.17g}\n", faces[f].weight);
  out += "SCALARS a_face int 1\nLOOKUP_TABLE default\n";
  for (auto f : owner) out += fmt::format("{}\n", faces[f].a);
  out += "SCALARS b_face int 1\nLOOKUP_TABLE default\n";
  for (auto f : owner) out += fmt::format("{}\n", faces[f].b);
  return out;
}

Supermesh build_supermesh(const InterfaceFaceSet& side_a, const InterfaceFaceSet& side_b, Exec exec) {
  if (side_a.pieces.empty() || side_b.pieces.empty()) throw Error("build_supermesh: empty face set");
  if (side_a.projection.kind != side_b.projection.kind) {
    throw Error("build_supermesh: sides use different projections");
  }
  const bool linear = side_a.projection.kind == Projection::Kind::linear;
  const Candidates cand = candidates_b(side_b);

  Box all;
  std::vector<double> diam;
  std::vector<Box> a_boxes;
  for (const auto& p : side_a.pieces) {
    a_boxes.push_back(box_of(p));
    all.add(a_boxes.back().lo);
    all.add(a_boxes.back().hi);
    diam.push_back(a_boxes.back().diagonal());
  }
  for (const auto& b : cand.boxes) {
    all.add(b.lo);
    all.add(b.hi);
    diam.push_back(b.diagonal());
  }
  const double snap = 1e-12 * all.diagonal();

  // Uniform bins sized to the median face diameter.
  std::nth_element(diam.begin(), diam.begin() + diam.size() / 2, diam.end());
  const Vec2 extent = (all.hi - all.lo).cwiseMax(snap);
  const double max_bins = std::max<double>(1024.0, 16.0 * cand.polys.size());
  double h = std::max(diam[diam.size() / 2], snap);
  while ((std::floor(extent.x() / h) + 1) * (std::floor(extent.y() / h) + 1) > max_bins) h *= 2.0;
  const auto nx = static_cast<long>(std::floor(extent.x() / h)) + 1;
  const auto ny = static_cast<long>(std::floor(extent.y() / h)) + 1;
  auto bin_range = [&](const Box& b) {
    auto clamp_x = [&](double v) { return std::clamp<long>(static_cast<long>(std::floor(v)), 0, nx - 1); };
    auto clamp_y = [&](double v) { return std::clamp<long>(static_cast<long>(std::floor(v)), 0, ny - 1); };
    return std::array<long, 4>{clamp_x((b.lo.x() - all.lo.x() - snap) / h),
                               clamp_x((b.hi.x() - all.lo.x() + snap) / h),
                               clamp_y((b.lo.y() - all.lo.y() - snap) / h),
                               clamp_y((b.hi.y() - all.lo.y() + snap) / h)};
  };

  std::vector<std::vector<std::uint32_t>> bins;
  if (exec == Exec::parallel) {
    bins.resize(static_cast<std::size_t>(nx * ny));
    for (std::size_t j = 0; j < cand.polys.size(); ++j) {
      const auto r = bin_range(cand.boxes[j]);
      for (long y = r[2]; y <= r[3]; ++y) {
        for (long x = r[0]; x <= r[1]; ++x) bins[y * nx + x].push_back(static_cast<std::uint32_t>(j));
      }
    }
  }

  std::vector<std::vector<Piece>> per_piece(side_a.pieces.size());
  auto process = [&](std::size_t i, const std::vector<std::uint32_t>& order) {
    const Polygon& pa = side_a.pieces[i];
    const Index a = side_a.piece_parent[i];
    for (std::uint32_t j : order) {
      if (!a_boxes[i].overlaps(cand.boxes[j], snap)) continue;
      auto poly = intersect(pa, cand.polys[j], linear, snap);
      if (!poly) continue;
      const Index b = cand.parent[j];
      const double area = measure(*poly, linear);
      const double floor =
          1e-14 * std::min(side_a.parent_measure[a], side_b.parent_measure[b]);
      if (!(area > floor)) continue;
      per_piece[i].push_back({a, b, area, std::move(*poly)});
    }
  };

  const auto n_a = static_cast<std::int64_t>(side_a.pieces.size());
  if (exec == Exec::serial) {
    std::vector<std::uint32_t> every(cand.polys.size());
    std::iota(every.begin(), every.end(), 0u);
    for (std::int64_t i = 0; i < n_a; ++i) process(static_cast<std::size_t>(i), every);
  } else {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n_a; ++i) {
      const auto r = bin_range(a_boxes[i]);
      std::vector<std::uint32_t> order;
      for (long y = r[2]; y <= r[3]; ++y) {
        for (long x = r[0]; x <= r[1]; ++x) {
          const auto& bin = bins[y * nx + x];
          order.insert(order.end(), bin.begin(), bin.end());
        }
      }
      std::sort(order.begin(), order.end());
      order.erase(std::unique(order.begin(), order.end()), order.end());
      process(static_cast<std::size_t>(i), order);
    }
  }

  std::vector<Piece> pieces;
  for (auto& v : per_piece) {
    for (auto& p : v) pieces.push_back(std::move(p));
  }
  std::stable_sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });

  Supermesh sm;
  sm.projection = side_a.projection;
  sm.area_a = side_a.parent_measure;
  sm.area_b = side_b.parent_measure;
  sm.donors_a.resize(side_a.face_count());
  sm.donors_b.resize(side_b.face_count());
  for (auto& p : pieces) {
    if (sm.faces.empty() || sm.faces.back().a != p.a || sm.faces.back().b != p.b) {
      sm.faces.push_back({p.a, p.b, 0.0, 0.0, {}});
    }
    auto& f = sm.faces.back();
    f.area += p.area;
    f.polygons.push_back(std::move(p.polygon));
  }
  for (std::size_t k = 0; k < sm.faces.size(); ++k) {
    auto& f = sm.faces[k];
    f.weight = f.area / sm.area_a[f.a];
    sm.donors_a[f.a].push_back(k);
    sm.donors_b[f.b].push_back(k);
  }
  return sm;
}

std::vector<double> weighted_exchange(const Supermesh& mesh, std::span<const double> values_b) {
  if (values_b.size() != mesh.area_b.size()) {
    throw Error(fmt::format("weighted_exchange: {} values for {} B faces", values_b.size(),
                            mesh.area_b.size()));
  }
  std::vector<double> out(mesh.area_a.size(), 0.0);
  for (std::size_t a = 0; a < out.size(); ++a) {
    for (std::size_t f : mesh.donors_a[a]) out[a] += mesh.faces[f].weight * values_b[mesh.faces[f].b];
  }
  return out;
}

}  // namespace rotormesh
