#include "rotormesh/generate.hpp"

#include <array>
#include <cmath>
#include <map>
#include <numeric>

#include "rotormesh/error.hpp"
#include "rotormesh/geometry.hpp"

namespace rotormesh::generate {
namespace {

Index grid_id(int i, int j, int nx) { return static_cast<Index>(j) * (nx + 1) + i; }

std::vector<Element> rectangle_boundary(int nx, int ny, int side) {
  std::vector<Element> faces;
  auto edge = [&](Index a, Index b) { faces.push_back({ElementKind::line, {a, b}}); };
  switch (side) {
    case 0: for (int i = 0; i < nx; ++i) edge(grid_id(i, 0, nx), grid_id(i + 1, 0, nx)); break;
    case 1: for (int j = 0; j < ny; ++j) edge(grid_id(nx, j, nx), grid_id(nx, j + 1, nx)); break;
    case 2: for (int i = nx; i > 0; --i) edge(grid_id(i, ny, nx), grid_id(i - 1, ny, nx)); break;
    default: for (int j = ny; j > 0; --j) edge(grid_id(0, j, nx), grid_id(0, j - 1, nx)); break;
  }
  return faces;
}

std::vector<Vec3> rectangle_points(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<Vec3> pts;
  for (double y : ys) {
    for (double x : xs) pts.emplace_back(x, y, 0.0);
  }
  return pts;
}

std::vector<Marker> rectangle_markers(int nx, int ny) {
  return {{"lower", rectangle_boundary(nx, ny, 0)},
          {"right", rectangle_boundary(nx, ny, 1)},
          {"upper", rectangle_boundary(nx, ny, 2)},
          {"left", rectangle_boundary(nx, ny, 3)}};
}

/// Accumulates points, cells and marker faces; hexahedra are reoriented to
/// positive volume as they are added.
class Assembler {
 public:
  Index add_point(const Vec3& p) {
    points_.push_back(p);
    return static_cast<Index>(points_.size() - 1);
  }
  void add_hex(std::array<Index, 8> v) {
    Element e{ElementKind::hexahedron, {v.begin(), v.end()}};
    if (cell_geometry(points_, e, 3).volume < 0.0) {
      std::swap(e.vertices[1], e.vertices[3]);
      std::swap(e.vertices[5], e.vertices[7]);
    }
    cells_.push_back(std::move(e));
  }
  void add_quad(const std::string& marker, Index a, Index b, Index c, Index d) {
    markers_[marker].push_back({ElementKind::quadrilateral, {a, b, c, d}});
  }
  Mesh build() {
    std::vector<Marker> markers;
    for (auto& [name, faces] : markers_) markers.push_back({name, std::move(faces)});
    return Mesh(3, std::move(points_), std::move(cells_), std::move(markers));
  }

 private:
  std::vector<Vec3> points_;
  std::vector<Element> cells_;
  std::map<std::string, std::vector<Element>> markers_;
};

/// Structured (nx, ny, nz) hex block with optional per-cell mask. Boundary
/// quads are emitted for every kept cell face whose neighbour is missing;
/// `classify` names the marker for such a face given the cell and direction.
template <typename PointFn, typename KeepFn, typename MarkerFn>
void add_structured_block(Assembler& as, int nx, int ny, int nz, PointFn point, KeepFn keep,
                          MarkerFn classify) {
  auto id = [&](int i, int j, int k) {
    return (static_cast<Index>(k) * (ny + 1) + j) * (nx + 1) + i;
  };
  // Only points touched by kept cells are created.
  std::vector<Index> remap(static_cast<std::size_t>((nx + 1) * (ny + 1) * (nz + 1)), -1);
  auto pid = [&](int i, int j, int k) {
    Index& r = remap[id(i, j, k)];
    if (r < 0) r = as.add_point(point(i, j, k));
    return r;
  };
  auto inside = [&](int i, int j, int k) {
    return i >= 0 && j >= 0 && k >= 0 && i < nx && j < ny && k < nz && keep(i, j, k);
  };
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        if (!keep(i, j, k)) continue;
        as.add_hex({pid(i, j, k), pid(i + 1, j, k), pid(i + 1, j + 1, k), pid(i, j + 1, k),
                    pid(i, j, k + 1), pid(i + 1, j, k + 1), pid(i + 1, j + 1, k + 1),
                    pid(i, j + 1, k + 1)});
        if (!inside(i - 1, j, k))
          as.add_quad(classify(i, j, k, 0), pid(i, j, k), pid(i, j, k + 1), pid(i, j + 1, k + 1), pid(i, j + 1, k));
        if (!inside(i + 1, j, k))
          as.add_quad(classify(i, j, k, 1), pid(i + 1, j, k), pid(i + 1, j + 1, k), pid(i + 1, j + 1, k + 1), pid(i + 1, j, k + 1));
        if (!inside(i, j - 1, k))
          as.add_quad(classify(i, j, k, 2), pid(i, j, k), pid(i + 1, j, k), pid(i + 1, j, k + 1), pid(i, j, k + 1));
        if (!inside(i, j + 1, k))
          as.add_quad(classify(i, j, k, 3), pid(i, j + 1, k), pid(i, j + 1, k + 1), pid(i + 1, j + 1, k + 1), pid(i + 1, j + 1, k));
        if (!inside(i, j, k - 1))
          as.add_quad(classify(i, j, k, 4), pid(i, j, k), pid(i, j + 1, k), pid(i + 1, j + 1, k), pid(i + 1, j, k));
        if (!inside(i, j, k + 1))
          as.add_quad(classify(i, j, k, 5), pid(i, j, k + 1), pid(i + 1, j, k + 1), pid(i + 1, j + 1, k + 1), pid(i, j + 1, k + 1));
      }
    }
  }
}

/// Cell sizes h, h r, h r^2, ... summing to `length` over n cells.
std::vector<double> geometric_sizes(double h, double length, int n) {
  std::vector<double> sizes(static_cast<std::size_t>(std::max(n, 0)));
  if (n <= 0) return sizes;
  if (h * n >= length) {
    std::fill(sizes.begin(), sizes.end(), length / n);
    return sizes;
  }
  auto total = [&](double r) { return h * (std::pow(r, n) - 1.0) / (r - 1.0); };
  double lo = 1.0 + 1e-12, hi = 2.0;
  while (total(hi) < length) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) < length ? lo : hi) = mid;
  }
  double s = h;
  for (int i = 0; i < n; ++i, s *= hi) sizes[i] = s;
  const double scale = length / std::accumulate(sizes.begin(), sizes.end(), 0.0);
  for (auto& x : sizes) x *= scale;
  return sizes;
}

}  // namespace

Mesh rectangle_quads(const std::vector<double>& xs, const std::vector<double>& ys) {
  const int nx = static_cast<int>(xs.size()) - 1, ny = static_cast<int>(ys.size()) - 1;
  std::vector<Element> cells;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      cells.push_back({ElementKind::quadrilateral,
                       {grid_id(i, j, nx), grid_id(i + 1, j, nx), grid_id(i + 1, j + 1, nx),
                        grid_id(i, j + 1, nx)}});
  return Mesh(2, rectangle_points(xs, ys), std::move(cells), rectangle_markers(nx, ny));
}

Mesh rectangle_triangles(const std::vector<double>& xs, const std::vector<double>& ys) {
  const int nx = static_cast<int>(xs.size()) - 1, ny = static_cast<int>(ys.size()) - 1;
  std::vector<Element> cells;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Index a = grid_id(i, j, nx), b = grid_id(i + 1, j, nx);
      const Index c = grid_id(i + 1, j + 1, nx), d = grid_id(i, j + 1, nx);
      cells.push_back({ElementKind::triangle, {a, b, c}});
      cells.push_back({ElementKind::triangle, {a, c, d}});
    }
  }
  return Mesh(2, rectangle_points(xs, ys), std::move(cells), rectangle_markers(nx, ny));
}

Mesh equilateral_triangles(int n) {
  std::vector<Vec3> pts;
  const double h = std::sqrt(3.0) / 2.0;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) pts.emplace_back(i + 0.5 * j, h * j, 0.0);
  std::vector<Element> cells;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Index a = grid_id(i, j, n), b = grid_id(i + 1, j, n);
      const Index c = grid_id(i + 1, j + 1, n), d = grid_id(i, j + 1, n);
      cells.push_back({ElementKind::triangle, {a, b, d}});
      cells.push_back({ElementKind::triangle, {b, c, d}});
    }
  }
  return Mesh(2, std::move(pts), std::move(cells), rectangle_markers(n, n));
}

Mesh box_hexes(const std::vector<double>& xs, const std::vector<double>& ys,
               const std::vector<double>& zs) {
  const int nx = static_cast<int>(xs.size()) - 1, ny = static_cast<int>(ys.size()) - 1,
            nz = static_cast<int>(zs.size()) - 1;
  static const char* names[] = {"xmin", "xmax", "ymin", "ymax", "zmin", "zmax"};
  Assembler as;
  add_structured_block(
      as, nx, ny, nz, [&](int i, int j, int k) { return Vec3(xs[i], ys[j], zs[k]); },
      [](int, int, int) { return true; },
      [](int, int, int, int dir) { return std::string(names[dir]); });
  return as.build();
}

Mesh shear_xy(const Mesh& mesh, double angle_rad) {
  std::vector<Vec3> pts = mesh.points();
  const double t = std::tan(angle_rad);
  for (auto& p : pts) p.x() += t * p.y();
  return mesh.with_points(std::move(pts));
}

std::vector<double> graded_line(double outer_lo, double lo, double hi, double outer_hi,
                                int n_inner, int n_out_lo, int n_out_hi) {
  const double h = (hi - lo) / n_inner;
  std::vector<double> line;
  const auto below = geometric_sizes(h, lo - outer_lo, n_out_lo);
  double x = lo;
  std::vector<double> rev{lo};
  for (double s : below) rev.push_back(x -= s);
  rev.back() = outer_lo;
  line.assign(rev.rbegin(), rev.rend());
  for (int i = 1; i <= n_inner; ++i) line.push_back(lo + (hi - lo) * i / n_inner);
  line.back() = hi;
  x = hi;
  for (double s : geometric_sizes(h, outer_hi - hi, n_out_hi)) line.push_back(x += s);
  if (n_out_hi > 0) line.back() = outer_hi;
  return line;
}

Mesh blade_in_box(const BladeBoxSpec& s) {
  const double le = -s.pitch_axis * s.chord, te = (1.0 - s.pitch_axis) * s.chord;
  const auto xs = graded_line(s.root - s.margin_x, s.root, s.tip, s.tip + s.margin_x, s.span_cells,
                              s.outer_x, s.outer_x);
  const auto ys = graded_line(le - s.margin_y, le, te, te + s.margin_y, s.chord_cells, s.outer_y,
                              s.outer_y);
  const double zh = 0.5 * s.thickness;
  const auto zs = graded_line(-zh - s.margin_z, -zh, zh, zh + s.margin_z, s.thickness_cells,
                              s.outer_z, s.outer_z);
  const int nx = static_cast<int>(xs.size()) - 1, ny = static_cast<int>(ys.size()) - 1,
            nz = static_cast<int>(zs.size()) - 1;
  auto in_blade = [&](int i, int j, int k) {
    return i >= s.outer_x && i < s.outer_x + s.span_cells && j >= s.outer_y &&
           j < s.outer_y + s.chord_cells && k >= s.outer_z && k < s.outer_z + s.thickness_cells;
  };
  Assembler as;
  add_structured_block(
      as, nx, ny, nz, [&](int i, int j, int k) { return Vec3(xs[i], ys[j], zs[k]); },
      [&](int i, int j, int k) { return !in_blade(i, j, k); },
      [&](int i, int j, int k, int dir) {
        static const int di[] = {-1, 1, 0, 0, 0, 0}, dj[] = {0, 0, -1, 1, 0, 0},
                         dk[] = {0, 0, 0, 0, -1, 1};
        return std::string(in_blade(i + di[dir], j + dj[dir], k + dk[dir]) ? "blade" : "farfield");
      });
  return as.build();
}

Mesh spherical_shell(double r_in, double r_out, int n_face, int n_radial) {
  if (!(r_in > 0.0 && r_out > r_in) || n_face < 1 || n_radial < 1) {
    throw Error("spherical_shell: need 0 < r_in < r_out and positive resolution");
  }
  Assembler as;
  // Points shared between cube faces are merged by their (rounded) position.
  std::map<std::array<long long, 3>, Index> ids;
  auto point = [&](const Vec3& dir, double r) {
    const Vec3 p = r * dir;
    std::array<long long, 3> key;
    for (int k = 0; k < 3; ++k) key[k] = std::llround(p[k] * 1e9);
    auto [it, fresh] = ids.try_emplace(key, 0);
    if (fresh) it->second = as.add_point(p);
    return it->second;
  };
  std::vector<double> radii(static_cast<std::size_t>(n_radial) + 1);
  for (int k = 0; k <= n_radial; ++k) radii[k] = r_in * std::pow(r_out / r_in, double(k) / n_radial);

  for (int face = 0; face < 6; ++face) {
    const int axis = face / 2;
    const double sign = face % 2 == 0 ? -1.0 : 1.0;
    auto dir = [&](int i, int j) {
      const double a = std::tan(-kPi / 4 + kPi / 2 * i / n_face);
      const double b = std::tan(-kPi / 4 + kPi / 2 * j / n_face);
      Vec3 d;
      d[axis] = sign;
      d[(axis + 1) % 3] = a;
      d[(axis + 2) % 3] = b;
      return Vec3(d.normalized());
    };
    for (int k = 0; k < n_radial; ++k) {
      for (int j = 0; j < n_face; ++j) {
        for (int i = 0; i < n_face; ++i) {
          const Vec3 d00 = dir(i, j), d10 = dir(i + 1, j), d11 = dir(i + 1, j + 1), d01 = dir(i, j + 1);
          const double r0 = radii[k], r1 = radii[k + 1];
          const std::array<Index, 8> v{point(d00, r0), point(d10, r0), point(d11, r0), point(d01, r0),
                                       point(d00, r1), point(d10, r1), point(d11, r1), point(d01, r1)};
          as.add_hex(v);
          if (k == 0) as.add_quad("inner", v[0], v[3], v[2], v[1]);
          if (k == n_radial - 1) as.add_quad("outer", v[4], v[5], v[6], v[7]);
        }
      }
    }
  }
  return as.build();
}

Mesh planar_interface_pair(int na, int nb, double dx, double dy, double h) {
  Assembler as;
  const auto xa = [&](int i) { return double(i) / na; };
  add_structured_block(
      as, na, na, 1, [&](int i, int j, int k) { return Vec3(xa(i), xa(j), -h + h * k); },
      [](int, int, int) { return true; },
      [](int, int, int, int dir) { return std::string(dir == 5 ? "side_a" : "wall_a"); });
  const auto xb = [&](int i) { return double(i) / nb; };
  add_structured_block(
      as, nb, nb, 1, [&](int i, int j, int k) { return Vec3(xb(i) + dx, xb(j) + dy, h * k); },
      [](int, int, int) { return true; },
      [](int, int, int, int dir) { return std::string(dir == 4 ? "side_b" : "wall_b"); });
  return as.build();
}

Mesh cylindrical_interface_pair(int na, int nb, double radius, double height, double rotation_rad,
                                int n_axial) {
  Assembler as;
  const double r_hub = 0.5 * radius, r_far = 1.5 * radius;
  auto ring = [&](int n, double rot) {
    return [=](int i, int j, int k, double r0, double r1) {
      const double phi = rot + 2.0 * kPi * (i % n) / n;
      const double r = j == 0 ? r0 : r1;
      return Vec3(r * std::cos(phi), r * std::sin(phi), height * k / n_axial);
    };
  };
  // Blocks are periodic in azimuth; the last column reuses the first.
  auto add_ring = [&](int n, double r0, double r1, double rot, int iface_dir, const char* name,
                      const char* other) {
    auto place = ring(n, rot);
    std::vector<Index> ids(static_cast<std::size_t>(n * 2 * (n_axial + 1)));
    auto pid = [&](int i, int j, int k) -> Index& {
      return ids[(static_cast<std::size_t>(k) * 2 + j) * n + (i % n)];
    };
    for (int k = 0; k <= n_axial; ++k)
      for (int j = 0; j < 2; ++j)
        for (int i = 0; i < n; ++i) pid(i, j, k) = as.add_point(place(i, j, k, r0, r1));
    for (int k = 0; k < n_axial; ++k) {
      for (int i = 0; i < n; ++i) {
        as.add_hex({pid(i, 0, k), pid(i + 1, 0, k), pid(i + 1, 1, k), pid(i, 1, k),
                    pid(i, 0, k + 1), pid(i + 1, 0, k + 1), pid(i + 1, 1, k + 1), pid(i, 1, k + 1)});
        const int j = iface_dir;
        as.add_quad(name, pid(i, j, k), pid(i + 1, j, k), pid(i + 1, j, k + 1), pid(i, j, k + 1));
        const int jo = 1 - iface_dir;
        as.add_quad(other, pid(i, jo, k), pid(i, jo, k + 1), pid(i + 1, jo, k + 1), pid(i + 1, jo, k));
      }
      (void)k;
    }
    for (int i = 0; i < n; ++i) {
      as.add_quad(other, pid(i, 0, 0), pid(i, 1, 0), pid(i + 1, 1, 0), pid(i + 1, 0, 0));
      as.add_quad(other, pid(i, 0, n_axial), pid(i + 1, 0, n_axial), pid(i + 1, 1, n_axial), pid(i, 1, n_axial));
    }
  };
  add_ring(na, r_hub, radius, 0.0, 1, "rotor_outer", "rotor_walls");
  add_ring(nb, radius, r_far, rotation_rad, 0, "stator_inner", "stator_walls");
  return as.build();
}

}  // namespace rotormesh::generate
