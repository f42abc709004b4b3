#pragma once

#include <vector>

#include "rotormesh/mesh.hpp"

namespace rotormesh::generate {

/// Structured quadrilateral mesh on the tensor grid xs × ys with markers
/// "lower", "right", "upper", "left".
Mesh rectangle_quads(const std::vector<double>& xs, const std::vector<double>& ys);

/// Same grid with every quad split into two triangles.
Mesh rectangle_triangles(const std::vector<double>& xs, const std::vector<double>& ys);

/// Equilateral triangles of unit side on an n × n parallelogram patch.
Mesh equilateral_triangles(int n);

/// Structured hexahedral mesh on xs × ys × zs with markers "xmin", "xmax",
/// "ymin", "ymax", "zmin", "zmax".
Mesh box_hexes(const std::vector<double>& xs, const std::vector<double>& ys,
               const std::vector<double>& zs);

/// Applies x += tan(angle) * y to every point (plane shear).
Mesh shear_xy(const Mesh& mesh, double angle_rad);

/// `n_inner` uniform cells on [lo, hi] plus geometrically stretched cells out
/// to `outer_lo` and `outer_hi` whose first size matches the inner spacing.
std::vector<double> graded_line(double outer_lo, double lo, double hi, double outer_hi,
                                int n_inner, int n_out_lo, int n_out_hi);

struct BladeBoxSpec {
  double chord = 1.0;
  double root = 0.5;       ///< spanwise start (x)
  double tip = 4.5;        ///< spanwise end (x)
  double thickness = 0.12;
  double pitch_axis = 0.25;  ///< chord fraction of the pitch axis, placed on y = 0
  double margin_x = 6.0;
  double margin_y = 6.0;
  double margin_z = 6.0;
  int span_cells = 20;
  int chord_cells = 8;
  int thickness_cells = 2;
  int outer_x = 8;
  int outer_y = 12;
  int outer_z = 20;
};

/// Hexahedral box with a flat rectangular blade cut out of it. Markers:
/// "blade" (the cavity walls) and "farfield" (the outer box).
Mesh blade_in_box(const BladeBoxSpec& spec);

/// Cubed-sphere hexahedral shell between radii r_in and r_out with markers
/// "inner" and "outer".
Mesh spherical_shell(double r_in, double r_out, int n_face, int n_radial);

/// Two disjoint hex blocks meeting on the plane z = 0 over [0,1]²: block A
/// (z in [-h, 0], na × na cells) with marker "side_a" and block B
/// (z in [0, h], nb × nb cells, shifted by (dx, dy)) with marker "side_b".
Mesh planar_interface_pair(int na, int nb, double dx = 0.0, double dy = 0.0, double h = 0.25);

/// Concentric annular hex blocks sharing the cylinder r = radius (height
/// [0, height]): inner block with marker "rotor_outer" (na azimuthal cells),
/// outer block with marker "stator_inner" (nb cells, rotated by
/// `rotation_rad`).
Mesh cylindrical_interface_pair(int na, int nb, double radius, double height,
                                double rotation_rad, int n_axial = 2);

}  // namespace rotormesh::generate
