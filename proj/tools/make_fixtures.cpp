// Writes the generated mesh fixtures into a directory.
#include <filesystem>
#include <iostream>
#include <string>

#include "rotormesh/generate.hpp"
#include "rotormesh/mesh_io.hpp"

using namespace rotormesh;

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: make_fixtures <dir> [--desk]\n";
    return 1;
  }
  const std::filesystem::path dir(argv[1]);
  std::filesystem::create_directories(dir);
  auto save = [&](const std::string& name, const Mesh& m) {
    write_text_file(dir / name, write_mesh(m));
    std::cout << name << ": " << m.element_count() << " elements, " << m.point_count() << " points\n";
  };

  save("quad_rectangle.su2", generate::rectangle_quads({0, 0.5, 1.5, 2}, {0, 1, 2}));
  save("equilateral_triangles.su2", generate::equilateral_triangles(4));
  save("interface_4x4_5x5.su2", generate::planar_interface_pair(4, 5));
  save("interface_matched.su2", generate::planar_interface_pair(4, 4));
  save("interface_disjoint.su2", generate::planar_interface_pair(3, 3, 5.0, 0.0));
  save("cylinder_sliding.su2", generate::cylindrical_interface_pair(24, 30, 1.0, 0.5, 0.1));
  save("spherical_shell.su2", generate::spherical_shell(1.0, 3.0, 4, 4));

  generate::BladeBoxSpec coarse;
  coarse.span_cells = 6;
  coarse.chord_cells = 4;
  coarse.thickness_cells = 1;
  coarse.outer_x = 3;
  coarse.outer_y = 3;
  coarse.outer_z = 3;
  save("blade_box_coarse.su2", generate::blade_in_box(coarse));

  if (argc > 2 && std::string(argv[2]) == "--desk") {
    save("blade_box_desk.su2", generate::blade_in_box(generate::BladeBoxSpec{}));
  }
  return 0;
}
