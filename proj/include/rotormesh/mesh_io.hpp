#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rotormesh/mesh.hpp"

namespace rotormesh {

/// Parses the native ASCII mesh format (NDIME/NELEM/NPOIN/NMARK sections,
/// `%` comments). Errors are ParseError with the offending line number.
Mesh parse_mesh(std::string_view text);
Mesh read_mesh_file(const std::filesystem::path& path);

/// Writes the native format. Coordinates use 17 significant digits, so
/// parse(write(m)) reproduces the points exactly.
std::string write_mesh(const Mesh& mesh);

/// Named per-point data for visualization output.
struct PointField {
  std::string name;
  std::variant<std::vector<double>, std::vector<Vec3>> values;
};

/// Legacy ASCII unstructured-grid visualization file of the mesh cells.
/// Throws Error when a field does not have one value per point.
std::string write_vtk(const Mesh& mesh, std::span<const PointField> fields = {},
                      std::string_view title = "rotormesh");

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace rotormesh
