#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rotormesh/supermesh.hpp"
#include "rotormesh/types.hpp"

namespace oracle {

using rotormesh::Mat3;
using rotormesh::Polygon;
using rotormesh::Vec2;
using rotormesh::Vec3;

std::filesystem::path fixture(const std::string& relative);

/// Closed-form flap/lead-lag/pitch composite, entry by entry.
Mat3 closed_form_composite(double beta, double delta, double theta);

/// Even-odd point-in-polygon test.
bool inside(const Polygon& poly, const Vec2& p);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Monte-Carlo area of the region inside every polygon, sampled uniformly
/// in `lo`..`hi`.
McEstimate mc_area(const std::vector<Polygon>& polys, const Vec2& lo, const Vec2& hi,
                   std::size_t samples, unsigned seed);

/// Minimal legacy-VTK unstructured-grid reader, independent of the writer.
struct VtkGrid {
  std::vector<Vec3> points;
  std::vector<std::vector<long>> cells;
  std::vector<int> cell_types;
  std::map<std::string, std::vector<double>> scalars;
  std::map<std::string, std::vector<Vec3>> vectors;
};
VtkGrid read_vtk(const std::string& text);

/// Dense interpolation with every point as a center, solved from scratch
/// with a full-pivot LU (no polynomial block).
std::vector<Vec3> dense_interpolate(const std::vector<Vec3>& centers,
                                    const std::vector<Vec3>& values, double radius,
                                    const std::vector<Vec3>& targets);

/// Wendland C2 written out independently.
double wendland(double d, double radius);

/// Regular grid of `n` x `n` points on [0,1]^2 at z = 0.
std::vector<Vec3> unit_grid(int n);

}  // namespace oracle
