#pragma once

#include <span>
#include <string>
#include <vector>

#include "rotormesh/rbf.hpp"

namespace rotormesh {

struct GreedyOptions {
  RbfKernel kernel{KernelKind::wendland_c2, 1.0};
  bool with_affine = false;
  double tol = 1e-4;  ///< metres, on the Euclidean displacement mismatch
  /// Cumulative control-point budget at the end of each level.
  std::vector<int> level_caps{8, 32, 64, 256};
  Exec exec = Exec::parallel;
};

struct GreedyLevel {
  int level = 0;
  std::size_t points = 0;  ///< control points selected so far
  double max_error = 0.0;  ///< metres
  double mean_error = 0.0;
  double seconds = 0.0;
};

struct GreedyHistory {
  std::vector<GreedyLevel> levels;
  std::vector<Index> selected;  ///< surface indices, in selection order
  double max_prescribed = 0.0;  ///< largest prescribed displacement norm
  bool converged = false;
  double solve_seconds = 0.0;
  double evaluate_seconds = 0.0;
  double total_seconds = 0.0;

  /// Level-end max error divided by max_prescribed (0 when nothing moves).
  double normalized_error(std::size_t level) const;
  /// CSV with header `level,points,max_err,mean_err,seconds`.
  std::string to_csv() const;
};

struct GreedyResult {
  RbfSolution solution;
  GreedyHistory history;
};

/// Multi-level greedy control-point selection.
///
/// Level 1 starts from the point of largest displacement (plus points
/// spanning the surface's affine hull when the polynomial block is on).
/// Each iteration adds the surface point with the largest residual and
/// re-solves. A level stops at its cumulative cap; the next level fits the
/// residual left on the whole surface, keeping the earlier control points so
/// every selected point stays interpolated. The returned solution is the sum
/// of the level fields. Stops once the max residual drops below `tol` or the
/// levels run out; a level that cannot improve the max residual is rolled
/// back, so level-end errors never increase.
///
/// Throws Error for empty input, non-finite displacements or tol <= 0.
GreedyResult greedy_select(std::span<const Vec3> surface_points,
                           std::span<const Vec3> displacements, const GreedyOptions& options);

}  // namespace rotormesh
