#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "rotormesh/exec.hpp"
#include "rotormesh/types.hpp"

namespace rotormesh {

enum class KernelKind { wendland_c2, thin_plate_spline, gaussian, multiquadric, inverse_multiquadric };

std::string_view kernel_name(KernelKind kind);
std::optional<KernelKind> kernel_from_name(std::string_view name);

/// Radial basis function of Euclidean distance.
///
///   wendland_c2           (1 - d/r)^4 (4 d/r + 1) for d < r, else 0
///   thin_plate_spline     d^2 ln d (0 at d = 0); radius unused
///   gaussian              exp(-(d/r)^2)
///   multiquadric          sqrt(1 + (d/r)^2)
///   inverse_multiquadric  1 / sqrt(1 + (d/r)^2)
class RbfKernel {
 public:
  /// Throws Error when the kind needs a radius and it is not positive.
  explicit RbfKernel(KernelKind kind = KernelKind::wendland_c2, double support_radius = 1.0);

  KernelKind kind() const { return kind_; }
  double support_radius() const { return radius_; }
  bool compact() const { return kind_ == KernelKind::wendland_c2; }

  double operator()(double distance) const;

 private:
  KernelKind kind_;
  double radius_;
};

/// Throws Error for a negative distance.
double kernel_eval(const RbfKernel& kernel, double distance);

/// Row i holds the affine part of displacement component i as
/// [constant, d/dx, d/dy, d/dz].
using AffineTerms = Eigen::Matrix<double, 3, 4>;

/// Interpolant f(r) = sum_i w_i phi(|r - c_i|) + affine(r).
struct RbfSolution {
  std::vector<Vec3> centers;
  std::vector<Vec3> weights;
  RbfKernel kernel;
  std::optional<AffineTerms> affine;
  double condition_estimate = 1.0;

  Vec3 evaluate(const Vec3& r) const;
};

/// Solves the dense interpolation system for one weight triple per center.
/// With `with_affine`, a linear polynomial block with orthogonality side
/// conditions is appended; directions along which the centers do not spread
/// (coplanar or collinear sets) are left out of the polynomial.
///
/// Throws Error for empty input, length mismatch or duplicate centers, and
/// NumericalError when the system is singular or too ill-conditioned.
RbfSolution solve_weights(std::span<const Vec3> centers, std::span<const Vec3> displacements,
                          const RbfKernel& kernel, bool with_affine);

/// Evaluates the interpolant at every target. The serial path sums over all
/// centers; the parallel path bins compactly supported centers and skips
/// those out of reach. Both sum in ascending center order and agree bitwise.
std::vector<Vec3> evaluate_field(const RbfSolution& solution, std::span<const Vec3> targets,
                                 Exec exec = Exec::parallel);

/// Principal frame of a point cloud: the directions along which it has
/// non-negligible spread, with their standard deviations.
struct AffineFrame {
  Vec3 origin = Vec3::Zero();
  std::vector<Vec3> axes;
  std::vector<double> scales;

  int rank() const { return static_cast<int>(axes.size()); }
};

AffineFrame fit_affine_frame(std::span<const Vec3> points);

}  // namespace rotormesh
