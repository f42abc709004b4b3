#pragma once

#include <span>
#include <vector>

#include "rotormesh/exec.hpp"
#include "rotormesh/types.hpp"

namespace rotormesh {

/// Fourier law of one blade angle in azimuth:
///   value(psi) = mean - sum_k [ sin_k sin(k psi) + cos_k cos(k psi) ]
/// with k starting at 1. All angles in radians.
struct MotionSeries {
  double mean = 0.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;

  bool is_constant() const;
};

double eval_series(const MotionSeries& s, double psi);

/// Blade angles at one azimuth.
struct HingeAngles {
  double flap = 0.0;     ///< beta
  double leadlag = 0.0;  ///< delta
  double pitch = 0.0;    ///< theta
};

/// Prescribed rigid-blade motion. Rotation is about +z at `rotation_rate`.
struct BladeMotion {
  MotionSeries flap;
  MotionSeries leadlag;
  MotionSeries pitch;
  Vec3 hinge = Vec3::Zero();
  double azimuth_offset = 0.0;
  double rotation_rate = 1.0;  ///< rad/s, must be positive
  /// When false, the hinge translation is dropped and points are mapped by
  /// C_rot C_hinge (x - hinge) alone.
  bool restore_hinge_offset = true;

  /// Throws Error when rotation_rate <= 0 or a coefficient is not finite.
  void validate() const;
  double azimuth(double t) const { return rotation_rate * t + azimuth_offset; }
  HingeAngles angles(double psi) const;
};

/// Rotation by psi about +z.
Mat3 azimuth_matrix(double psi);
/// Flap rotation about y; carries +x toward +z for positive beta.
Mat3 flap_matrix(double beta);
/// Lead-lag rotation about z.
Mat3 leadlag_matrix(double delta);
/// Pitch rotation about x; carries +y toward +z for positive theta.
Mat3 pitch_matrix(double theta);
/// flap_matrix(beta) * leadlag_matrix(delta) * pitch_matrix(theta).
Mat3 hinge_matrix(double beta, double delta, double theta);
Mat3 hinge_matrix(const HingeAngles& a);

struct BladePosition {
  Vec3 position;    ///< fixed frame
  Vec3 hinge_frame; ///< after the hinge rotation, before the azimuthal one
};

/// Position of blade point x (given in the blade's reference frame) at time t:
///   hinge_frame = hinge + C_hinge(beta, delta, theta) (x - hinge)
///   position    = C_rot(psi) hinge_frame
/// with psi = omega t + azimuth_offset.
BladePosition blade_point(const Vec3& x, const BladeMotion& motion, double t);

/// blade_point over a whole array (fixed-frame positions).
std::vector<Vec3> blade_points(std::span<const Vec3> x, const BladeMotion& motion, double t,
                               Exec exec = Exec::parallel);

/// Tabulated flight condition. Angles are not stored here.
struct FlightCondition {
  double tip_mach = 0.0;
  double freestream_mach = 0.0;
  double advance_ratio = 0.0;
  double rotor_radius = 1.0;
  double thrust_coefficient = 0.0;
};

/// M_tip (r/R + mu sin psi). Throws Error when r_over_R is outside [0, 1].
double blade_normal_mach(double r_over_R, const FlightCondition& fc, double psi);

/// omega x r.
Vec3 rotating_frame_velocity(const Vec3& omega, const Vec3& r);

/// (3 x^{n+1} - 4 x^n + x^{n-1}) / (2 dt), componentwise over point arrays.
/// Throws Error for dt <= 0 or mismatched lengths.
std::vector<Vec3> grid_velocity_bdf2(std::span<const Vec3> x_np1, std::span<const Vec3> x_n,
                                     std::span<const Vec3> x_nm1, double dt);

/// One-sided first-order (x^{n+1} - x^n) / dt, used before two history
/// levels exist.
std::vector<Vec3> grid_velocity_backward(std::span<const Vec3> x_np1, std::span<const Vec3> x_n,
                                         double dt);

}  // namespace rotormesh
