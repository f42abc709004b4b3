#include "rotormesh/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "rotormesh/error.hpp"

namespace rotormesh {

bool MotionSeries::is_constant() const {
  auto zero = [](double c) { return c == 0.0; };
  return std::all_of(cos_coeffs.begin(), cos_coeffs.end(), zero) &&
         std::all_of(sin_coeffs.begin(), sin_coeffs.end(), zero);
}

double eval_series(const MotionSeries& s, double psi) {
  double value = s.mean;
  const std::size_t n = std::max(s.cos_coeffs.size(), s.sin_coeffs.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double k = static_cast<double>(i + 1);
    if (i < s.sin_coeffs.size()) value -= s.sin_coeffs[i] * std::sin(k * psi);
    if (i < s.cos_coeffs.size()) value -= s.cos_coeffs[i] * std::cos(k * psi);
  }
  return value;
}

void BladeMotion::validate() const {
  if (!(rotation_rate > 0.0) || !std::isfinite(rotation_rate)) {
    throw Error(fmt::format("rotation rate must be positive, got {}", rotation_rate));
  }
  for (const auto* s : {&flap, &leadlag, &pitch}) {
    bool finite = std::isfinite(s->mean);
    for (double c : s->cos_coeffs) finite = finite && std::isfinite(c);
    for (double c : s->sin_coeffs) finite = finite && std::isfinite(c);
    if (!finite) throw Error("blade motion coefficients must be finite");
  }
  if (!hinge.allFinite() || !std::isfinite(azimuth_offset)) {
    throw Error("hinge position and azimuth offset must be finite");
  }
}

HingeAngles BladeMotion::angles(double psi) const {
  return {eval_series(flap, psi), eval_series(leadlag, psi), eval_series(pitch, psi)};
}

Mat3 azimuth_matrix(double psi) {
  const double c = std::cos(psi), s = std::sin(psi);
  Mat3 m;
  m << c, -s, 0.0,
       s, c, 0.0,
       0.0, 0.0, 1.0;
  return m;
}

Mat3 flap_matrix(double beta) {
  const double c = std::cos(beta), s = std::sin(beta);
  Mat3 m;
  m << c, 0.0, -s,
       0.0, 1.0, 0.0,
       s, 0.0, c;
  return m;
}

Mat3 leadlag_matrix(double delta) {
  const double c = std::cos(delta), s = std::sin(delta);
  Mat3 m;
  m << c, -s, 0.0,
       s, c, 0.0,
       0.0, 0.0, 1.0;
  return m;
}

Mat3 pitch_matrix(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Mat3 m;
  m << 1.0, 0.0, 0.0,
       0.0, c, -s,
       0.0, s, c;
  return m;
}

Mat3 hinge_matrix(double beta, double delta, double theta) {
  return flap_matrix(beta) * leadlag_matrix(delta) * pitch_matrix(theta);
}

Mat3 hinge_matrix(const HingeAngles& a) { return hinge_matrix(a.flap, a.leadlag, a.pitch); }

namespace {

struct BladeTransform {
  Mat3 rot;
  Mat3 hinge_rot;
  Vec3 hinge;
  bool restore;

  BladePosition operator()(const Vec3& x) const {
    const Vec3 arm = hinge_rot * (x - hinge);
    BladePosition out;
    out.hinge_frame = restore ? Vec3(hinge + arm) : arm;
    out.position = rot * out.hinge_frame;
    return out;
  }
};

BladeTransform make_transform(const BladeMotion& motion, double t) {
  motion.validate();
  const double psi = motion.azimuth(t);
  return {azimuth_matrix(psi), hinge_matrix(motion.angles(psi)), motion.hinge,
          motion.restore_hinge_offset};
}

}  // namespace

BladePosition blade_point(const Vec3& x, const BladeMotion& motion, double t) {
  return make_transform(motion, t)(x);
}

std::vector<Vec3> blade_points(std::span<const Vec3> x, const BladeMotion& motion, double t,
                               Exec exec) {
  const BladeTransform tr = make_transform(motion, t);
  std::vector<Vec3> out(x.size());
  const auto n = static_cast<Index>(x.size());
  if (exec == Exec::serial) {
    for (Index i = 0; i < n; ++i) out[i] = tr(x[i]).position;
  } else {
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) out[i] = tr(x[i]).position;
  }
  return out;
}

double blade_normal_mach(double r_over_R, const FlightCondition& fc, double psi) {
  if (!(r_over_R >= 0.0 && r_over_R <= 1.0)) {
    throw Error(fmt::format("r/R must lie in [0, 1], got {}", r_over_R));
  }
  return fc.tip_mach * (r_over_R + fc.advance_ratio * std::sin(psi));
}

Vec3 rotating_frame_velocity(const Vec3& omega, const Vec3& r) { return omega.cross(r); }

namespace {

void check_dt(double dt) {
  if (!(dt > 0.0)) throw Error(fmt::format("time step must be positive, got {}", dt));
}

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw Error(fmt::format("point array length mismatch: {} vs {}", a, b));
}

}  // namespace

std::vector<Vec3> grid_velocity_bdf2(std::span<const Vec3> x_np1, std::span<const Vec3> x_n,
                                     std::span<const Vec3> x_nm1, double dt) {
  check_dt(dt);
  check_lengths(x_np1.size(), x_n.size());
  check_lengths(x_np1.size(), x_nm1.size());
  std::vector<Vec3> u(x_np1.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    // Difference form: a grid at rest gives exactly zero.
    u[i] = (3.0 * (x_np1[i] - x_n[i]) - (x_n[i] - x_nm1[i])) / (2.0 * dt);
  }
  return u;
}

std::vector<Vec3> grid_velocity_backward(std::span<const Vec3> x_np1, std::span<const Vec3> x_n,
                                         double dt) {
  check_dt(dt);
  check_lengths(x_np1.size(), x_n.size());
  std::vector<Vec3> u(x_np1.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = (x_np1[i] - x_n[i]) / dt;
  return u;
}

}  // namespace rotormesh
