#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rotormesh/error.hpp"
#include "rotormesh/kinematics.hpp"

using namespace rotormesh;

namespace {

MotionSeries deg_series(double mean, std::vector<double> s, std::vector<double> c) {
  MotionSeries m;
  m.mean = deg_to_rad(mean);
  for (double v : s) m.sin_coeffs.push_back(deg_to_rad(v));
  for (double v : c) m.cos_coeffs.push_back(deg_to_rad(v));
  return m;
}

BladeMotion forward_flight_motion() {
  BladeMotion m;
  m.pitch = deg_series(11.7, {1.7}, {-5.5});
  m.flap = deg_series(2.75, {-0.15}, {2.13});
  m.leadlag = deg_series(0.5, {0.2, -0.1}, {0.3});
  m.hinge = Vec3(0.3, 0.05, -0.02);
  m.rotation_rate = 33.0;
  return m;
}

void expect_rotation(const Mat3& m) {
  EXPECT_LT((m * m.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(m.determinant(), 1.0, 1e-12);
}

}  // namespace

TEST(Series, TableValues) {
  const MotionSeries pitch = deg_series(11.7, {1.7}, {-5.5});
  EXPECT_NEAR(rad_to_deg(eval_series(pitch, 0.0)), 17.2, 1e-12);
  EXPECT_NEAR(rad_to_deg(eval_series(pitch, kPi / 2)), 10.0, 1e-12);
  EXPECT_NEAR(rad_to_deg(eval_series(pitch, kPi)), 6.2, 1e-12);
  const MotionSeries flap = deg_series(2.75, {-0.15}, {2.13});
  EXPECT_NEAR(rad_to_deg(eval_series(flap, kPi / 2)), 2.90, 1e-12);
  EXPECT_EQ(eval_series(MotionSeries{}, 1.234), 0.0);
}

TEST(Series, Periodic) {
  const MotionSeries s = deg_series(3, {1, 2, -0.5}, {0.25, -1});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 200; ++i) {
    const double psi = u(rng);
    EXPECT_NEAR(eval_series(s, psi), eval_series(s, psi + 2 * kPi), 1e-12);
  }
}

TEST(Matrices, AzimuthExamples) {
  EXPECT_TRUE(azimuth_matrix(0).isApprox(Mat3::Identity()));
  EXPECT_LT((azimuth_matrix(kPi / 2) * Vec3::UnitX() - Vec3::UnitY()).norm(), 1e-15);
  EXPECT_LT((azimuth_matrix(kPi) - Vec3(-1, -1, 1).asDiagonal().toDenseMatrix()).norm(), 1e-15);
}

TEST(Matrices, HingeExamples) {
  EXPECT_TRUE(hinge_matrix(0, 0, 0).isApprox(Mat3::Identity()));
  EXPECT_LT((hinge_matrix(kPi / 2, 0, 0) * Vec3::UnitX() - Vec3::UnitZ()).norm(), 1e-15);
  EXPECT_LT((hinge_matrix(0, 0, kPi / 2) * Vec3::UnitY() - Vec3::UnitZ()).norm(), 1e-15);
}

TEST(Matrices, RotationsAreProper) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int i = 0; i < 100; ++i) {
    expect_rotation(azimuth_matrix(u(rng)));
    expect_rotation(hinge_matrix(u(rng), u(rng), u(rng)));
  }
}

TEST(Matrices, HingeIsProductOfIndividualMatrices) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int i = 0; i < 100; ++i) {
    const double b = u(rng), d = u(rng), t = u(rng);
    const Mat3 p = flap_matrix(b) * leadlag_matrix(d) * pitch_matrix(t);
    EXPECT_LE((hinge_matrix(b, d, t) - p).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Matrices, ClosedFormCompositeMatchesWithFlapAngleNegated) {
  // The closed-form composite corresponds to the product with beta -> -beta.
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int i = 0; i < 100; ++i) {
    const double b = u(rng), d = u(rng), t = u(rng);
    EXPECT_LE((hinge_matrix(-b, d, t) - oracle::closed_form_composite(b, d, t)).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(BladePoint, Examples) {
  BladeMotion m;
  m.hinge = Vec3(0.2, 0, 0);
  const Vec3 x(1.5, 0.3, 0.1);
  EXPECT_LT((blade_point(x, m, 0.0).position - x).norm(), 1e-15);

  m.pitch.mean = deg_to_rad(20);
  m.flap.mean = deg_to_rad(5);
  m.rotation_rate = 2.0;
  const double t = 0.37;
  EXPECT_LT((blade_point(m.hinge, m, t).position - azimuth_matrix(2.0 * t) * m.hinge).norm(), 1e-15);

  BladeMotion p;
  p.hinge = Vec3(0.5, -0.1, 0.2);
  p.pitch.mean = kPi / 2;
  const double c = 0.7;
  const auto bp = blade_point(p.hinge + Vec3(0, c, 0), p, 0.0);
  EXPECT_LT((bp.position - (p.hinge + Vec3(0, 0, c))).norm(), 1e-15);
  EXPECT_LT((bp.hinge_frame - bp.position).norm(), 1e-15);
}

TEST(BladePoint, WithoutHingeRestorationDropsTranslation) {
  BladeMotion m;
  m.hinge = Vec3(1, 0, 0);
  m.restore_hinge_offset = false;
  EXPECT_LT(blade_point(Vec3(1, 0, 0), m, 0.0).position.norm(), 1e-15);
}

TEST(BladePoint, PeriodicInAzimuth) {
  const BladeMotion m = forward_flight_motion();
  const double period = 2 * kPi / m.rotation_rate;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 50; ++i) {
    const Vec3 x(u(rng), u(rng), u(rng));
    const double t = u(rng);
    EXPECT_LT((blade_point(x, m, t).position - blade_point(x, m, t + period).position).norm(), 1e-12);
  }
}

TEST(BladePoint, HoverAxisymmetry) {
  BladeMotion one;
  one.pitch.mean = deg_to_rad(8);
  one.flap.mean = deg_to_rad(1.5);
  one.hinge = Vec3(0.1, 0, 0);
  one.rotation_rate = 130.9;
  BladeMotion two = one;
  two.azimuth_offset = kPi;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 50; ++i) {
    const Vec3 x(u(rng), u(rng) - 0.5, 0.05 * u(rng));
    const double t = 0.05 * u(rng);
    const Vec3 b1 = blade_point(x, one, t).position;
    const Vec3 b2 = blade_point(x, two, t).position;
    EXPECT_LT((b2 - azimuth_matrix(kPi) * b1).norm(), 1e-12);
  }
}

TEST(BladePoint, SerialAndParallelAgreeBitwise) {
  const BladeMotion m = forward_flight_motion();
  std::vector<Vec3> xs;
  for (int i = 0; i < 5000; ++i) xs.emplace_back(0.001 * i, std::sin(i), std::cos(0.3 * i));
  EXPECT_EQ(blade_points(xs, m, 0.12, Exec::serial), blade_points(xs, m, 0.12, Exec::parallel));
}

TEST(BladeMotion, RejectsNonPositiveRate) {
  BladeMotion m;
  m.rotation_rate = 0.0;
  EXPECT_THROW(m.validate(), Error);
  EXPECT_THROW(blade_point(Vec3::Zero(), m, 0.0), Error);
}

TEST(NormalMach, Examples) {
  FlightCondition low{0.65, 0.12, 0.19, 6.71, 0.00464};
  EXPECT_NEAR(blade_normal_mach(1.0, low, kPi / 2), 0.7735, 1e-12);
  EXPECT_NEAR(blade_normal_mach(1.0, low, 0.0), 0.65, 1e-15);
  FlightCondition high{0.64, 0.24, 0.38, 6.71, 0.00474};
  EXPECT_NEAR(blade_normal_mach(0.2, high, 1.5 * kPi), -0.1152, 1e-12);
  EXPECT_THROW(blade_normal_mach(1.01, low, 0.0), Error);
  EXPECT_THROW(blade_normal_mach(-0.1, low, 0.0), Error);
}

TEST(NormalMach, SineSymmetry) {
  FlightCondition fc{0.6, 0.1, 0.2, 1, 0};
  for (int i = 0; i < 100; ++i) {
    const double psi = 0.0731 * i;
    EXPECT_NEAR(blade_normal_mach(0.7, fc, psi), blade_normal_mach(0.7, fc, kPi - psi), 1e-15);
  }
}

TEST(RotatingFrame, Examples) {
  EXPECT_EQ(rotating_frame_velocity(Vec3(0, 0, 3), Vec3(0, 0, 2)), Vec3::Zero());
  EXPECT_EQ(rotating_frame_velocity(Vec3::UnitZ(), Vec3::UnitY()), Vec3(-1, 0, 0));
  const double omega = 1250.0 * 2 * kPi / 60;
  const Vec3 u = rotating_frame_velocity(Vec3(0, 0, omega), Vec3(1.143, 0, 0));
  EXPECT_NEAR(u.y(), 149.62, 0.005);
  EXPECT_NEAR(u.y() / 340.8, 0.439, 0.002);
}

TEST(GridVelocity, ExactOnLowDegreePolynomials) {
  const double dt = 0.1, t = 1.3;
  auto at = [](double tt) { return std::vector<Vec3>{Vec3(2 * tt, -tt, 0.5), Vec3(tt * tt, 3 * tt * tt - tt, 1)}; };
  const auto v = grid_velocity_bdf2(at(t), at(t - dt), at(t - 2 * dt), dt);
  EXPECT_LT((v[0] - Vec3(2, -1, 0)).norm(), 1e-12);
  EXPECT_LT((v[1] - Vec3(2 * t, 6 * t - 1, 0)).norm(), 1e-12);
  const auto c = grid_velocity_bdf2(at(0), at(0), at(0), dt);
  EXPECT_EQ(c[0], Vec3::Zero());
}

TEST(GridVelocity, SecondOrderOnSine) {
  std::vector<double> errs;
  for (double dt : {0.1, 0.05, 0.025}) {
    double e = 0.0;
    for (int n = 2; n * dt <= 6.0; ++n) {
      const double t = n * dt;
      const std::vector<Vec3> a{Vec3(std::sin(t), 0, 0)}, b{Vec3(std::sin(t - dt), 0, 0)},
          c{Vec3(std::sin(t - 2 * dt), 0, 0)};
      e = std::max(e, std::abs(grid_velocity_bdf2(a, b, c, dt)[0].x() - std::cos(t)));
    }
    errs.push_back(e);
  }
  EXPECT_GE(std::log2(errs[0] / errs[1]), 1.9);
  EXPECT_GE(std::log2(errs[1] / errs[2]), 1.9);
}

TEST(GridVelocity, Errors) {
  const std::vector<Vec3> a(2, Vec3::Zero()), b(3, Vec3::Zero());
  EXPECT_THROW(grid_velocity_bdf2(a, a, a, 0.0), Error);
  EXPECT_THROW(grid_velocity_bdf2(a, b, a, 0.1), Error);
  EXPECT_THROW(grid_velocity_backward(a, b, 0.1), Error);
}
