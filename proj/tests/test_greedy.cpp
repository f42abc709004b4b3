#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rotormesh/error.hpp"
#include "rotormesh/greedy.hpp"

using namespace rotormesh;

namespace {

std::vector<Vec3> sine_field(const std::vector<Vec3>& pts) {
  std::vector<Vec3> d;
  for (const auto& p : pts) d.emplace_back(0, 0, 0.01 * std::sin(kPi * p.x()));
  return d;
}

GreedyOptions wendland(double radius, double tol) {
  GreedyOptions o;
  o.kernel = RbfKernel(KernelKind::wendland_c2, radius);
  o.tol = tol;
  return o;
}

void expect_history_invariants(const GreedyResult& r, std::span<const Vec3> pts,
                               std::span<const Vec3> disp) {
  const auto& h = r.history;
  for (std::size_t i = 1; i < h.levels.size(); ++i) {
    EXPECT_LE(h.levels[i].max_error, h.levels[i - 1].max_error);
    EXPECT_GE(h.levels[i].points, h.levels[i - 1].points);
  }
  for (Index s : h.selected) EXPECT_LT((r.solution.evaluate(pts[s]) - disp[s]).norm(), 1e-9);
  // The final max error equals the error of the returned solution.
  double m = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) m = std::max(m, (r.solution.evaluate(pts[i]) - disp[i]).norm());
  EXPECT_NEAR(m, h.levels.back().max_error, 1e-12);
}

}  // namespace

TEST(Greedy, AllZeroStopsAtSeed) {
  const auto pts = oracle::unit_grid(5);
  const std::vector<Vec3> z(pts.size(), Vec3::Zero());
  const auto r = greedy_select(pts, z, wendland(0.5, 1e-6));
  ASSERT_EQ(r.history.levels.size(), 1u);
  EXPECT_EQ(r.history.levels[0].points, 1u);
  EXPECT_EQ(r.history.levels[0].max_error, 0.0);
  EXPECT_TRUE(r.history.converged);
  EXPECT_EQ(r.history.normalized_error(0), 0.0);
}

TEST(Greedy, RigidTranslationWithAffineNeedsNoAdditions) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Vec3> pts;
  for (int i = 0; i < 200; ++i) pts.emplace_back(u(rng), u(rng), u(rng));
  const std::vector<Vec3> d(pts.size(), Vec3(0.1, 0.2, -0.3));
  auto o = wendland(0.5, 1e-6);
  o.with_affine = true;
  const auto r = greedy_select(pts, d, o);
  ASSERT_EQ(r.history.levels.size(), 1u);
  EXPECT_LT(r.history.levels[0].max_error, 1e-9);
  EXPECT_EQ(r.history.levels[0].points, 4u);  // seed plus affine-hull points
}

TEST(Greedy, SineFieldReachesToleranceWithFewPoints) {
  const auto pts = oracle::unit_grid(20);
  const auto d = sine_field(pts);
  const auto r = greedy_select(pts, d, wendland(0.5, 1e-4));
  EXPECT_TRUE(r.history.converged);
  EXPECT_LT(r.history.levels.back().max_error, 1e-4);
  EXPECT_LT(r.history.selected.size(), 400u);
  expect_history_invariants(r, pts, d);

  // Full dense interpolation reproduces the data on every point.
  const auto dense = oracle::dense_interpolate(pts, d, 0.5, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_LT((dense[i] - d[i]).norm(), 1e-10);
}

TEST(Greedy, HistoryInvariantsOnRandomFields) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Vec3> pts, d;
    for (int i = 0; i < 300; ++i) {
      pts.emplace_back(u(rng), u(rng), 0.2 * u(rng));
      d.emplace_back(0.01 * std::sin(3 * pts.back().x()), 0.02 * pts.back().y() * pts.back().x(),
                     0.01 * u(rng));
    }
    auto o = wendland(0.6, 1e-5);
    o.with_affine = trial % 2 == 1;
    o.level_caps = {4, 16, 40};
    const auto r = greedy_select(pts, d, o);
    expect_history_invariants(r, pts, d);
    EXPECT_LE(r.history.selected.size(), 40u);
  }
}

TEST(Greedy, CsvExport) {
  const auto pts = oracle::unit_grid(8);
  const auto r = greedy_select(pts, sine_field(pts), wendland(0.5, 1e-4));
  const std::string csv = r.history.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "level,points,max_err,mean_err,seconds");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), long(r.history.levels.size() + 1));
}

TEST(Greedy, Errors) {
  const auto pts = oracle::unit_grid(3);
  std::vector<Vec3> d(pts.size(), Vec3::Zero());
  EXPECT_THROW(greedy_select(pts, d, wendland(0.5, 0.0)), Error);
  EXPECT_THROW(greedy_select({}, {}, wendland(0.5, 1e-3)), Error);
  d[2] = Vec3(INFINITY, 0, 0);
  EXPECT_THROW(greedy_select(pts, d, wendland(0.5, 1e-3)), Error);
}
