#include "rotormesh/rotor_cycle.hpp"

#include <cmath>

#include <fmt/format.h>

#include "rotormesh/error.hpp"
#include "rotormesh/kinematics.hpp"

namespace rotormesh {

Vec3 hub_frame_position(const Vec3& x, const BladeMotion& motion, double t) {
  const Mat3 to_blade = azimuth_matrix(-motion.azimuth_offset);
  const Mat3 from_blade = azimuth_matrix(motion.azimuth_offset);
  const Mat3 c = hinge_matrix(motion.angles(motion.azimuth(t)));
  const Vec3 local = to_blade * x - motion.hinge;
  const Vec3 moved = motion.restore_hinge_offset ? Vec3(motion.hinge + c * local) : Vec3(c * local);
  return from_blade * moved;
}

namespace {

struct BladeSurface {
  std::string marker;
  BladeMotion motion;
  MarkerPoints points;
};

Mesh mesh_at(const Mesh& reference, const std::vector<BladeSurface>& blades,
             const RunConfigFile& config, const GreedyOptions& greedy, const CycleOptions& options,
             double t, GreedyHistory* history) {
  MarkerDisplacements disp;
  bool moving = false;
  for (const auto& b : blades) {
    std::vector<Vec3> d(b.points.coords.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      d[i] = hub_frame_position(b.points.coords[i], b.motion, t) - b.points.coords[i];
      moving = moving || !d[i].isZero(0.0);
    }
    disp.emplace(b.marker, std::move(d));
  }

  std::vector<Vec3> pts;
  if (moving) {
    DeformResult r = deform_mesh(reference, disp, config.rbf.fixed_markers, greedy);
    if (history) *history = std::move(r.history);
    pts = r.mesh.points();
  } else {
    if (history) *history = GreedyHistory{};
    pts = reference.points();
  }

  if (options.frame == Frame::fixed) {
    const Mat3 rot = azimuth_matrix(config.omega() * t);
    for (auto& p : pts) p = rot * p;
  }
  return reference.with_points(std::move(pts));
}

double max_distance(std::span<const Vec3> a, std::span<const Vec3> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, (a[i] - b[i]).norm());
  return m;
}

}  // namespace

CycleResult run_rotor_cycle(const Mesh& reference, const RunConfigFile& config,
                            const CycleOptions& options,
                            const std::function<void(const CycleStep&)>& on_step) {
  if (options.steps_per_rev < 1) throw Error("steps per revolution must be at least 1");
  if (!(options.revolutions >= 0.0)) throw Error("revolutions must be non-negative");
  if (static_cast<int>(options.blade_markers.size()) > config.rotor.n_blades) {
    throw Error(fmt::format("{} blade markers given for a {}-bladed rotor",
                            options.blade_markers.size(), config.rotor.n_blades));
  }

  std::vector<BladeSurface> blades;
  for (std::size_t i = 0; i < options.blade_markers.size(); ++i) {
    const auto& name = options.blade_markers[i];
    blades.push_back({name, config.blade_motion(static_cast<int>(i)),
                      extract_marker_points(reference, name)});
  }
  for (const auto& name : config.rbf.fixed_markers) (void)reference.marker(name);

  const GreedyOptions greedy = config.greedy_options(options.exec);
  const double omega = config.omega();
  const double dt = 2.0 * kPi / (omega * options.steps_per_rev);
  const int n_steps =
      static_cast<int>(std::llround(options.revolutions * options.steps_per_rev));

  std::vector<Index> blade_idx;
  for (const auto& b : blades) {
    blade_idx.insert(blade_idx.end(), b.points.indices.begin(), b.points.indices.end());
  }

  CycleResult result;
  // Positions one step before t = 0, only used for the first grid velocity.
  Mesh prev2 = mesh_at(reference, blades, config, greedy, options, -dt, nullptr);
  std::optional<Mesh> prev1;
  std::optional<Mesh> first;

  for (int n = 0; n <= n_steps; ++n) {
    const double t = n * dt;
    GreedyHistory history;
    Mesh current = mesh_at(reference, blades, config, greedy, options, t, &history);
    QualityReport q = orthogonality_metrics(current, options.exec);
    if (q.negative_volume_count > 0) {
      result.failed = true;
      result.failed_step = n;
      result.failed_quality = q;
      break;
    }

    std::vector<Vec3> velocity;
    int order = 1;
    if (n == 0) {
      velocity = grid_velocity_backward(current.points(), prev2.points(), dt);
    } else if (n == 1) {
      velocity = grid_velocity_backward(current.points(), prev1->points(), dt);
    } else {
      velocity = grid_velocity_bdf2(current.points(), prev1->points(), prev2.points(), dt);
      order = 2;
    }

    result.quality.push_back(q);
    result.times.push_back(t);
    result.steps_run = n + 1;
    if (on_step) {
      on_step(CycleStep{n, t, rad_to_deg(omega * t), &current, &velocity, order, q, &history});
    }

    if (!first) first = current;
    if (n > 0) prev2 = std::move(*prev1);
    prev1 = std::move(current);
  }

  if (first && prev1) {
    const auto& a = first->points();
    const auto& b = prev1->points();
    result.point_return_error = max_distance(a, b);
    for (Index i : blade_idx) {
      result.surface_return_error = std::max(result.surface_return_error, (a[i] - b[i]).norm());
    }
  }
  return result;
}

}  // namespace rotormesh
