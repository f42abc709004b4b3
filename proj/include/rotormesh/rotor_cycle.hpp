#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rotormesh/config.hpp"
#include "rotormesh/deform.hpp"
#include "rotormesh/mesh.hpp"

namespace rotormesh {

enum class Frame {
  fixed,  ///< whole grid rotated rigidly by the azimuth, hinge motion on top
  hub,    ///< hinge motion only, grid does not spin
};

struct CycleOptions {
  int steps_per_rev = 360;
  double revolutions = 5.0;
  /// Marker i follows blade i of the rotor (azimuth offset 2*pi*i/n_blades).
  std::vector<std::string> blade_markers;
  Frame frame = Frame::fixed;
  Exec exec = Exec::parallel;
};

struct CycleStep {
  int step = 0;
  double time = 0.0;
  double azimuth_deg = 0.0;
  const Mesh* mesh = nullptr;
  const std::vector<Vec3>* grid_velocity = nullptr;
  int velocity_order = 0;  ///< 1 for the start-up steps, 2 for BDF2
  QualityReport quality;
  const GreedyHistory* history = nullptr;
};

struct CycleResult {
  int steps_run = 0;       ///< steps with a valid mesh
  bool failed = false;     ///< negative volumes appeared
  int failed_step = -1;
  QualityReport failed_quality;
  std::vector<QualityReport> quality;  ///< one per valid step
  std::vector<double> times;
  /// Largest blade-surface distance between the last valid step and step 0.
  double surface_return_error = 0.0;
  /// Same over every mesh point.
  double point_return_error = 0.0;
};

/// Time-accurate rotor mesh motion. Step n sits at t = n*dt with
/// dt = 2*pi/(omega*steps_per_rev). Each step deforms the reference mesh by
/// the hinge-frame blade motion (so a periodic motion returns the same grid),
/// then rotates the whole grid about +z in the fixed frame. Grid velocity is
/// BDF2 from step 2 on; steps 0 and 1 use first-order backward differences.
/// Runs until the requested revolutions are complete or a step produces
/// non-positive cell volumes.
///
/// Throws Error when a blade marker is missing or more markers than blades
/// are given.
CycleResult run_rotor_cycle(const Mesh& reference, const RunConfigFile& config,
                            const CycleOptions& options,
                            const std::function<void(const CycleStep&)>& on_step = {});

/// Hub-frame position of a blade-marker point after the hinge motion of
/// `motion` at time t; `x` is the reference position.
Vec3 hub_frame_position(const Vec3& x, const BladeMotion& motion, double t);

}  // namespace rotormesh
