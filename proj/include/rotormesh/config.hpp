#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rotormesh/error.hpp"
#include "rotormesh/greedy.hpp"
#include "rotormesh/kinematics.hpp"
#include "rotormesh/rbf.hpp"

namespace rotormesh {

inline constexpr double kSpeedOfSound = 340.8;  // m/s

/// Raised for malformed files and for values or keys the loader rejects.
/// Every offending key is listed in `keys()`, e.g. "pitch.mean_dg".
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::vector<std::string> keys = {})
      : Error(what), keys_(std::move(keys)) {}
  const std::vector<std::string>& keys() const noexcept { return keys_; }

 private:
  std::vector<std::string> keys_;
};

struct RotorConfig {
  double radius_m = 1.0;
  double rpm = 0.0;
  int n_blades = 1;
  Vec3 hinge = Vec3::Zero();
  std::optional<double> chord_m;
  bool restore_hinge_offset = true;
};

struct RbfConfig {
  KernelKind kernel = KernelKind::wendland_c2;
  double support_radius_chords = 2.5;
  std::optional<double> support_radius_m;
  bool affine = false;
  double greedy_tol_m = 1e-4;
  std::vector<int> level_caps{8, 32, 64, 256};
  std::vector<std::string> fixed_markers;
};

struct RunConfigFile {
  RotorConfig rotor;
  MotionSeries pitch;    ///< radians
  MotionSeries flap;
  MotionSeries leadlag;
  FlightCondition flight;
  RbfConfig rbf;
  std::vector<std::string> interface_markers;

  double omega() const;  ///< rad/s
  /// Motion of blade `index` with azimuth offset 2*pi*index/n_blades.
  BladeMotion blade_motion(int index) const;
  /// Explicit support_radius_m, else support_radius_chords * chord_m.
  double support_radius() const;
  GreedyOptions greedy_options(Exec exec = Exec::parallel) const;
};

/// Sections [rotor] [pitch] [flap] [leadlag] [flight] [rbf] [interface] with
/// `key = value` lines; lists are written `[a, b, ...]`, strings may be
/// quoted, and lines starting with `#` or `;` are comments.
RunConfigFile parse_config(std::string_view text);
RunConfigFile load_config(const std::filesystem::path& path);

}  // namespace rotormesh
