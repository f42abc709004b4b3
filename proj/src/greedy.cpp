#include "rotormesh/greedy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "rotormesh/csv.hpp"
#include "rotormesh/error.hpp"

namespace rotormesh {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

/// Seed set: the largest displacement, then (for the affine block) points
/// farthest from the affine hull of the seeds until it matches the surface's.
std::vector<Index> seed_points(std::span<const Vec3> pts, std::span<const Vec3> disp, bool affine) {
  std::vector<double> mag(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) mag[i] = disp[i].norm();
  std::vector<Index> seeds{static_cast<Index>(argmax(mag))};
  if (!affine) return seeds;

  const int rank = fit_affine_frame(pts).rank();
  std::vector<Vec3> basis;  // orthonormal directions of the seed hull
  while (static_cast<int>(basis.size()) < rank) {
    const Vec3& o = pts[seeds.front()];
    double best = -1.0;
    Index pick = -1;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      Vec3 d = pts[i] - o;
      for (const auto& b : basis) d -= b.dot(d) * b;
      if (d.norm() > best) {
        best = d.norm();
        pick = static_cast<Index>(i);
      }
    }
    Vec3 d = pts[pick] - o;
    for (const auto& b : basis) d -= b.dot(d) * b;
    if (!(d.norm() > 0.0)) break;
    basis.push_back(d.normalized());
    seeds.push_back(pick);
  }
  return seeds;
}

struct LevelState {
  std::size_t count = 0;
  std::optional<RbfSolution> field;
  std::vector<Vec3> values;  // field at all surface points
  std::vector<double> errors;
  double max_error = std::numeric_limits<double>::infinity();
};

}  // namespace

double GreedyHistory::normalized_error(std::size_t level) const {
  if (level >= levels.size() || max_prescribed == 0.0) return 0.0;
  return levels[level].max_error / max_prescribed;
}

std::string GreedyHistory::to_csv() const {
  CsvWriter csv({"level", "points", "max_err", "mean_err", "seconds"});
  for (const auto& l : levels) {
    csv.row(l.level, l.points, l.max_error, l.mean_error, l.seconds);
  }
  return csv.str();
}

GreedyResult greedy_select(std::span<const Vec3> pts, std::span<const Vec3> disp,
                           const GreedyOptions& opt) {
  const auto t_start = Clock::now();
  if (pts.empty()) throw Error("greedy selection needs at least one surface point");
  if (pts.size() != disp.size()) {
    throw Error(fmt::format("{} displacements for {} surface points", disp.size(), pts.size()));
  }
  if (!(opt.tol > 0.0)) throw Error(fmt::format("greedy tolerance must be positive, got {}", opt.tol));
  for (const auto& d : disp) {
    if (!d.allFinite()) throw Error("surface displacements must be finite");
  }
  const std::size_t n = pts.size();

  GreedyHistory history;
  for (const auto& d : disp) history.max_prescribed = std::max(history.max_prescribed, d.norm());

  std::vector<Index> selected = seed_points(pts, disp, opt.with_affine);
  std::vector<Vec3> accumulated(n, Vec3::Zero());
  std::vector<Vec3> total_weights;
  std::optional<AffineTerms> total_affine;
  std::vector<double> current_errors(n);
  for (std::size_t i = 0; i < n; ++i) current_errors[i] = disp[i].norm();

  const std::size_t n_levels = std::max<std::size_t>(opt.level_caps.size(), 1);
  for (std::size_t level = 0; level < n_levels; ++level) {
    const auto t_level = Clock::now();
    const std::size_t cap = std::min<std::size_t>(
        n, std::max<std::size_t>(opt.level_caps.empty() ? n : opt.level_caps[level], selected.size()));

    std::vector<Vec3> residual(n);
    for (std::size_t i = 0; i < n; ++i) residual[i] = disp[i] - accumulated[i];

    LevelState best;
    if (level > 0) {
      // Starting state: no new field, errors carried over from the last level.
      best.count = selected.size();
      best.errors = current_errors;
      best.max_error = *std::max_element(current_errors.begin(), current_errors.end());
      if (best.max_error < opt.tol) break;
      const Index next = static_cast<Index>(argmax(current_errors));
      if (std::find(selected.begin(), selected.end(), next) != selected.end()) break;
      if (selected.size() >= cap) break;
      selected.push_back(next);
    }

    while (true) {
      std::vector<Vec3> centers, targets;
      centers.reserve(selected.size());
      targets.reserve(selected.size());
      for (Index s : selected) {
        centers.push_back(pts[s]);
        targets.push_back(residual[s]);
      }
      auto t0 = Clock::now();
      RbfSolution field = solve_weights(centers, targets, opt.kernel, opt.with_affine);
      history.solve_seconds += seconds_since(t0);
      t0 = Clock::now();
      std::vector<Vec3> values = evaluate_field(field, pts, opt.exec);
      history.evaluate_seconds += seconds_since(t0);

      std::vector<double> errors(n);
      for (std::size_t i = 0; i < n; ++i) errors[i] = (residual[i] - values[i]).norm();
      const std::size_t worst = argmax(errors);
      const double max_error = errors[worst];

      if (!best.field && level == 0 ? true : max_error < best.max_error) {
        best = {selected.size(), std::move(field), std::move(values), errors, max_error};
      }
      if (max_error < opt.tol || selected.size() >= cap) break;
      if (std::find(selected.begin(), selected.end(), static_cast<Index>(worst)) != selected.end()) {
        break;  // worst point already interpolated: solver accuracy floor
      }
      selected.push_back(static_cast<Index>(worst));
    }

    selected.resize(best.count);
    if (best.field) {
      for (std::size_t i = 0; i < n; ++i) accumulated[i] += best.values[i];
      total_weights.resize(best.field->weights.size(), Vec3::Zero());
      for (std::size_t i = 0; i < best.field->weights.size(); ++i) {
        total_weights[i] += best.field->weights[i];
      }
      if (best.field->affine) {
        total_affine = total_affine ? AffineTerms(*total_affine + *best.field->affine)
                                    : *best.field->affine;
      }
    }
    current_errors = best.errors;
    const double mean = std::accumulate(best.errors.begin(), best.errors.end(), 0.0) / double(n);
    history.levels.push_back({static_cast<int>(level + 1), selected.size(), best.max_error, mean,
                              seconds_since(t_level)});
    if (best.max_error < opt.tol) break;
    if (level > 0 && !best.field) break;  // no progress possible
  }

  history.converged = !history.levels.empty() && history.levels.back().max_error < opt.tol;
  history.selected = selected;

  RbfSolution solution{{}, {}, opt.kernel, total_affine, 1.0};
  solution.centers.reserve(selected.size());
  for (Index s : selected) solution.centers.push_back(pts[s]);
  total_weights.resize(selected.size(), Vec3::Zero());
  solution.weights = std::move(total_weights);
  history.total_seconds = seconds_since(t_start);
  return {std::move(solution), std::move(history)};
}

}  // namespace rotormesh
