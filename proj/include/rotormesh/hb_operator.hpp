#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace rotormesh {

/// Angular frequencies of a harmonic-balance signal: 0 and +-w_k.
class FrequencySet {
 public:
  /// Accepts either the full symmetric list (0 and each +-w_k, any order) or
  /// the positive frequencies alone. Throws Error for an empty list, a list
  /// with negatives that is not symmetric or lacks 0, non-finite values, or
  /// repeated frequencies.
  static FrequencySet from_list(std::span<const double> omegas);

  const std::vector<double>& positive() const { return positive_; }
  /// Sorted symmetric list including 0.
  std::vector<double> all() const;
  std::size_t count() const { return 2 * positive_.size() + 1; }
  /// 2*pi over the smallest positive frequency (infinity for the constant-only set).
  double base_period() const;
  /// Every frequency an integer multiple of the smallest one (1e-9 relative).
  bool commensurate() const;

 private:
  std::vector<double> positive_;  ///< ascending
};

/// Time instances for an N-instance harmonic-balance problem. Commensurate
/// sets get t_n = n T / N; otherwise 200 jittered equispaced candidates from a
/// fixed seed are scored and the best-conditioned one is kept.
/// Throws Error when N is even or differs from the frequency count.
std::vector<double> choose_instances(const FrequencySet& fs, std::size_t n);

/// Spectral time-derivative matrix H = E' E^-1 for the real trigonometric
/// basis {1, cos w_k t, sin w_k t} sampled at the instances.
struct SpectralOperator {
  Eigen::MatrixXd h;
  std::vector<double> instances;
  double condition = 1.0;  ///< 2-norm condition number of E

  std::vector<double> apply(std::span<const double> samples) const;
  /// Columns are components; rows are instances.
  Eigen::MatrixXd apply(const Eigen::MatrixXd& samples) const;
};

/// Throws Error for a count mismatch or repeated instances and
/// NumericalError when E is singular or its condition exceeds 1e12.
SpectralOperator build_operator(const FrequencySet& fs, std::span<const double> instances);

/// Condition number of the basis evaluation matrix at `instances`.
double evaluation_condition(const FrequencySet& fs, std::span<const double> instances);

}  // namespace rotormesh
