#include "rotormesh/hb_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/LU>
#include <Eigen/SVD>
#include <fmt/format.h>

#include "rotormesh/error.hpp"
#include "rotormesh/types.hpp"

namespace rotormesh {
namespace {

Eigen::MatrixXd basis(const FrequencySet& fs, std::span<const double> t, bool derivative) {
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd e(n, static_cast<Eigen::Index>(fs.count()));
  for (Eigen::Index i = 0; i < n; ++i) {
    e(i, 0) = derivative ? 0.0 : 1.0;
    for (std::size_t k = 0; k < fs.positive().size(); ++k) {
      const double w = fs.positive()[k];
      const auto c = static_cast<Eigen::Index>(2 * k + 1);
      if (derivative) {
        e(i, c) = -w * std::sin(w * t[i]);
        e(i, c + 1) = w * std::cos(w * t[i]);
      } else {
        e(i, c) = std::cos(w * t[i]);
        e(i, c + 1) = std::sin(w * t[i]);
      }
    }
  }
  return e;
}

double condition_of(const Eigen::MatrixXd& e) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(e);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

}  // namespace

FrequencySet FrequencySet::from_list(std::span<const double> omegas) {
  if (omegas.empty()) throw Error("frequency set is empty");
  for (double w : omegas) {
    if (!std::isfinite(w)) throw Error("frequencies must be finite");
  }
  std::vector<double> sorted(omegas.begin(), omegas.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error("frequency list contains repeated values");
  }

  FrequencySet fs;
  const bool has_negative = sorted.front() < 0.0;
  for (double w : sorted) {
    if (w > 0.0) fs.positive_.push_back(w);
  }
  if (has_negative) {
    if (!std::binary_search(sorted.begin(), sorted.end(), 0.0)) {
      throw Error("symmetric frequency list must include 0");
    }
    for (double w : sorted) {
      if (w < 0.0 && !std::binary_search(fs.positive_.begin(), fs.positive_.end(), -w)) {
        throw Error(fmt::format("frequency list is not symmetric: {} has no partner {}", w, -w));
      }
    }
    if (sorted.size() != fs.count()) throw Error("frequency list is not symmetric");
  }
  return fs;
}

std::vector<double> FrequencySet::all() const {
  std::vector<double> out;
  for (auto it = positive_.rbegin(); it != positive_.rend(); ++it) out.push_back(-*it);
  out.push_back(0.0);
  out.insert(out.end(), positive_.begin(), positive_.end());
  return out;
}

double FrequencySet::base_period() const {
  if (positive_.empty()) return std::numeric_limits<double>::infinity();
  return 2.0 * kPi / positive_.front();
}

bool FrequencySet::commensurate() const {
  if (positive_.empty()) return true;
  const double w0 = positive_.front();
  return std::all_of(positive_.begin(), positive_.end(), [w0](double w) {
    const double r = w / w0;
    return std::abs(r - std::round(r)) <= 1e-9 * r;
  });
}

std::vector<double> choose_instances(const FrequencySet& fs, std::size_t n) {
  if (n % 2 == 0) throw Error(fmt::format("instance count must be odd, got {}", n));
  if (n != fs.count()) {
    throw Error(fmt::format("instance count {} does not match the {} basis functions", n, fs.count()));
  }
  if (fs.positive().empty()) return {0.0};
  const double period = fs.base_period();
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = double(i) * period / double(n);
  if (fs.commensurate()) return t;

  std::mt19937_64 rng(20240917u);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  std::vector<double> best = t;
  double best_cond = condition_of(basis(fs, t, false));
  for (int c = 0; c < 200; ++c) {
    std::vector<double> cand(n);
    for (std::size_t i = 0; i < n; ++i) cand[i] = (double(i) + jitter(rng)) * period / double(n);
    std::sort(cand.begin(), cand.end());
    const double k = condition_of(basis(fs, cand, false));
    if (k < best_cond) {
      best_cond = k;
      best = std::move(cand);
    }
  }
  return best;
}

double evaluation_condition(const FrequencySet& fs, std::span<const double> instances) {
  return condition_of(basis(fs, instances, false));
}

SpectralOperator build_operator(const FrequencySet& fs, std::span<const double> instances) {
  if (instances.size() != fs.count()) {
    throw Error(fmt::format("{} instances for {} basis functions", instances.size(), fs.count()));
  }
  std::vector<double> sorted(instances.begin(), instances.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error("time instances must be distinct");
  }
  const Eigen::MatrixXd e = basis(fs, instances, false);
  const Eigen::MatrixXd de = basis(fs, instances, true);
  const double cond = condition_of(e);
  if (!(cond <= 1e12)) {
    throw NumericalError("basis evaluation matrix is singular or ill-conditioned", cond);
  }
  // H E = E'  <=>  E^T H^T = E'^T
  const Eigen::MatrixXd ht = e.transpose().fullPivLu().solve(de.transpose());
  return {ht.transpose(), std::vector<double>(instances.begin(), instances.end()), cond};
}

std::vector<double> SpectralOperator::apply(std::span<const double> samples) const {
  if (samples.size() != static_cast<std::size_t>(h.cols())) {
    throw Error(fmt::format("{} samples for {} instances", samples.size(), h.cols()));
  }
  const Eigen::Map<const Eigen::VectorXd> x(samples.data(), h.cols());
  const Eigen::VectorXd y = h * x;
  return {y.data(), y.data() + y.size()};
}

Eigen::MatrixXd SpectralOperator::apply(const Eigen::MatrixXd& samples) const {
  if (samples.rows() != h.cols()) {
    throw Error(fmt::format("{} sample rows for {} instances", samples.rows(), h.cols()));
  }
  return h * samples;
}

}  // namespace rotormesh
