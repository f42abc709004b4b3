#include "rotormesh/rbf.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "rotormesh/error.hpp"

namespace rotormesh {

std::string_view kernel_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::wendland_c2: return "wendland_c2";
    case KernelKind::thin_plate_spline: return "thin_plate_spline";
    case KernelKind::gaussian: return "gaussian";
    case KernelKind::multiquadric: return "multiquadric";
    case KernelKind::inverse_multiquadric: return "inverse_multiquadric";
  }
  return "unknown";
}

std::optional<KernelKind> kernel_from_name(std::string_view name) {
  for (auto k : {KernelKind::wendland_c2, KernelKind::thin_plate_spline, KernelKind::gaussian,
                 KernelKind::multiquadric, KernelKind::inverse_multiquadric}) {
    if (kernel_name(k) == name) return k;
  }
  return std::nullopt;
}

RbfKernel::RbfKernel(KernelKind kind, double support_radius) : kind_(kind), radius_(support_radius) {
  if (kind_ != KernelKind::thin_plate_spline && !(radius_ > 0.0 && std::isfinite(radius_))) {
    throw Error(fmt::format("{} kernel needs a positive support radius, got {}", kernel_name(kind_),
                            radius_));
  }
}

double RbfKernel::operator()(double d) const {
  switch (kind_) {
    case KernelKind::wendland_c2: {
      const double q = d / radius_;
      if (q >= 1.0) return 0.0;
      const double a = 1.0 - q;
      return a * a * a * a * (4.0 * q + 1.0);
    }
    case KernelKind::thin_plate_spline:
      return d > 0.0 ? d * d * std::log(d) : 0.0;
    case KernelKind::gaussian: {
      const double q = d / radius_;
      return std::exp(-q * q);
    }
    case KernelKind::multiquadric: {
      const double q = d / radius_;
      return std::sqrt(1.0 + q * q);
    }
    case KernelKind::inverse_multiquadric: {
      const double q = d / radius_;
      return 1.0 / std::sqrt(1.0 + q * q);
    }
  }
  return 0.0;
}

double kernel_eval(const RbfKernel& kernel, double distance) {
  if (!(distance >= 0.0)) throw Error(fmt::format("distance must be non-negative, got {}", distance));
  return kernel(distance);
}

AffineFrame fit_affine_frame(std::span<const Vec3> points) {
  AffineFrame frame;
  if (points.empty()) return frame;
  for (const auto& p : points) frame.origin += p;
  frame.origin /= static_cast<double>(points.size());
  Mat3 cov = Mat3::Zero();
  for (const auto& p : points) {
    const Vec3 d = p - frame.origin;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(points.size());
  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  const double lmax = eig.eigenvalues().maxCoeff();
  for (int k = 2; k >= 0; --k) {
    const double l = eig.eigenvalues()[k];
    if (lmax > 0.0 && l > 1e-16 * lmax) {
      frame.axes.push_back(eig.eigenvectors().col(k));
      frame.scales.push_back(std::sqrt(l));
    }
  }
  return frame;
}

Vec3 RbfSolution::evaluate(const Vec3& r) const {
  Vec3 f = Vec3::Zero();
  for (std::size_t i = 0; i < centers.size(); ++i) f += weights[i] * kernel((r - centers[i]).norm());
  if (affine) f += affine->col(0) + affine->rightCols<3>() * r;
  return f;
}

RbfSolution solve_weights(std::span<const Vec3> centers, std::span<const Vec3> displacements,
                          const RbfKernel& kernel, bool with_affine) {
  const auto n = static_cast<Index>(centers.size());
  if (n == 0) throw Error("RBF system needs at least one center");
  if (displacements.size() != centers.size()) {
    throw Error(fmt::format("{} displacements for {} centers", displacements.size(), centers.size()));
  }
  Eigen::AlignedBox3d box;
  for (const auto& c : centers) box.extend(c);
  const double snap = 1e-12 * std::max(box.diagonal().norm(), 1e-300);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if ((centers[i] - centers[j]).norm() <= snap) {
        throw Error(fmt::format("duplicate RBF centers {} and {}", i, j));
      }
    }
  }

  AffineFrame frame;
  if (with_affine) frame = fit_affine_frame(centers);
  const Index m = with_affine ? 1 + frame.rank() : 0;

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + m, n + m);
  for (Index i = 0; i < n; ++i) {
    a(i, i) = kernel(0.0);
    for (Index j = i + 1; j < n; ++j) {
      const double v = kernel((centers[i] - centers[j]).norm());
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  if (with_affine) {
    for (Index i = 0; i < n; ++i) {
      a(i, n) = a(n, i) = 1.0;
      for (int k = 0; k < frame.rank(); ++k) {
        const double q = frame.axes[k].dot(centers[i] - frame.origin) / frame.scales[k];
        a(i, n + 1 + k) = a(n + 1 + k, i) = q;
      }
    }
  }
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n + m, 3);
  for (Index i = 0; i < n; ++i) {
    if (!displacements[i].allFinite()) throw Error("RBF displacements must be finite");
    rhs.row(i) = displacements[i].transpose();
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const double rcond = lu.rcond();
  const double condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(rcond > 1e-15)) throw NumericalError("singular or ill-conditioned RBF system", condition);
  const Eigen::MatrixXd sol = lu.solve(rhs);
  if (!sol.allFinite()) throw NumericalError("RBF solve produced non-finite weights", condition);

  RbfSolution out{std::vector<Vec3>(centers.begin(), centers.end()), {}, kernel, std::nullopt,
                  condition};
  out.weights.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) out.weights.emplace_back(sol.row(i).transpose());
  if (with_affine) {
    // Convert the frame-local polynomial to global coordinates.
    AffineTerms terms = AffineTerms::Zero();
    terms.col(0) = sol.row(n).transpose();
    for (int k = 0; k < frame.rank(); ++k) {
      const Vec3 coeff = sol.row(n + 1 + k).transpose();
      const Vec3 grad = frame.axes[k] / frame.scales[k];
      terms.col(0) -= coeff * grad.dot(frame.origin);
      terms.rightCols<3>() += coeff * grad.transpose();
    }
    out.affine = terms;
  }
  return out;
}

namespace {

struct BinKey {
  std::int64_t i, j, k;
  bool operator==(const BinKey&) const = default;
};

struct BinKeyHash {
  std::size_t operator()(const BinKey& b) const {
    return static_cast<std::size_t>(b.i * 73856093LL ^ b.j * 19349663LL ^ b.k * 83492791LL);
  }
};

/// Uniform hash grid of center indices with cell size equal to the support
/// radius; every center within the radius of a target lies in the 27 bins
/// around the target's bin.
class CenterBins {
 public:
  CenterBins(std::span<const Vec3> centers, double h) : h_(h) {
    for (std::size_t i = 0; i < centers.size(); ++i) {
      bins_[key(centers[i])].push_back(static_cast<Index>(i));
    }
  }

  void gather(const Vec3& p, std::vector<Index>& out) const {
    out.clear();
    const BinKey b = key(p);
    for (std::int64_t di = -1; di <= 1; ++di)
      for (std::int64_t dj = -1; dj <= 1; ++dj)
        for (std::int64_t dk = -1; dk <= 1; ++dk) {
          auto it = bins_.find({b.i + di, b.j + dj, b.k + dk});
          if (it != bins_.end()) out.insert(out.end(), it->second.begin(), it->second.end());
        }
    std::sort(out.begin(), out.end());
  }

 private:
  BinKey key(const Vec3& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x() / h_)),
            static_cast<std::int64_t>(std::floor(p.y() / h_)),
            static_cast<std::int64_t>(std::floor(p.z() / h_))};
  }

  double h_;
  std::unordered_map<BinKey, std::vector<Index>, BinKeyHash> bins_;
};

}  // namespace

std::vector<Vec3> evaluate_field(const RbfSolution& sol, std::span<const Vec3> targets, Exec exec) {
  const auto nt = static_cast<Index>(targets.size());
  std::vector<Vec3> out(targets.size());
  auto add_affine = [&](Index t) {
    if (sol.affine) out[t] += sol.affine->col(0) + sol.affine->rightCols<3>() * targets[t];
  };

  if (exec == Exec::serial) {
    for (Index t = 0; t < nt; ++t) {
      Vec3 f = Vec3::Zero();
      for (std::size_t i = 0; i < sol.centers.size(); ++i) {
        f += sol.weights[i] * sol.kernel((targets[t] - sol.centers[i]).norm());
      }
      out[t] = f;
      add_affine(t);
    }
    return out;
  }

  if (!sol.kernel.compact()) {
#pragma omp parallel for schedule(static)
    for (Index t = 0; t < nt; ++t) {
      Vec3 f = Vec3::Zero();
      for (std::size_t i = 0; i < sol.centers.size(); ++i) {
        f += sol.weights[i] * sol.kernel((targets[t] - sol.centers[i]).norm());
      }
      out[t] = f;
      add_affine(t);
    }
    return out;
  }

  const CenterBins bins(sol.centers, sol.kernel.support_radius());
  const double radius = sol.kernel.support_radius();
#pragma omp parallel
  {
    std::vector<Index> near;
#pragma omp for schedule(dynamic, 256)
    for (Index t = 0; t < nt; ++t) {
      bins.gather(targets[t], near);
      Vec3 f = Vec3::Zero();
      for (Index i : near) {
        const double d = (targets[t] - sol.centers[i]).norm();
        if (d < radius) f += sol.weights[i] * sol.kernel(d);
      }
      out[t] = f;
      add_affine(t);
    }
  }
  return out;
}

}  // namespace rotormesh
