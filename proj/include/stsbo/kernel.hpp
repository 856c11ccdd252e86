#pragma once

// Stationary kernels with per-dimension lengthscales. Points are rows of a
// dense matrix; everything is expressed through Eigen so the same code serves
// float and double instantiations.

#include "stsbo/error.hpp"

#include <Eigen/Core>

#include <cmath>
#include <string>

namespace stsbo {

enum class KernelKind { squared_exponential, matern52 };

template <typename Scalar>
struct KernelSpec {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  KernelKind kind = KernelKind::squared_exponential;
  Vector lengthscales;               // one per input dimension, all > 0
  Scalar signal_variance = Scalar(1);
};

template <typename Scalar>
void validate_kernel(const KernelSpec<Scalar>& spec, Eigen::Index dims) {
  if (spec.lengthscales.size() != dims)
    throw DomainError("kernel: lengthscale count " + std::to_string(spec.lengthscales.size()) +
                      " does not match input dimension " + std::to_string(dims));
  if (!(spec.lengthscales.array() > Scalar(0)).all())
    throw DomainError("kernel: lengthscales must be > 0");
  if (!(spec.signal_variance > Scalar(0))) throw DomainError("kernel: signal_variance must be > 0");
}

// Pairwise covariance between the rows of a and the rows of b (a.rows x b.rows).
// k(x,x) equals signal_variance exactly for both kernels.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> kernel_matrix(
    const KernelSpec<Scalar>& spec,
    const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>& a,
    const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>& b) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (a.cols() != b.cols()) throw DomainError("kernel_matrix: dimension mismatch");
  validate_kernel(spec, a.cols());

  const Vector inv_l = spec.lengthscales.cwiseInverse();
  const Matrix as = a * inv_l.asDiagonal();
  const Matrix bs = b * inv_l.asDiagonal();
  const Vector an = as.rowwise().squaredNorm();
  const Vector bn = bs.rowwise().squaredNorm();

  // Scaled squared distances, clamped: cancellation can leave tiny negatives.
  Matrix r2 = ((-2 * as * bs.transpose()).colwise() + an).rowwise() + bn.transpose();
  r2 = r2.cwiseMax(Scalar(0));

  switch (spec.kind) {
    case KernelKind::squared_exponential:
      return spec.signal_variance * (-r2 / Scalar(2)).array().exp().matrix();
    case KernelKind::matern52: {
      const Scalar sqrt5 = std::sqrt(Scalar(5));
      Matrix r = r2.cwiseSqrt();
      return spec.signal_variance *
             ((Scalar(1) + sqrt5 * r.array() + Scalar(5) / Scalar(3) * r2.array()) *
              (-sqrt5 * r.array()).exp())
                 .matrix();
    }
  }
  throw DomainError("kernel_matrix: unknown kernel kind");
}

using KernelSpecd = KernelSpec<double>;

}  // namespace stsbo
