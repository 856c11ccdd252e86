#pragma once

// Alternating minimization of I(target; sample) + beta * E[distortion] over
// conditional target distributions, one row per posterior sample (or class
// member). Rows may carry non-uniform weights so the same iteration serves
// the Monte Carlo ensemble (weights 1/Z) and exact finite mixtures.
//
// Each iteration recomputes the weighted marginal, then multiplies it into a
// per-row exponential tilt exp(-beta * (d - rowmin d)) and renormalizes. The
// row shift is the log-space max-subtraction: it maps the largest exponent to
// exactly 0, so beta = 0 reproduces the uniform fixed point to machine
// precision and huge beta merely underflows the hopeless entries to zero
// while every row keeps at least one unit-weight entry.

#include "stsbo/error.hpp"

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace stsbo {

struct BaOptions {
  double beta = 1.0;
  int k_max = 100;
  double tol = 1e-6;  // max absolute conditional change between iterations
};

template <typename Scalar>
struct BaResult {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Matrix conditional;  // rows x points, each row a distribution
  Vector marginal;     // weighted average of the rows
  int iterations_used = 0;
  Scalar final_delta = Scalar(0);
  Scalar beta = Scalar(0);
};

namespace detail {

template <typename Scalar>
void validate_ba_inputs(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& distortion,
                        const BaOptions& opt,
                        const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& weights) {
  if (distortion.rows() < 1 || distortion.cols() < 1)
    throw DomainError("blahut_arimoto: empty distortion matrix");
  if (!distortion.allFinite() || (distortion.array() < Scalar(0)).any())
    throw DomainError("blahut_arimoto: distortion must be finite and nonnegative");
  if (!(opt.beta >= 0)) throw DomainError("blahut_arimoto: beta must be >= 0");
  if (opt.k_max < 1) throw DomainError("blahut_arimoto: k_max must be >= 1");
  if (!(opt.tol > 0)) throw DomainError("blahut_arimoto: tol must be > 0");
  if (weights.size() != distortion.rows())
    throw DomainError("blahut_arimoto: weight count does not match row count");
  if ((weights.array() < Scalar(0)).any())
    throw DomainError("blahut_arimoto: weights must be >= 0");
}

// Rows whose tilt underflowed to all-zero mass (possible only at zero weight)
// fall back to a point mass on the row's first minimum-distortion index.
template <typename Scalar>
void normalize_rows(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& p,
                    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& distortion) {
  for (Eigen::Index z = 0; z < p.rows(); ++z) {
    const Scalar total = p.row(z).sum();
    if (total > Scalar(0)) {
      p.row(z) /= total;
    } else {
      Eigen::Index best = 0;
      distortion.row(z).minCoeff(&best);
      p.row(z).setZero();
      p(z, best) = Scalar(1);
    }
  }
}

}  // namespace detail

template <typename Scalar>
BaResult<Scalar> blahut_arimoto_weighted(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& distortion, const BaOptions& opt,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& weights,
    std::vector<BaResult<Scalar>>* trace = nullptr) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  detail::validate_ba_inputs(distortion, opt, weights);

  const Eigen::Index rows = distortion.rows();
  const Eigen::Index cols = distortion.cols();
  const Vector w = weights / weights.sum();

  // Per-row shifted tilt; computed once, reused every iteration.
  Matrix tilt(rows, cols);
  for (Eigen::Index z = 0; z < rows; ++z) {
    const Scalar shift = distortion.row(z).minCoeff();
    tilt.row(z) = (-(Scalar(opt.beta)) * (distortion.row(z).array() - shift)).exp().matrix();
  }

  BaResult<Scalar> res;
  res.beta = Scalar(opt.beta);
  res.conditional = Matrix::Constant(rows, cols, Scalar(1) / Scalar(cols));
  Matrix next(rows, cols);
  for (int k = 0; k < opt.k_max; ++k) {
    Vector q = res.conditional.transpose() * w;
    next = (tilt.array().rowwise() * q.transpose().array()).matrix();
    detail::normalize_rows(next, distortion);
    res.final_delta = (next - res.conditional).cwiseAbs().maxCoeff();
    res.conditional.swap(next);
    res.iterations_used = k + 1;
    if (trace) {
      BaResult<Scalar> snap = res;
      snap.marginal = res.conditional.transpose() * w;
      trace->push_back(std::move(snap));
    }
    if (res.final_delta < Scalar(opt.tol)) break;
  }
  res.marginal = res.conditional.transpose() * w;
  return res;
}

template <typename Scalar>
BaResult<Scalar> blahut_arimoto(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& distortion,
                                const BaOptions& opt,
                                std::vector<BaResult<Scalar>>* trace = nullptr) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  return blahut_arimoto_weighted<Scalar>(
      distortion, opt, Vector::Constant(distortion.rows(), Scalar(1) / Scalar(distortion.rows())),
      trace);
}

// Weighted mutual information between row index and target point:
// sum_z w_z sum_x p(x|z) log(p(x|z) / q(x)), in nats, with 0 log 0 = 0.
template <typename Scalar>
Scalar mutual_information(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& conditional,
                          const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& weights) {
  if (conditional.rows() != weights.size())
    throw DomainError("mutual_information: weight count mismatch");
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> q = conditional.transpose() * weights;
  Scalar info = Scalar(0);
  for (Eigen::Index z = 0; z < conditional.rows(); ++z) {
    if (weights[z] == Scalar(0)) continue;
    Scalar row = Scalar(0);
    for (Eigen::Index x = 0; x < conditional.cols(); ++x) {
      const Scalar p = conditional(z, x);
      // Exact arithmetic gives q[x] >= w_z * p > 0 whenever p > 0 here; a zero
      // computed q[x] means the whole column is denormal dust whose true
      // contribution is below representable precision, so drop it.
      if (p > Scalar(0) && q[x] > Scalar(0)) row += p * std::log(p / q[x]);
    }
    info += weights[z] * row;
  }
  return info;
}

template <typename Scalar>
Scalar expected_distortion(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& conditional,
                           const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& distortion,
                           const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& weights) {
  if (conditional.rows() != distortion.rows() || conditional.cols() != distortion.cols())
    throw DomainError("expected_distortion: shape mismatch");
  return (weights.transpose() * conditional.cwiseProduct(distortion).rowwise().sum())(0);
}

template <typename Scalar>
Scalar lagrangian_weighted(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& conditional,
                           const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& distortion,
                           Scalar beta,
                           const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& weights) {
  return mutual_information(conditional, weights) +
         beta * expected_distortion(conditional, distortion, weights);
}

}  // namespace stsbo
