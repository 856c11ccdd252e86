#pragma once

// Gaussian-process regression over finite candidate sets.
//
// Two exact representations of the same posterior live here:
//
//   GpPosterior   the train-set form: Cholesky factor of K(X,X) + noise*I,
//                 answers mean/variance/covariance at arbitrary query points.
//                 Updates append one row to the factor (O(n^2)) and return a
//                 new snapshot; inputs are never mutated.
//
//   GridPosterior the grid-restricted form used in the simulation hot loop:
//                 posterior mean and covariance over one fixed candidate set,
//                 conditioned on one noisy observation at a time by a rank-1
//                 update (O(G^2)). Joint draws reuse the maintained Cholesky
//                 factor, so a draw costs one triangular product instead of a
//                 fresh G^3 factorization per selection.
//
// Both are exact GP conditioning; a test pins their agreement.

#include "stsbo/error.hpp"
#include "stsbo/kernel.hpp"
#include "stsbo/rng.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>
#include <string>
#include <utility>

namespace stsbo {

namespace detail {
// Jitter ladder for factorizing near-singular covariances: start at
// 1e-10 * signal_variance, escalate tenfold up to 1e-4 * signal_variance,
// then give up loudly.
inline constexpr double kJitterStartRel = 1e-10;
inline constexpr double kJitterMaxRel = 1e-4;
}  // namespace detail

template <typename Scalar>
struct GpPosterior {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  KernelSpec<Scalar> kernel;
  Scalar noise_variance = Scalar(0);
  Matrix train_x;  // n x d
  Vector train_y;  // n
  Matrix chol;     // lower factor of K(train_x, train_x) + noise_variance * I
  Vector alpha;    // (K + noise*I)^{-1} train_y

  Eigen::Index count() const { return train_y.size(); }
};

template <typename Scalar>
GpPosterior<Scalar> make_gp(const KernelSpec<Scalar>& kernel, Scalar noise_variance, int dims) {
  if (!(noise_variance >= Scalar(0))) throw DomainError("make_gp: noise_variance must be >= 0");
  validate_kernel(kernel, dims);
  GpPosterior<Scalar> gp;
  gp.kernel = kernel;
  gp.noise_variance = noise_variance;
  gp.train_x.resize(0, dims);
  gp.train_y.resize(0);
  gp.chol.resize(0, 0);
  gp.alpha.resize(0);
  return gp;
}

// Posterior extended by one observation. The factor gains one trailing row:
// solve L l = k_new, lambda = sqrt(k(x,x) + noise - |l|^2). Equal to a full
// rebuild on the extended data up to roundoff.
template <typename Scalar>
GpPosterior<Scalar> update(const GpPosterior<Scalar>& gp,
                           const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x, Scalar y) {
  using Matrix = typename GpPosterior<Scalar>::Matrix;
  if (x.size() != gp.train_x.cols()) throw DomainError("gp update: point dimension mismatch");
  const Eigen::Index n = gp.count();

  GpPosterior<Scalar> out;
  out.kernel = gp.kernel;
  out.noise_variance = gp.noise_variance;
  out.train_x.resize(n + 1, gp.train_x.cols());
  out.train_x.topRows(n) = gp.train_x;
  out.train_x.row(n) = x.transpose();
  out.train_y.resize(n + 1);
  out.train_y.head(n) = gp.train_y;
  out.train_y[n] = y;

  const Scalar diag = gp.kernel.signal_variance + gp.noise_variance;
  out.chol = Matrix::Zero(n + 1, n + 1);
  if (n == 0) {
    out.chol(0, 0) = std::sqrt(diag);
  } else {
    Matrix cross = kernel_matrix<Scalar>(gp.kernel, gp.train_x, x.transpose());
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> l =
        gp.chol.template triangularView<Eigen::Lower>().solve(cross.col(0));
    const Scalar lambda2 = diag - l.squaredNorm();
    if (!(lambda2 > Scalar(0)))
      throw NumericalError("gp update: factor append failed (pivot " + std::to_string(lambda2) +
                           " at n=" + std::to_string(n + 1) +
                           "); point numerically duplicates training data at zero noise");
    out.chol.topLeftCorner(n, n) = gp.chol;
    out.chol.row(n).head(n) = l.transpose();
    out.chol(n, n) = std::sqrt(lambda2);
  }
  out.alpha = out.chol.template triangularView<Eigen::Lower>().solve(out.train_y);
  out.chol.template triangularView<Eigen::Lower>().transpose().solveInPlace(out.alpha);
  return out;
}

// Posterior mean and variance at each query row. Variances are clamped at
// zero; anything below -1e-6 * signal_variance before the clamp is treated as
// a real numerical failure rather than roundoff.
template <typename Scalar>
std::pair<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>, Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>
posterior_mean_var(const GpPosterior<Scalar>& gp,
                   const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& queries) {
  using Matrix = typename GpPosterior<Scalar>::Matrix;
  using Vector = typename GpPosterior<Scalar>::Vector;
  const Eigen::Index q = queries.rows();
  if (gp.count() == 0) {
    validate_kernel(gp.kernel, queries.cols());
    return {Vector::Zero(q), Vector::Constant(q, gp.kernel.signal_variance)};
  }
  Matrix cross = kernel_matrix<Scalar>(gp.kernel, gp.train_x, queries);  // n x q
  Vector mean = cross.transpose() * gp.alpha;
  Matrix v = gp.chol.template triangularView<Eigen::Lower>().solve(cross);
  Vector var = Vector::Constant(q, gp.kernel.signal_variance) - v.colwise().squaredNorm().transpose();
  const Scalar floor = Scalar(-1e-6) * gp.kernel.signal_variance;
  if ((var.array() < floor).any())
    throw NumericalError("posterior_mean_var: variance fell below the roundoff floor");
  var = var.cwiseMax(Scalar(0));
  return {std::move(mean), std::move(var)};
}

// Full posterior covariance over the query rows (no jitter added).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> posterior_cov(
    const GpPosterior<Scalar>& gp,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& queries) {
  using Matrix = typename GpPosterior<Scalar>::Matrix;
  Matrix prior = kernel_matrix<Scalar>(gp.kernel, queries, queries);
  if (gp.count() == 0) return prior;
  Matrix cross = kernel_matrix<Scalar>(gp.kernel, gp.train_x, queries);
  Matrix v = gp.chol.template triangularView<Eigen::Lower>().solve(cross);
  prior.noalias() -= v.transpose() * v;
  return prior;
}

// mean + lower Cholesky factor of (covariance + jitter*I): the reusable part
// of joint sampling. Factorization retries up the jitter ladder.
template <typename Scalar>
struct JointGaussian {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> mean;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> chol;
  Scalar jitter = Scalar(0);
};

template <typename Scalar>
JointGaussian<Scalar> factor_joint(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& mean,
                                   const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& cov,
                                   Scalar signal_variance) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  JointGaussian<Scalar> jg;
  jg.mean = mean;
  Scalar jitter = Scalar(detail::kJitterStartRel) * signal_variance;
  const Scalar jitter_max = Scalar(detail::kJitterMaxRel) * signal_variance;
  for (;; jitter *= Scalar(10)) {
    Matrix work = cov;
    work.diagonal().array() += jitter;
    Eigen::LLT<Matrix> llt(work);
    if (llt.info() == Eigen::Success) {
      jg.chol = llt.matrixL();
      jg.jitter = jitter;
      return jg;
    }
    if (jitter >= jitter_max)
      throw NumericalError("factor_joint: covariance not positive definite at jitter " +
                           std::to_string(static_cast<double>(jitter)));
  }
}

// One joint draw: mean + L u with u standard normal, consuming exactly
// mean.size() normals from the stream in index order.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> sample_joint(const JointGaussian<Scalar>& jg,
                                                      rng::Stream& stream) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> u(jg.mean.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = static_cast<Scalar>(stream.next_normal());
  return jg.mean + jg.chol.template triangularView<Eigen::Lower>() * u;
}

template <typename Scalar>
JointGaussian<Scalar> joint_over(const GpPosterior<Scalar>& gp,
                                 const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& points) {
  auto [mean, var] = posterior_mean_var(gp, points);
  (void)var;
  return factor_joint<Scalar>(mean, posterior_cov(gp, points), gp.kernel.signal_variance);
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> posterior_joint_sample(
    const GpPosterior<Scalar>& gp,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& points, rng::Stream& stream) {
  return sample_joint(joint_over(gp, points), stream);
}

// Shared prior snapshot for one (kernel, candidate set, noise) triple; runs
// copy it instead of refactorizing the prior covariance each time.
template <typename Scalar>
struct GridPrior {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix cov;
  Matrix chol;  // lower factor of cov + jitter*I
  Scalar jitter = Scalar(0);
  Scalar noise_variance = Scalar(0);
  Scalar signal_variance = Scalar(0);
};

template <typename Scalar>
GridPrior<Scalar> make_grid_prior(const KernelSpec<Scalar>& kernel,
                                  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& points,
                                  Scalar noise_variance) {
  if (!(noise_variance >= Scalar(0))) throw DomainError("make_grid_prior: noise_variance must be >= 0");
  GridPrior<Scalar> prior;
  prior.cov = kernel_matrix<Scalar>(kernel, points, points);
  auto jg = factor_joint<Scalar>(Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(points.rows()),
                                 prior.cov, kernel.signal_variance);
  prior.chol = std::move(jg.chol);
  prior.jitter = jg.jitter;
  prior.noise_variance = noise_variance;
  prior.signal_variance = kernel.signal_variance;
  return prior;
}

template <typename Scalar>
class GridPosterior {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit GridPosterior(const GridPrior<Scalar>& prior)
      : mu_(Vector::Zero(prior.cov.rows())),
        cov_(prior.cov),
        chol_(prior.chol),
        jitter_(prior.jitter),
        noise_(prior.noise_variance),
        signal_(prior.signal_variance) {}

  Eigen::Index size() const { return mu_.size(); }
  const Vector& mean() const { return mu_; }
  const Matrix& cov() const { return cov_; }
  Scalar jitter() const { return jitter_; }

  // Condition on y observed at candidate `point` with the model noise. The
  // maintained factor always represents cov_ + jitter*I; the rank-1 downdate
  // falls back to a full refactorization when it loses definiteness.
  void observe(Eigen::Index point, Scalar y) {
    if (point < 0 || point >= size()) throw DomainError("GridPosterior::observe: index out of range");
    const Vector g = cov_.col(point);
    const Scalar denom = g[point] + noise_;
    if (!(denom > Scalar(0)))
      throw NumericalError("GridPosterior::observe: nonpositive predictive variance");
    mu_.noalias() += g * ((y - mu_[point]) / denom);
    cov_.noalias() -= (g * g.transpose()) / denom;  // product first keeps cov_ exactly symmetric
    if (!rank1_downdate(g / std::sqrt(denom))) refactor();
  }

  // One joint draw over the full candidate set; consumes size() normals.
  Vector draw(rng::Stream& stream) const {
    Vector u(size());
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = static_cast<Scalar>(stream.next_normal());
    return mu_ + chol_.template triangularView<Eigen::Lower>() * u;
  }

  // z_count joint draws as columns, arithmetically one triangular product per
  // column and the same stream consumption as z_count sequential draws.
  Matrix draw_block(int z_count, rng::Stream& stream) const {
    Matrix u(size(), z_count);
    for (int z = 0; z < z_count; ++z)
      for (Eigen::Index i = 0; i < size(); ++i) u(i, z) = static_cast<Scalar>(stream.next_normal());
    Matrix out = chol_.template triangularView<Eigen::Lower>() * u;
    out.colwise() += mu_;
    return out;
  }

 private:
  bool rank1_downdate(const Vector& v) {
    // Classic Cholesky downdate of chol_ chol_^T - v v^T via Givens-like
    // eliminations; returns false when definiteness is lost numerically.
    Vector w = v;
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      const Scalar ljj = chol_(j, j);
      const Scalar r2 = ljj * ljj - w[j] * w[j];
      if (!(r2 > Scalar(0))) return false;
      const Scalar r = std::sqrt(r2);
      const Scalar c = r / ljj;
      const Scalar s = w[j] / ljj;
      chol_(j, j) = r;
      const Eigen::Index tail = w.size() - j - 1;
      if (tail > 0) {
        auto col = chol_.col(j).tail(tail);
        auto wt = w.tail(tail);
        col = (col - s * wt) / c;
        wt = c * wt - s * col;
      }
    }
    return true;
  }

  void refactor() {
    const Scalar jitter_max = Scalar(detail::kJitterMaxRel) * signal_;
    for (;; jitter_ *= Scalar(10)) {
      Matrix work = cov_;
      work.diagonal().array() += jitter_;
      Eigen::LLT<Matrix> llt(work);
      if (llt.info() == Eigen::Success) {
        chol_ = llt.matrixL();
        return;
      }
      if (jitter_ >= jitter_max)
        throw NumericalError("GridPosterior: covariance refactorization failed at jitter " +
                             std::to_string(static_cast<double>(jitter_)));
    }
  }

  Vector mu_;
  Matrix cov_;
  Matrix chol_;
  Scalar jitter_;
  Scalar noise_;
  Scalar signal_;
};

using GpPosteriord = GpPosterior<double>;
using GridPriord = GridPrior<double>;
using GridPosteriord = GridPosterior<double>;

}  // namespace stsbo
