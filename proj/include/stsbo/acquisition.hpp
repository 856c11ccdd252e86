#pragma once

// Selection rules over a finite candidate set, driven by joint posterior
// draws. Thompson sampling takes the argmax of one draw; the satisficing rule
// compresses an ensemble of draws into a target distribution (see ba.hpp) and
// samples a point through a uniformly chosen ensemble row.

#include "stsbo/ba.hpp"
#include "stsbo/gp.hpp"
#include "stsbo/rng.hpp"

#include <Eigen/Core>

#include <string>

namespace stsbo {

using TargetDistribution = BaResult<double>;

struct SampleEnsemble {
  Eigen::MatrixXd values;      // z_count x points, row z = one joint draw
  Eigen::MatrixXd distortion;  // (row max - value)^2, so each row min is 0
};

SampleEnsemble build_ensemble(const GridPosterior<double>& posterior, int z_count,
                              rng::Stream& stream);
SampleEnsemble build_ensemble(const GpPosterior<double>& gp, const Eigen::MatrixXd& points,
                              int z_count, rng::Stream& stream);

// Mutual information + beta * expected distortion of a target with uniform
// row weights, in nats.
double lagrangian(const TargetDistribution& target, const Eigen::MatrixXd& distortion, double beta);

// First index of the largest entry (ties resolved to the lowest index).
Eigen::Index argmax_index(const Eigen::VectorXd& values);

// Thompson selection: argmax of a single joint draw.
Eigen::Index ts_select(const GridPosterior<double>& posterior, rng::Stream& stream);
Eigen::Index ts_select(const GpPosterior<double>& gp, const Eigen::MatrixXd& points,
                       rng::Stream& stream);

// Satisficing selection: row ~ Uniform(z_count), then a point from that row's
// conditional by inverse CDF. Consumes exactly two uniforms.
Eigen::Index sts_select(const TargetDistribution& target, rng::Stream& stream);

// Per-iteration dump of one compression for debugging: distortion matrix plus
// conditional/marginal snapshots, written as CSV files under `prefix`.
void dump_ba_diagnostics(const Eigen::MatrixXd& distortion, const BaOptions& opt,
                         const std::string& prefix);

}  // namespace stsbo
