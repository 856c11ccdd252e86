#pragma once

// Exact verification harness on tiny noise-free environments: a known finite
// class of candidate functions, a prior over the class, and exhaustive
// enumeration of every selection/observation outcome. Because everything is
// a finite mixture, posterior updates, target compressions, losses, and
// mutual informations are all closed-form, so the satisficing identities can
// be checked to floating-point residuals rather than sampled.
//
// All information quantities are in nats.

#include "stsbo/ba.hpp"
#include "stsbo/grid.hpp"

#include <Eigen/Core>

#include <utility>
#include <vector>

namespace stsbo {

struct FiniteEnv {
  GridDomain domain;              // |X| <= 8 points; coordinates are labels only
  Eigen::MatrixXd function_class; // m x |X|, row i = member function values
  Eigen::VectorXd prior;          // m, nonnegative, sums to 1
};

void validate_env(const FiniteEnv& env);

// Squared best-vs-chosen gap per member: d(i, x) = (max_x' f_i - f_i(x))^2.
Eigen::MatrixXd env_distortion(const FiniteEnv& env);

// Prior restricted to members consistent with the noise-free history and
// renormalized. Throws DomainError when nothing is consistent.
Eigen::VectorXd exact_posterior(const FiniteEnv& env,
                                const std::vector<std::pair<Eigen::Index, double>>& history);

struct ExactTarget {
  Eigen::MatrixXd conditional;  // m x |X|, row i = p(target | member i)
  Eigen::VectorXd marginal;     // posterior-weighted average of the rows
  double beta = 0;
};

// Compression of the posterior mixture, iterated to convergence (the default
// tolerances are far past the 1e-9 identity checks).
ExactTarget exact_ba_target(const FiniteEnv& env, const Eigen::VectorXd& posterior, double beta,
                            int k_max = 20000, double tol = 1e-13);

double exact_mutual_info(const ExactTarget& target, const Eigen::VectorXd& posterior);

// I + beta * E[distortion] of a fixed conditional under the given weights.
double exact_loss(const FiniteEnv& env, const Eigen::MatrixXd& conditional,
                  const Eigen::VectorXd& posterior, double beta);

// One-step identity: for a FIXED target conditional held constant across the
// update, the expected next loss equals the current loss minus the mutual
// information between the target and the (batch) selection outcome. Returns
// the absolute residual, enumerating every batch of `batch` iid selections
// from selection_dist and every consistent observation pattern. batch = 1 is
// the sequential/asynchronous form.
double check_lemma_identity(const FiniteEnv& env, double beta,
                            const Eigen::VectorXd& selection_dist, int batch,
                            const Eigen::MatrixXd* fixed_conditional = nullptr);

// Telescoped bound over an exhaustively enumerated outcome tree of `horizon`
// steps, recomputing the optimal target at every node and selecting batches
// iid from its marginal. cumulative_info and loss_bound carry the batch
// multiplicity, so satisfied is cumulative_info <= loss_bound + 1e-9.
// min_step_slack is the worst one-step supermartingale slack encountered:
// loss(t) - info(t) - E[loss(t+1)], which must be >= -1e-9.
struct TelescopeReport {
  double cumulative_info = 0;
  double loss_bound = 0;
  double min_step_slack = 0;
  bool satisfied = false;
  long leaves = 0;
};

TelescopeReport check_telescoping(const FiniteEnv& env, double beta, int horizon, int batch);

inline constexpr long kEnumerationLeafGuard = 1000000;

}  // namespace stsbo
