#include "stsbo/theory.hpp"

#include "stsbo/error.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace stsbo {

void validate_env(const FiniteEnv& env) {
  const Eigen::Index m = env.function_class.rows();
  const Eigen::Index n = env.function_class.cols();
  if (m < 1 || n < 1) throw DomainError("FiniteEnv: empty function class");
  if (n != env.domain.size()) throw DomainError("FiniteEnv: domain size mismatch");
  if (env.prior.size() != m) throw DomainError("FiniteEnv: prior size mismatch");
  if ((env.prior.array() < 0).any()) throw DomainError("FiniteEnv: prior entries must be >= 0");
  if (std::abs(env.prior.sum() - 1.0) > 1e-12) throw DomainError("FiniteEnv: prior must sum to 1");
  if (!env.function_class.allFinite()) throw DomainError("FiniteEnv: non-finite member values");
}

Eigen::MatrixXd env_distortion(const FiniteEnv& env) {
  Eigen::MatrixXd d(env.function_class.rows(), env.function_class.cols());
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    const double best = env.function_class.row(i).maxCoeff();
    d.row(i) = (best - env.function_class.row(i).array()).square().matrix();
  }
  return d;
}

Eigen::VectorXd exact_posterior(const FiniteEnv& env,
                                const std::vector<std::pair<Eigen::Index, double>>& history) {
  validate_env(env);
  Eigen::VectorXd w = env.prior;
  for (const auto& [x, y] : history) {
    if (x < 0 || x >= env.function_class.cols())
      throw DomainError("exact_posterior: point index out of range");
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double v = env.function_class(i, x);
      if (std::abs(v - y) > 1e-12 * std::max(1.0, std::abs(y))) w[i] = 0;
    }
  }
  const double total = w.sum();
  if (!(total > 0)) throw DomainError("exact_posterior: history inconsistent with every member");
  return w / total;
}

ExactTarget exact_ba_target(const FiniteEnv& env, const Eigen::VectorXd& posterior, double beta,
                            int k_max, double tol) {
  validate_env(env);
  if (posterior.size() != env.function_class.rows())
    throw DomainError("exact_ba_target: posterior size mismatch");
  const BaResult<double> res =
      blahut_arimoto_weighted<double>(env_distortion(env), BaOptions{beta, k_max, tol}, posterior);
  return ExactTarget{res.conditional, res.marginal, beta};
}

double exact_mutual_info(const ExactTarget& target, const Eigen::VectorXd& posterior) {
  return mutual_information<double>(target.conditional, posterior);
}

double exact_loss(const FiniteEnv& env, const Eigen::MatrixXd& conditional,
                  const Eigen::VectorXd& posterior, double beta) {
  return lagrangian_weighted<double>(conditional, env_distortion(env), beta, posterior);
}

namespace {

struct Outcome {
  double prob = 0;            // selection probability times observation mass
  Eigen::VectorXd posterior;  // renormalized restriction
};

// Every (batch selection, observation pattern) with positive probability.
// Selections are iid from `selection`; observations are the noise-free member
// values, so patterns group members that agree on every selected point.
std::vector<Outcome> enumerate_outcomes(const FiniteEnv& env, const Eigen::VectorXd& weights,
                                        const Eigen::VectorXd& selection, int batch) {
  const Eigen::Index n = env.function_class.cols();
  std::vector<Outcome> outcomes;
  std::vector<Eigen::Index> xs(static_cast<std::size_t>(batch), 0);
  for (;;) {
    double sel_prob = 1;
    for (Eigen::Index x : xs) sel_prob *= selection[x];
    if (sel_prob > 0) {
      std::map<std::vector<double>, Eigen::VectorXd> groups;
      for (Eigen::Index i = 0; i < weights.size(); ++i) {
        if (weights[i] == 0) continue;
        std::vector<double> pattern;
        pattern.reserve(xs.size());
        for (Eigen::Index x : xs) pattern.push_back(env.function_class(i, x));
        auto [it, fresh] = groups.emplace(std::move(pattern), Eigen::VectorXd::Zero(weights.size()));
        it->second[i] = weights[i];
      }
      for (auto& [pattern, restricted] : groups) {
        const double mass = restricted.sum();
        outcomes.push_back(Outcome{sel_prob * mass, restricted / mass});
      }
    }
    // Odometer over X^batch.
    int digit = 0;
    for (; digit < batch; ++digit) {
      if (++xs[static_cast<std::size_t>(digit)] < n) break;
      xs[static_cast<std::size_t>(digit)] = 0;
    }
    if (digit == batch) break;
  }
  return outcomes;
}

// Mutual information between the target point and the outcome: the expected
// divergence of the updated target marginal from the current one.
double outcome_information(const Eigen::MatrixXd& conditional, const Eigen::VectorXd& weights,
                           const std::vector<Outcome>& outcomes) {
  const Eigen::VectorXd q = conditional.transpose() * weights;
  double info = 0;
  for (const Outcome& o : outcomes) {
    const Eigen::VectorXd qn = conditional.transpose() * o.posterior;
    double kl = 0;
    for (Eigen::Index a = 0; a < qn.size(); ++a)
      // q[a] can underflow to zero while qn[a] keeps a denormal remnant; the
      // exact term is then below representable precision, so skip it.
      if (qn[a] > 0 && q[a] > 0) kl += qn[a] * std::log(qn[a] / q[a]);
    info += o.prob * kl;
  }
  return info;
}

}  // namespace

double check_lemma_identity(const FiniteEnv& env, double beta, const Eigen::VectorXd& selection_dist,
                            int batch, const Eigen::MatrixXd* fixed_conditional) {
  validate_env(env);
  if (batch < 1) throw DomainError("check_lemma_identity: batch must be >= 1");
  if (selection_dist.size() != env.function_class.cols())
    throw DomainError("check_lemma_identity: selection distribution size mismatch");
  if ((selection_dist.array() < 0).any() || std::abs(selection_dist.sum() - 1.0) > 1e-12)
    throw DomainError("check_lemma_identity: selection distribution invalid");

  const Eigen::VectorXd& w = env.prior;
  const Eigen::MatrixXd conditional =
      fixed_conditional ? *fixed_conditional : exact_ba_target(env, w, beta).conditional;
  if (conditional.rows() != env.function_class.rows() ||
      conditional.cols() != env.function_class.cols())
    throw DomainError("check_lemma_identity: conditional shape mismatch");

  const double loss_now = exact_loss(env, conditional, w, beta);
  const std::vector<Outcome> outcomes = enumerate_outcomes(env, w, selection_dist, batch);
  const double info = outcome_information(conditional, w, outcomes);
  double expected_next = 0;
  for (const Outcome& o : outcomes)
    expected_next += o.prob * exact_loss(env, conditional, o.posterior, beta);
  return std::abs(expected_next - (loss_now - info));
}

namespace {

struct TelescopeWalker {
  const FiniteEnv& env;
  double beta;
  int batch;
  int horizon;
  long nodes = 0;
  double min_slack = std::numeric_limits<double>::infinity();

  struct NodeResult {
    double cumulative_info = 0;
    double loss = 0;  // loss of this node's own optimal target
  };

  NodeResult walk(const Eigen::VectorXd& weights, int depth) {
    if (++nodes > kEnumerationLeafGuard)
      throw ResourceError("check_telescoping: outcome tree exceeds " +
                          std::to_string(kEnumerationLeafGuard) + " nodes");
    // A collapsed posterior can never gain information again and its optimal
    // target has zero loss; the subtree contributes nothing.
    if (weights.maxCoeff() >= 1.0 - 1e-15) return NodeResult{0, 0};

    const ExactTarget target = exact_ba_target(env, weights, beta);
    NodeResult res;
    res.loss = exact_loss(env, target.conditional, weights, beta);
    if (depth == horizon) return res;

    const std::vector<Outcome> outcomes =
        enumerate_outcomes(env, weights, target.marginal, batch);
    const double info = outcome_information(target.conditional, weights, outcomes);
    double expected_child_loss = 0;
    res.cumulative_info = info;
    for (const Outcome& o : outcomes) {
      const NodeResult child = walk(o.posterior, depth + 1);
      res.cumulative_info += o.prob * child.cumulative_info;
      expected_child_loss += o.prob * child.loss;
    }
    min_slack = std::min(min_slack, res.loss - info - expected_child_loss);
    return res;
  }
};

}  // namespace

TelescopeReport check_telescoping(const FiniteEnv& env, double beta, int horizon, int batch) {
  validate_env(env);
  if (horizon < 1) throw DomainError("check_telescoping: horizon must be >= 1");
  if (batch < 1) throw DomainError("check_telescoping: batch must be >= 1");

  TelescopeWalker walker{env, beta, batch, horizon};
  const TelescopeWalker::NodeResult root = walker.walk(env.prior, 0);

  TelescopeReport report;
  report.cumulative_info = batch * root.cumulative_info;
  report.loss_bound = batch * root.loss;
  report.min_step_slack =
      std::isfinite(walker.min_slack) ? walker.min_slack : 0.0;
  report.satisfied = report.cumulative_info <= report.loss_bound + 1e-9;
  report.leaves = walker.nodes;
  return report;
}

}  // namespace stsbo
