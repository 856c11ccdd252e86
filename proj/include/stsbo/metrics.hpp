#pragma once

// Regret-versus-wall-time curves. Completed evaluations are attributed at
// their completion times; before the first completion the regret fields are
// undefined and carried as NaN (masked). Aggregation over seeds masks any
// time point at which some seed still has an empty evaluation set.

#include "stsbo/objective.hpp"
#include "stsbo/scheduler.hpp"

#include <Eigen/Core>

#include <string>
#include <utility>
#include <vector>

namespace stsbo {

struct RegretCurve {
  Eigen::VectorXd times;
  Eigen::VectorXd mean_regret;  // average true-value gap over completed evals
  Eigen::VectorXd min_regret;   // gap of the best completed eval, non-increasing
  Eigen::VectorXd eval_count;
};

// budget * (1/points, 2/points, ..., 1): completion times at 0 cannot occur,
// so starting above zero loses nothing.
Eigen::VectorXd default_time_grid(double budget, int points = 200);

RegretCurve regret_curve(const EvaluationTrace& trace, const TabularObjective& objective,
                         const Eigen::VectorXd& time_grid);

// Pointwise mean and sample standard deviation (n-1 denominator) over seeds.
// All curves must share the same time grid.
std::pair<RegretCurve, RegretCurve> aggregate_seeds(const std::vector<RegretCurve>& curves);

// Curve CSV: "# seed=..." comment when seed is provided, then
// time,mean_regret,min_regret,eval_count; masked entries serialize as nan.
void write_curve_csv(const RegretCurve& curve, const std::string& path,
                     const std::string& header_comment = "");

// Aggregate CSV appends _std columns for the three value fields.
void write_aggregate_csv(const RegretCurve& mean, const RegretCurve& std,
                         const std::string& path, const std::string& header_comment = "");

}  // namespace stsbo
