#include "stsbo/metrics.hpp"

#include "stsbo/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace stsbo {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

Eigen::VectorXd default_time_grid(double budget, int points) {
  if (!(budget > 0)) throw DomainError("default_time_grid: budget must be > 0");
  if (points < 1) throw DomainError("default_time_grid: points must be >= 1");
  Eigen::VectorXd grid(points);
  for (int i = 0; i < points; ++i) grid[i] = budget * static_cast<double>(i + 1) / points;
  return grid;
}

RegretCurve regret_curve(const EvaluationTrace& trace, const TabularObjective& objective,
                         const Eigen::VectorXd& time_grid) {
  for (Eigen::Index i = 1; i < time_grid.size(); ++i)
    if (!(time_grid[i] > time_grid[i - 1]))
      throw DomainError("regret_curve: time grid must be strictly increasing");

  // Completion-ordered (finish, true_f) pairs with prefix sums of the regret
  // and prefix maxima of the true value.
  std::vector<std::pair<double, double>> done;
  done.reserve(trace.records.size());
  for (const EvaluationRecord& r : trace.records) done.emplace_back(r.finish, r.true_f);
  std::sort(done.begin(), done.end());

  const double best = objective.best_value;
  std::vector<double> cum_regret(done.size() + 1, 0.0);
  std::vector<double> run_max(done.size() + 1, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < done.size(); ++i) {
    cum_regret[i + 1] = cum_regret[i] + (best - done[i].second);
    run_max[i + 1] = std::max(run_max[i], done[i].second);
  }

  RegretCurve curve;
  curve.times = time_grid;
  curve.mean_regret.resize(time_grid.size());
  curve.min_regret.resize(time_grid.size());
  curve.eval_count.resize(time_grid.size());
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < time_grid.size(); ++i) {
    while (k < done.size() && done[k].first <= time_grid[i]) ++k;
    curve.eval_count[i] = static_cast<double>(k);
    if (k == 0) {
      curve.mean_regret[i] = kNan;
      curve.min_regret[i] = kNan;
    } else {
      curve.mean_regret[i] = cum_regret[k] / static_cast<double>(k);
      curve.min_regret[i] = best - run_max[k];
    }
  }
  return curve;
}

std::pair<RegretCurve, RegretCurve> aggregate_seeds(const std::vector<RegretCurve>& curves) {
  if (curves.empty()) throw DomainError("aggregate_seeds: no curves");
  const Eigen::Index n = curves.front().times.size();
  for (const RegretCurve& c : curves) {
    if (c.times.size() != n || (c.times - curves.front().times).cwiseAbs().maxCoeff() != 0)
      throw DomainError("aggregate_seeds: curves disagree on the time grid");
  }
  const auto count = static_cast<double>(curves.size());

  RegretCurve mean, stdev;
  mean.times = stdev.times = curves.front().times;
  for (RegretCurve* c : {&mean, &stdev}) {
    c->mean_regret.resize(n);
    c->min_regret.resize(n);
    c->eval_count.resize(n);
  }

  auto field = [](const RegretCurve& c, int which) -> const Eigen::VectorXd& {
    return which == 0 ? c.mean_regret : which == 1 ? c.min_regret : c.eval_count;
  };
  auto out_field = [&](RegretCurve& c, int which) -> Eigen::VectorXd& {
    return which == 0 ? c.mean_regret : which == 1 ? c.min_regret : c.eval_count;
  };

  for (Eigen::Index i = 0; i < n; ++i) {
    bool masked = false;
    for (const RegretCurve& c : curves)
      masked = masked || std::isnan(c.mean_regret[i]) || std::isnan(c.min_regret[i]);
    for (int which = 0; which < 3; ++which) {
      if (masked) {
        out_field(mean, which)[i] = kNan;
        out_field(stdev, which)[i] = kNan;
        continue;
      }
      double m = 0;
      for (const RegretCurve& c : curves) m += field(c, which)[i];
      m /= count;
      double ss = 0;
      for (const RegretCurve& c : curves) {
        const double d = field(c, which)[i] - m;
        ss += d * d;
      }
      out_field(mean, which)[i] = m;
      out_field(stdev, which)[i] = count > 1 ? std::sqrt(ss / (count - 1)) : 0.0;
    }
  }
  return {std::move(mean), std::move(stdev)};
}

namespace {

void write_value(std::ofstream& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  out << buf;
}

}  // namespace

void write_curve_csv(const RegretCurve& curve, const std::string& path,
                     const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw FormatError("write_curve_csv: cannot open " + path);
  if (!header_comment.empty()) out << "# " << header_comment << "\n";
  out << "time,mean_regret,min_regret,eval_count\n";
  for (Eigen::Index i = 0; i < curve.times.size(); ++i) {
    write_value(out, curve.times[i]);
    out << ',';
    write_value(out, curve.mean_regret[i]);
    out << ',';
    write_value(out, curve.min_regret[i]);
    out << ',';
    write_value(out, curve.eval_count[i]);
    out << "\n";
  }
}

void write_aggregate_csv(const RegretCurve& mean, const RegretCurve& std, const std::string& path,
                         const std::string& header_comment) {
  if (mean.times.size() != std.times.size())
    throw DomainError("write_aggregate_csv: mean/std size mismatch");
  std::ofstream out(path);
  if (!out) throw FormatError("write_aggregate_csv: cannot open " + path);
  if (!header_comment.empty()) out << "# " << header_comment << "\n";
  out << "time,mean_regret,min_regret,eval_count,mean_regret_std,min_regret_std,eval_count_std\n";
  for (Eigen::Index i = 0; i < mean.times.size(); ++i) {
    write_value(out, mean.times[i]);
    for (double v : {mean.mean_regret[i], mean.min_regret[i], mean.eval_count[i],
                     std.mean_regret[i], std.min_regret[i], std.eval_count[i]}) {
      out << ',';
      write_value(out, v);
    }
    out << "\n";
  }
}

}  // namespace stsbo
