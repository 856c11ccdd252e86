#include "stsbo/acquisition.hpp"

#include "stsbo/error.hpp"

#include <cstdio>
#include <fstream>

namespace stsbo {

namespace {

SampleEnsemble ensemble_from_columns(Eigen::MatrixXd&& draws_as_columns) {
  SampleEnsemble e;
  e.values = draws_as_columns.transpose();
  e.distortion.resize(e.values.rows(), e.values.cols());
  for (Eigen::Index z = 0; z < e.values.rows(); ++z) {
    const double best = e.values.row(z).maxCoeff();
    e.distortion.row(z) = (best - e.values.row(z).array()).square().matrix();
  }
  return e;
}

}  // namespace

SampleEnsemble build_ensemble(const GridPosterior<double>& posterior, int z_count,
                              rng::Stream& stream) {
  if (z_count < 1) throw DomainError("build_ensemble: z_count must be >= 1");
  return ensemble_from_columns(posterior.draw_block(z_count, stream));
}

SampleEnsemble build_ensemble(const GpPosterior<double>& gp, const Eigen::MatrixXd& points,
                              int z_count, rng::Stream& stream) {
  if (z_count < 1) throw DomainError("build_ensemble: z_count must be >= 1");
  const JointGaussian<double> jg = joint_over(gp, points);
  Eigen::MatrixXd cols(points.rows(), z_count);
  for (int z = 0; z < z_count; ++z) cols.col(z) = sample_joint(jg, stream);
  return ensemble_from_columns(std::move(cols));
}

double lagrangian(const TargetDistribution& target, const Eigen::MatrixXd& distortion, double beta) {
  const Eigen::VectorXd w =
      Eigen::VectorXd::Constant(target.conditional.rows(), 1.0 / target.conditional.rows());
  return lagrangian_weighted<double>(target.conditional, distortion, beta, w);
}

Eigen::Index argmax_index(const Eigen::VectorXd& values) {
  if (values.size() == 0) throw DomainError("argmax_index: empty vector");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

Eigen::Index ts_select(const GridPosterior<double>& posterior, rng::Stream& stream) {
  return argmax_index(posterior.draw(stream));
}

Eigen::Index ts_select(const GpPosterior<double>& gp, const Eigen::MatrixXd& points,
                       rng::Stream& stream) {
  return argmax_index(posterior_joint_sample(gp, points, stream));
}

Eigen::Index sts_select(const TargetDistribution& target, rng::Stream& stream) {
  const Eigen::Index rows = target.conditional.rows();
  const Eigen::Index z = stream.next_index(static_cast<int>(rows));
  const double u = stream.next_double();
  double cum = 0.0;
  for (Eigen::Index x = 0; x < target.conditional.cols(); ++x) {
    cum += target.conditional(z, x);
    if (u < cum) return x;
  }
  return target.conditional.cols() - 1;  // roundoff in the final partial sum
}

void dump_ba_diagnostics(const Eigen::MatrixXd& distortion, const BaOptions& opt,
                         const std::string& prefix) {
  auto write_matrix = [](const Eigen::MatrixXd& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("dump_ba_diagnostics: cannot open " + path);
    char buf[64];
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
        out << (c ? "," : "") << buf;
      }
      out << "\n";
    }
  };

  write_matrix(distortion, prefix + "_distortion.csv");
  std::vector<BaResult<double>> trace;
  blahut_arimoto<double>(distortion, opt, &trace);
  for (std::size_t k = 0; k < trace.size(); ++k) {
    write_matrix(trace[k].conditional, prefix + "_conditional_k" + std::to_string(k + 1) + ".csv");
    write_matrix(trace[k].marginal.transpose(),
                 prefix + "_marginal_k" + std::to_string(k + 1) + ".csv");
  }
}

}  // namespace stsbo
