#pragma once

// Deterministic discrete-event simulation of grid evaluations under a round
// budget. Three engines share one policy interface:
//
//   sequential    one worker, select -> run -> observe -> repeat
//   synchronous   M workers start each round together and wait for the
//                 slowest; the model updates once per round at the barrier
//   asynchronous  M workers; each completion updates the model and refills
//                 that worker immediately, so nobody idles
//
// Determinism discipline: every random draw comes from a substream keyed by
// (run seed, purpose, selection ordinal). Workers and modes never enter the
// keys, so with M = 1 all three engines replay the identical trace, and a
// rerun with the same seed reproduces output files byte for byte.
//
// Budget discipline: new work is dispatched only while the clock is strictly
// below the budget; an evaluation still running at the budget is discarded
// entirely. In synchronous mode a cut round keeps its finished records, so
// only the final batch can be partial.

#include "stsbo/gp.hpp"
#include "stsbo/objective.hpp"
#include "stsbo/rng.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace stsbo {

enum class Mode { sequential, synchronous, asynchronous };

std::string mode_name(Mode mode);

enum class DurationBasis { observed, true_value };

// Evaluation wall time in rounds: scale * value, with the observed value
// floored at 1% of the true value so a freak negative noise draw cannot
// produce a nonpositive duration.
struct TimeModel {
  double scale = 1.0;

  static TimeModel explicit_scale(double scale);
  // Scale such that the grid-average true value costs target_rounds.
  static TimeModel normalized(const TabularObjective& objective, double target_rounds = 100.0);

  double duration(double value) const { return scale * value; }
};

struct EvaluationRecord {
  long ordinal = 0;  // selection order, 0-based
  int worker = 0;
  Eigen::Index point = 0;
  double start = 0;
  double finish = 0;
  double observed_y = 0;
  double true_f = 0;
  std::string policy_tag;
};

struct EvaluationTrace {
  std::vector<EvaluationRecord> records;  // completion-processing order
  Mode mode = Mode::sequential;
  int m_workers = 1;
  double budget_rounds = 0;
  std::uint64_t seed = 0;
  std::string policy_tag;
};

// Affine map applied to observations before they reach the surrogate: the
// model sees (y - offset) / scale. Standardizing against the objective table
// keeps the zero-mean prior calibrated and puts squared distortions on the
// O(1) scale the beta range expects. Traces and metrics keep raw values.
struct ValueTransform {
  double offset = 0;
  double scale = 1;

  double apply(double y) const { return (y - offset) / scale; }
  static ValueTransform standardizing(const TabularObjective& objective);
};

// Stream purposes under one run seed.
namespace stream_purpose {
inline constexpr std::uint64_t sample = 1;  // posterior draws for one selection ordinal
inline constexpr std::uint64_t select = 2;  // row choice + inverse-CDF draw
inline constexpr std::uint64_t noise = 3;   // observation noise for one evaluation
}  // namespace stream_purpose

// Stateful per-run selection engine. select() serves sequential/asynchronous
// steps; select_batch() serves one synchronous round from a single model
// snapshot. Both key their randomness by selection ordinal only.
class SelectionPolicy {
 public:
  virtual ~SelectionPolicy() = default;
  virtual Eigen::Index select(long ordinal) = 0;
  virtual std::vector<Eigen::Index> select_batch(long first_ordinal, int count);
  virtual void observe(Eigen::Index point, double y) = 0;
  virtual std::string name() const = 0;  // "ts" or "sts"
};

class TsPolicy final : public SelectionPolicy {
 public:
  TsPolicy(const GridPrior<double>& prior, std::uint64_t seed, ValueTransform transform = {});
  Eigen::Index select(long ordinal) override;
  void observe(Eigen::Index point, double y) override;
  std::string name() const override { return "ts"; }

 private:
  GridPosterior<double> posterior_;
  std::uint64_t seed_;
  ValueTransform transform_;
};

struct StsParams {
  int z_count = 64;
  double beta = 1.0;
  int ba_k_max = 100;
  double ba_tol = 1e-6;
};

class StsPolicy final : public SelectionPolicy {
 public:
  StsPolicy(const GridPrior<double>& prior, std::uint64_t seed, const StsParams& params,
            ValueTransform transform = {});
  Eigen::Index select(long ordinal) override;
  // One ensemble compression per round, keyed by the round's first ordinal;
  // the count in-round draws are keyed by their own ordinals.
  std::vector<Eigen::Index> select_batch(long first_ordinal, int count) override;
  void observe(Eigen::Index point, double y) override;
  std::string name() const override { return "sts"; }

 private:
  GridPosterior<double> posterior_;
  std::uint64_t seed_;
  StsParams params_;
  ValueTransform transform_;
};

struct RunSettings {
  double budget_rounds = 0;
  int m_workers = 1;
  DurationBasis basis = DurationBasis::observed;
  std::uint64_t seed = 0;
  std::string policy_tag;  // recorded verbatim in trace records
};

EvaluationTrace run_sequential(SelectionPolicy& policy, const TabularObjective& objective,
                               const NoiseModel& noise, const TimeModel& time_model,
                               const RunSettings& settings);
EvaluationTrace run_synchronous(SelectionPolicy& policy, const TabularObjective& objective,
                                const NoiseModel& noise, const TimeModel& time_model,
                                const RunSettings& settings);
EvaluationTrace run_asynchronous(SelectionPolicy& policy, const TabularObjective& objective,
                                 const NoiseModel& noise, const TimeModel& time_model,
                                 const RunSettings& settings);

EvaluationTrace run_mode(Mode mode, SelectionPolicy& policy, const TabularObjective& objective,
                         const NoiseModel& noise, const TimeModel& time_model,
                         const RunSettings& settings);

// Trace CSV: "# seed=..." comment, then
// ordinal,worker,point_index,start,finish,observed_y,true_f with the float
// columns as fixed-point decimals (6 places).
void write_trace_csv(const EvaluationTrace& trace, const std::string& path);
EvaluationTrace read_trace_csv(const std::string& path);

}  // namespace stsbo
