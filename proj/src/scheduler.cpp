#include "stsbo/scheduler.hpp"

#include "stsbo/acquisition.hpp"
#include "stsbo/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <queue>
#include <sstream>

namespace stsbo {

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::sequential: return "sequential";
    case Mode::synchronous: return "synchronous";
    case Mode::asynchronous: return "asynchronous";
  }
  throw DomainError("mode_name: unknown mode");
}

TimeModel TimeModel::explicit_scale(double scale) {
  if (!(scale > 0)) throw DomainError("TimeModel: scale must be > 0");
  return TimeModel{scale};
}

TimeModel TimeModel::normalized(const TabularObjective& objective, double target_rounds) {
  if (!(target_rounds > 0)) throw DomainError("TimeModel: target_rounds must be > 0");
  return TimeModel{target_rounds / objective.values.mean()};
}

ValueTransform ValueTransform::standardizing(const TabularObjective& objective) {
  const double mean = objective.values.mean();
  const double var = (objective.values.array() - mean).square().mean();
  const double sd = std::sqrt(var);
  return ValueTransform{mean, sd > 0 ? sd : 1.0};
}

std::vector<Eigen::Index> SelectionPolicy::select_batch(long first_ordinal, int count) {
  std::vector<Eigen::Index> points(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) points[static_cast<std::size_t>(i)] = select(first_ordinal + i);
  return points;
}

TsPolicy::TsPolicy(const GridPrior<double>& prior, std::uint64_t seed, ValueTransform transform)
    : posterior_(prior), seed_(seed), transform_(transform) {}

Eigen::Index TsPolicy::select(long ordinal) {
  rng::Stream stream(seed_, {stream_purpose::sample, static_cast<std::uint64_t>(ordinal)});
  return ts_select(posterior_, stream);
}

void TsPolicy::observe(Eigen::Index point, double y) {
  posterior_.observe(point, transform_.apply(y));
}

StsPolicy::StsPolicy(const GridPrior<double>& prior, std::uint64_t seed, const StsParams& params,
                     ValueTransform transform)
    : posterior_(prior), seed_(seed), params_(params), transform_(transform) {
  if (params.z_count < 1) throw DomainError("StsPolicy: z_count must be >= 1");
  if (!(params.beta >= 0)) throw DomainError("StsPolicy: beta must be >= 0");
}

Eigen::Index StsPolicy::select(long ordinal) {
  return select_batch(ordinal, 1)[0];
}

std::vector<Eigen::Index> StsPolicy::select_batch(long first_ordinal, int count) {
  rng::Stream sample_stream(seed_,
                            {stream_purpose::sample, static_cast<std::uint64_t>(first_ordinal)});
  const SampleEnsemble ensemble = build_ensemble(posterior_, params_.z_count, sample_stream);
  const TargetDistribution target = blahut_arimoto<double>(
      ensemble.distortion, BaOptions{params_.beta, params_.ba_k_max, params_.ba_tol});

  std::vector<Eigen::Index> points(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    rng::Stream select_stream(
        seed_, {stream_purpose::select, static_cast<std::uint64_t>(first_ordinal + i)});
    points[static_cast<std::size_t>(i)] = sts_select(target, select_stream);
  }
  return points;
}

void StsPolicy::observe(Eigen::Index point, double y) {
  posterior_.observe(point, transform_.apply(y));
}

namespace {

struct PendingEval {
  long ordinal;
  int worker;
  Eigen::Index point;
  double start;
  double finish;
  double observed_y;
  double true_f;
};

struct Launcher {
  const TabularObjective& objective;
  const NoiseModel& noise;
  const TimeModel& time_model;
  const RunSettings& settings;

  PendingEval launch(Eigen::Index point, long ordinal, int worker, double start) const {
    rng::Stream noise_stream(settings.seed,
                             {stream_purpose::noise, static_cast<std::uint64_t>(ordinal)});
    const double y = observe(objective, noise, point, noise_stream);
    const double f = objective.values[point];
    const double basis =
        settings.basis == DurationBasis::observed ? std::max(y, 0.01 * f) : f;
    const double dur = time_model.duration(basis);
    if (!(dur > 0)) throw NumericalError("scheduler: nonpositive duration");
    return PendingEval{ordinal, worker, point, start, start + dur, y, f};
  }
};

EvaluationRecord to_record(const PendingEval& e, const std::string& tag) {
  return EvaluationRecord{e.ordinal, e.worker, e.point, e.start, e.finish, e.observed_y, e.true_f,
                          tag};
}

void validate_settings(const RunSettings& s, int want_workers_at_least) {
  if (!(s.budget_rounds > 0)) throw DomainError("scheduler: budget_rounds must be > 0");
  if (s.m_workers < want_workers_at_least) throw DomainError("scheduler: m_workers must be >= 1");
}

}  // namespace

EvaluationTrace run_sequential(SelectionPolicy& policy, const TabularObjective& objective,
                               const NoiseModel& noise, const TimeModel& time_model,
                               const RunSettings& settings) {
  validate_settings(settings, 1);
  Launcher launcher{objective, noise, time_model, settings};
  EvaluationTrace trace;
  trace.mode = Mode::sequential;
  trace.m_workers = 1;
  trace.budget_rounds = settings.budget_rounds;
  trace.seed = settings.seed;
  trace.policy_tag = settings.policy_tag;

  double clock = 0;
  long ordinal = 0;
  while (clock < settings.budget_rounds) {
    const Eigen::Index point = policy.select(ordinal);
    const PendingEval e = launcher.launch(point, ordinal, 0, clock);
    ++ordinal;
    if (e.finish <= settings.budget_rounds) {
      trace.records.push_back(to_record(e, settings.policy_tag));
      policy.observe(e.point, e.observed_y);
    }
    clock = e.finish;
  }
  return trace;
}

EvaluationTrace run_synchronous(SelectionPolicy& policy, const TabularObjective& objective,
                                const NoiseModel& noise, const TimeModel& time_model,
                                const RunSettings& settings) {
  validate_settings(settings, 1);
  Launcher launcher{objective, noise, time_model, settings};
  EvaluationTrace trace;
  trace.mode = Mode::synchronous;
  trace.m_workers = settings.m_workers;
  trace.budget_rounds = settings.budget_rounds;
  trace.seed = settings.seed;
  trace.policy_tag = settings.policy_tag;

  const int m = settings.m_workers;
  double clock = 0;
  long ordinal = 0;
  while (clock < settings.budget_rounds) {
    const std::vector<Eigen::Index> points = policy.select_batch(ordinal, m);
    std::vector<PendingEval> round;
    round.reserve(static_cast<std::size_t>(m));
    double barrier = clock;
    for (int w = 0; w < m; ++w) {
      round.push_back(launcher.launch(points[static_cast<std::size_t>(w)], ordinal + w, w, clock));
      barrier = std::max(barrier, round.back().finish);
    }
    // Records and model updates happen at the barrier, in worker order.
    for (const PendingEval& e : round) {
      if (e.finish <= settings.budget_rounds)
        trace.records.push_back(to_record(e, settings.policy_tag));
    }
    for (const PendingEval& e : round) policy.observe(e.point, e.observed_y);
    ordinal += m;
    clock = barrier;
  }
  return trace;
}

EvaluationTrace run_asynchronous(SelectionPolicy& policy, const TabularObjective& objective,
                                 const NoiseModel& noise, const TimeModel& time_model,
                                 const RunSettings& settings) {
  validate_settings(settings, 1);
  Launcher launcher{objective, noise, time_model, settings};
  EvaluationTrace trace;
  trace.mode = Mode::asynchronous;
  trace.m_workers = settings.m_workers;
  trace.budget_rounds = settings.budget_rounds;
  trace.seed = settings.seed;
  trace.policy_tag = settings.policy_tag;

  // Min-heap on (finish, worker): simultaneous completions are processed in
  // ascending worker order.
  auto later = [](const PendingEval& a, const PendingEval& b) {
    if (a.finish != b.finish) return a.finish > b.finish;
    return a.worker > b.worker;
  };
  std::priority_queue<PendingEval, std::vector<PendingEval>, decltype(later)> queue(later);

  long ordinal = 0;
  for (int w = 0; w < settings.m_workers; ++w) {
    // Initial fills are all selected from the prior; no fantasy updates.
    const Eigen::Index point = policy.select(ordinal);
    queue.push(launcher.launch(point, ordinal, w, 0.0));
    ++ordinal;
  }
  while (!queue.empty()) {
    const PendingEval e = queue.top();
    queue.pop();
    if (e.finish > settings.budget_rounds) continue;  // still running at the budget: discarded
    trace.records.push_back(to_record(e, settings.policy_tag));
    policy.observe(e.point, e.observed_y);
    if (e.finish < settings.budget_rounds) {
      const Eigen::Index point = policy.select(ordinal);
      queue.push(launcher.launch(point, ordinal, e.worker, e.finish));
      ++ordinal;
    }
  }
  return trace;
}

EvaluationTrace run_mode(Mode mode, SelectionPolicy& policy, const TabularObjective& objective,
                         const NoiseModel& noise, const TimeModel& time_model,
                         const RunSettings& settings) {
  switch (mode) {
    case Mode::sequential: return run_sequential(policy, objective, noise, time_model, settings);
    case Mode::synchronous: return run_synchronous(policy, objective, noise, time_model, settings);
    case Mode::asynchronous: return run_asynchronous(policy, objective, noise, time_model, settings);
  }
  throw DomainError("run_mode: unknown mode");
}

void write_trace_csv(const EvaluationTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("write_trace_csv: cannot open " + path);
  out << "# seed=" << trace.seed << " mode=" << mode_name(trace.mode)
      << " m_workers=" << trace.m_workers << " budget_rounds=" << trace.budget_rounds
      << " policy=" << trace.policy_tag << "\n";
  out << "ordinal,worker,point_index,start,finish,observed_y,true_f\n";
  char buf[256];
  for (const EvaluationRecord& r : trace.records) {
    std::snprintf(buf, sizeof buf, "%ld,%d,%ld,%.6f,%.6f,%.6f,%.6f", r.ordinal, r.worker,
                  static_cast<long>(r.point), r.start, r.finish, r.observed_y, r.true_f);
    out << buf << "\n";
  }
}

EvaluationTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("read_trace_csv: cannot open " + path);
  EvaluationTrace trace;
  std::string line;
  long line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      // Metadata comment; recover the fields we wrote.
      std::istringstream is(line.substr(1));
      std::string token;
      while (is >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        try {
          if (key == "seed") trace.seed = std::stoull(value);
          else if (key == "m_workers") trace.m_workers = std::stoi(value);
          else if (key == "budget_rounds") trace.budget_rounds = std::stod(value);
          else if (key == "policy") trace.policy_tag = value;
          else if (key == "mode") {
            if (value == "sequential") trace.mode = Mode::sequential;
            else if (value == "synchronous") trace.mode = Mode::synchronous;
            else if (value == "asynchronous") trace.mode = Mode::asynchronous;
            else throw FormatError("");
          }
        } catch (...) {
          throw FormatError("read_trace_csv: bad metadata '" + token + "' at line " +
                            std::to_string(line_no));
        }
      }
      continue;
    }
    if (!saw_header) {
      if (line != "ordinal,worker,point_index,start,finish,observed_y,true_f")
        throw FormatError("read_trace_csv: unexpected header at line " + std::to_string(line_no));
      saw_header = true;
      continue;
    }
    EvaluationRecord r;
    long point = 0;
    if (std::sscanf(line.c_str(), "%ld,%d,%ld,%lf,%lf,%lf,%lf", &r.ordinal, &r.worker, &point,
                    &r.start, &r.finish, &r.observed_y, &r.true_f) != 7)
      throw FormatError("read_trace_csv: bad record at line " + std::to_string(line_no));
    r.point = point;
    r.policy_tag = trace.policy_tag;
    trace.records.push_back(std::move(r));
  }
  if (!saw_header) throw FormatError("read_trace_csv: missing header in " + path);
  return trace;
}

}  // namespace stsbo
