#include "stsbo/scheduler.hpp"

#include "stsbo/error.hpp"
#include "stsbo/gp.hpp"
#include "stsbo/grid.hpp"
#include "stsbo/kernel.hpp"
#include "stsbo/objective.hpp"

#include "doctest.h"
#include "helpers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

using namespace stsbo;

namespace {

// Fixed selection sequence, no model: isolates the event mechanics from the
// policies so timing assertions stay exact.
class ScriptedPolicy final : public SelectionPolicy {
 public:
  explicit ScriptedPolicy(std::vector<Eigen::Index> script) : script_(std::move(script)) {}
  Eigen::Index select(long ordinal) override {
    return script_[static_cast<std::size_t>(ordinal) % script_.size()];
  }
  void observe(Eigen::Index, double) override {}
  std::string name() const override { return "scripted"; }

 private:
  std::vector<Eigen::Index> script_;
};

RunSettings settings(double budget, int m, std::uint64_t seed,
                     DurationBasis basis = DurationBasis::observed) {
  RunSettings s;
  s.budget_rounds = budget;
  s.m_workers = m;
  s.basis = basis;
  s.seed = seed;
  s.policy_tag = "test";
  return s;
}

GridPrior<double> line_prior(const GridDomain& grid, double lengthscale = 1.5,
                             double noise = 0.01) {
  KernelSpecd kernel;
  kernel.lengthscales = Eigen::VectorXd::Constant(1, lengthscale);
  return make_grid_prior<double>(kernel, grid.points, noise);
}

bool records_equal(const EvaluationRecord& a, const EvaluationRecord& b) {
  return a.ordinal == b.ordinal && a.worker == b.worker && a.point == b.point &&
         a.start == b.start && a.finish == b.finish && a.observed_y == b.observed_y &&
         a.true_f == b.true_f && a.policy_tag == b.policy_tag;
}

}  // namespace

TEST_SUITE("scheduler") {

TEST_CASE("sequential constant objective packs the budget exactly") {
  const auto obj = testutil::constant_objective(3, 100.0);
  ScriptedPolicy policy({1});
  const EvaluationTrace trace = run_sequential(policy, obj, NoiseModel{0.0},
                                               TimeModel::explicit_scale(1.0),
                                               settings(1000.0, 1, 5));
  REQUIRE(trace.records.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    const EvaluationRecord& r = trace.records[i];
    CHECK(r.ordinal == static_cast<long>(i));
    CHECK(r.worker == 0);
    CHECK(r.start == 100.0 * static_cast<double>(i));
    CHECK(r.finish == r.start + 100.0);  // the last one lands exactly on the budget and is kept
    CHECK(r.observed_y == 100.0);
    CHECK(r.true_f == 100.0);
  }
}

TEST_CASE("an evaluation still running at the budget is discarded") {
  const auto obj = testutil::constant_objective(3, 100.0);
  ScriptedPolicy policy({0});
  const EvaluationTrace trace = run_sequential(policy, obj, NoiseModel{0.0},
                                               TimeModel::explicit_scale(1.0),
                                               settings(50.0, 1, 5));
  CHECK(trace.records.empty());
}

TEST_CASE("synchronous rounds share a start and wait for the slowest") {
  const auto obj = testutil::values_objective({50.0, 80.0, 120.0});
  ScriptedPolicy policy({0, 1, 2});
  const EvaluationTrace trace = run_synchronous(policy, obj, NoiseModel{0.0},
                                                TimeModel::explicit_scale(1.0),
                                                settings(240.0, 3, 6));
  REQUIRE(trace.records.size() == 6);
  for (int w = 0; w < 3; ++w) {
    CHECK(trace.records[static_cast<std::size_t>(w)].start == 0.0);
    CHECK(trace.records[static_cast<std::size_t>(3 + w)].start == 120.0);  // barrier of round one
    CHECK(trace.records[static_cast<std::size_t>(3 + w)].worker == w);
  }
  CHECK(trace.records[5].finish == 240.0);
}

TEST_CASE("a cut synchronous round keeps only its finished evaluations") {
  const auto obj = testutil::values_objective({50.0, 200.0});
  ScriptedPolicy policy({0, 1});
  const EvaluationTrace trace = run_synchronous(policy, obj, NoiseModel{0.0},
                                                TimeModel::explicit_scale(1.0),
                                                settings(100.0, 2, 6));
  REQUIRE(trace.records.size() == 1);
  CHECK(trace.records[0].worker == 0);
  CHECK(trace.records[0].finish == 50.0);
}

TEST_CASE("synchronous constant objective yields full batches") {
  const auto obj = testutil::constant_objective(4, 100.0);
  ScriptedPolicy policy({2});
  const EvaluationTrace trace = run_synchronous(policy, obj, NoiseModel{0.0},
                                                TimeModel::explicit_scale(1.0),
                                                settings(1000.0, 3, 7));
  REQUIRE(trace.records.size() == 30);
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK(trace.records[i].start == 100.0 * static_cast<double>(i / 3));
    CHECK(trace.records[i].worker == static_cast<int>(i % 3));
  }
}

TEST_CASE("asynchronous workers never idle") {
  const auto obj = testutil::constant_objective(5, 100.0);
  ScriptedPolicy policy({0, 3, 1, 4, 2});
  const EvaluationTrace trace = run_asynchronous(policy, obj, NoiseModel{0.05},
                                                 TimeModel::explicit_scale(1.0),
                                                 settings(1000.0, 3, 8));
  REQUIRE(trace.records.size() > 15);
  std::map<int, double> last_finish;
  for (const EvaluationRecord& r : trace.records) {
    CHECK(r.finish <= 1000.0);
    const auto it = last_finish.find(r.worker);
    if (it == last_finish.end()) {
      CHECK(r.start == 0.0);
    } else {
      CHECK(r.start == it->second);  // exact handoff, no gap and no overlap
    }
    last_finish[r.worker] = r.finish;
  }
  CHECK(last_finish.size() == 3);
}

TEST_CASE("asynchronous constant objective degenerates to synchronized waves") {
  const auto obj = testutil::constant_objective(3, 100.0);
  ScriptedPolicy policy({1});
  const EvaluationTrace trace = run_asynchronous(policy, obj, NoiseModel{0.0},
                                                 TimeModel::explicit_scale(1.0),
                                                 settings(1000.0, 3, 9));
  REQUIRE(trace.records.size() == 30);
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK(trace.records[i].start == 100.0 * static_cast<double>(i / 3));
    CHECK(trace.records[i].worker == static_cast<int>(i % 3));  // finish ties break by worker id
  }
}

TEST_CASE("asynchronous trace replays through the dispatch oracle") {
  // Reconstruct the event loop from the records alone: completions arrive in
  // (finish, worker) order, and each completion strictly before the budget
  // hands its worker the next selection ordinal.
  const GridDomain grid = testutil::line_grid(8);
  const auto obj = testutil::values_objective({310.0, 420.0, 505.0, 480.0,
                                               390.0, 350.0, 520.0, 450.0});
  TsPolicy policy(line_prior(grid), 31, ValueTransform::standardizing(obj));
  const double budget = 800.0;
  const int m = 3;
  const EvaluationTrace trace = run_asynchronous(policy, obj, NoiseModel{0.2},
                                                 TimeModel::normalized(obj),
                                                 settings(budget, m, 31));
  REQUIRE(trace.records.size() > 15);

  std::vector<EvaluationRecord> sorted = trace.records;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const EvaluationRecord& a, const EvaluationRecord& b) {
                     if (a.finish != b.finish) return a.finish < b.finish;
                     return a.worker < b.worker;
                   });
  for (std::size_t i = 0; i < sorted.size(); ++i)
    CHECK(sorted[i].ordinal == trace.records[i].ordinal);

  long initial = 0;
  for (const EvaluationRecord& r : trace.records) {
    if (r.ordinal < m) {
      ++initial;
      CHECK(r.worker == static_cast<int>(r.ordinal));
      CHECK(r.start == 0.0);
    }
  }
  CHECK(initial == m);

  // k-th completion with finish < budget dispatched ordinal m + k. A missing
  // ordinal means that evaluation was cut at the budget; a present one must
  // sit on the dispatching worker and start at the dispatching finish.
  std::vector<const EvaluationRecord*> dispatchers;
  for (const EvaluationRecord& r : trace.records)
    if (r.finish < budget) dispatchers.push_back(&r);
  for (const EvaluationRecord& r : trace.records) {
    if (r.ordinal < m) continue;
    const std::size_t k = static_cast<std::size_t>(r.ordinal - m);
    REQUIRE(k < dispatchers.size());
    CHECK(r.worker == dispatchers[k]->worker);
    CHECK(r.start == dispatchers[k]->finish);
  }
}

TEST_CASE("one worker makes all three modes replay the same trace") {
  const GridDomain grid = testutil::line_grid(8);
  const auto obj = testutil::values_objective({310.0, 420.0, 505.0, 480.0,
                                               390.0, 350.0, 520.0, 450.0});
  const ValueTransform transform = ValueTransform::standardizing(obj);
  const TimeModel time = TimeModel::normalized(obj);

  const auto run_one = [&](Mode mode, bool sts) {
    const GridPrior<double> prior = line_prior(grid);
    const RunSettings s = settings(600.0, 1, 17);
    if (sts) {
      StsPolicy policy(prior, 17, StsParams{16, 1.0, 100, 1e-6}, transform);
      return run_mode(mode, policy, obj, NoiseModel{0.05}, time, s);
    }
    TsPolicy policy(prior, 17, transform);
    return run_mode(mode, policy, obj, NoiseModel{0.05}, time, s);
  };

  for (const bool sts : {false, true}) {
    CAPTURE(sts);
    const EvaluationTrace seq = run_one(Mode::sequential, sts);
    const EvaluationTrace syn = run_one(Mode::synchronous, sts);
    const EvaluationTrace asy = run_one(Mode::asynchronous, sts);
    REQUIRE(seq.records.size() > 3);
    REQUIRE(syn.records.size() == seq.records.size());
    REQUIRE(asy.records.size() == seq.records.size());
    for (std::size_t i = 0; i < seq.records.size(); ++i) {
      CHECK(records_equal(seq.records[i], syn.records[i]));
      CHECK(records_equal(seq.records[i], asy.records[i]));
    }
    // The CSV bodies agree too; only the mode field in the comment differs.
    testutil::TempDir dir("m1");
    write_trace_csv(seq, dir.file("seq.csv"));
    write_trace_csv(syn, dir.file("syn.csv"));
    write_trace_csv(asy, dir.file("asy.csv"));
    const auto body = [&](const std::string& name) {
      auto lines = testutil::read_lines(dir.file(name));
      REQUIRE(!lines.empty());
      lines.erase(lines.begin());
      return lines;
    };
    CHECK(body("seq.csv") == body("syn.csv"));
    CHECK(body("seq.csv") == body("asy.csv"));
  }
}

TEST_CASE("a rerun with the same seed is byte identical") {
  const GridDomain grid = testutil::line_grid(8);
  const auto obj = testutil::values_objective({310.0, 420.0, 505.0, 480.0,
                                               390.0, 350.0, 520.0, 450.0});
  const ValueTransform transform = ValueTransform::standardizing(obj);
  testutil::TempDir dir("rerun");
  for (const char* name : {"a.csv", "b.csv"}) {
    StsPolicy policy(line_prior(grid), 23, StsParams{16, 0.5, 100, 1e-6}, transform);
    const EvaluationTrace trace = run_asynchronous(policy, obj, NoiseModel{0.05},
                                                   TimeModel::normalized(obj),
                                                   settings(700.0, 3, 23));
    write_trace_csv(trace, dir.file(name));
  }
  CHECK(testutil::read_file(dir.file("a.csv")) == testutil::read_file(dir.file("b.csv")));
}

TEST_CASE("observed durations are floored at one percent of the truth") {
  const auto obj = testutil::constant_objective(2, 100.0);
  ScriptedPolicy policy({0});
  // 200% noise sends a third of the draws negative, so the floor must carry
  // the clock through those evaluations.
  const EvaluationTrace trace = run_sequential(policy, obj, NoiseModel{2.0},
                                               TimeModel::explicit_scale(1.0),
                                               settings(3000.0, 1, 12));
  REQUIRE(trace.records.size() > 5);
  int floored = 0;
  for (const EvaluationRecord& r : trace.records) {
    const double dur = std::max(r.observed_y, 0.01 * r.true_f);
    CHECK(r.finish - r.start == doctest::Approx(dur).epsilon(1e-9));
    if (r.observed_y < 0.01 * r.true_f) ++floored;
  }
  CHECK(floored > 0);
  CHECK(floored < static_cast<int>(trace.records.size()));
}

TEST_CASE("true-value basis ignores observation noise in the clock") {
  const auto obj = testutil::constant_objective(2, 100.0);
  ScriptedPolicy policy({1});
  const EvaluationTrace trace =
      run_sequential(policy, obj, NoiseModel{0.5}, TimeModel::explicit_scale(1.0),
                     settings(500.0, 1, 13, DurationBasis::true_value));
  REQUIRE(trace.records.size() == 5);
  for (const EvaluationRecord& r : trace.records) {
    CHECK(r.finish - r.start == 100.0);
    CHECK(r.observed_y != 100.0);  // the noise still lands in the record
  }
}

TEST_CASE("time model constructors") {
  const auto obj = testutil::values_objective({50.0, 150.0});
  CHECK(TimeModel::normalized(obj).scale == 1.0);
  CHECK(TimeModel::normalized(obj, 200.0).scale == 2.0);
  CHECK(TimeModel::normalized(obj).duration(100.0) == 100.0);
  CHECK(TimeModel::explicit_scale(2.5).scale == 2.5);
  CHECK_THROWS_AS(TimeModel::explicit_scale(0.0), DomainError);
  CHECK_THROWS_AS(TimeModel::explicit_scale(-1.0), DomainError);
  CHECK_THROWS_AS(TimeModel::normalized(obj, 0.0), DomainError);
}

TEST_CASE("standardizing transform uses the population moments") {
  const auto obj = testutil::values_objective({50.0, 150.0});
  const ValueTransform t = ValueTransform::standardizing(obj);
  CHECK(t.offset == 100.0);
  CHECK(t.scale == 50.0);
  CHECK(t.apply(150.0) == 1.0);
  // Degenerate table: scale falls back to one instead of dividing by zero.
  const ValueTransform flat = ValueTransform::standardizing(testutil::constant_objective(4, 9.0));
  CHECK(flat.scale == 1.0);
  CHECK(flat.apply(9.0) == 0.0);
}

TEST_CASE("trace CSV roundtrip recovers records and metadata") {
  const GridDomain grid = testutil::line_grid(8);
  const auto obj = testutil::values_objective({310.0, 420.0, 505.0, 480.0,
                                               390.0, 350.0, 520.0, 450.0});
  StsPolicy policy(line_prior(grid), 29, StsParams{16, 1.0, 100, 1e-6},
                   ValueTransform::standardizing(obj));
  RunSettings s = settings(600.0, 2, 29);
  s.policy_tag = "sts_beta1";
  const EvaluationTrace trace = run_asynchronous(policy, obj, NoiseModel{0.05},
                                                 TimeModel::normalized(obj), s);
  REQUIRE(!trace.records.empty());

  testutil::TempDir dir("trace");
  const std::string path = dir.file("t.csv");
  write_trace_csv(trace, path);
  const EvaluationTrace back = read_trace_csv(path);

  CHECK(back.mode == Mode::asynchronous);
  CHECK(back.m_workers == 2);
  CHECK(back.budget_rounds == 600.0);
  CHECK(back.seed == 29);
  CHECK(back.policy_tag == "sts_beta1");
  REQUIRE(back.records.size() == trace.records.size());
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const EvaluationRecord& a = trace.records[i];
    const EvaluationRecord& b = back.records[i];
    CHECK(a.ordinal == b.ordinal);
    CHECK(a.worker == b.worker);
    CHECK(a.point == b.point);
    // Six decimal places in the file.
    CHECK(std::abs(a.start - b.start) <= 5e-7);
    CHECK(std::abs(a.finish - b.finish) <= 5e-7);
    CHECK(std::abs(a.observed_y - b.observed_y) <= 5e-7);
    CHECK(std::abs(a.true_f - b.true_f) <= 5e-7);
  }
}

TEST_CASE("trace reader rejects malformed files") {
  testutil::TempDir dir("badtrace");
  const auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(dir.file(name));
    out << text;
    return dir.file(name);
  };
  CHECK_THROWS_WITH_AS(read_trace_csv(write("empty.csv", "# seed=1 mode=sequential\n")),
                       doctest::Contains("missing header"), FormatError);
  CHECK_THROWS_WITH_AS(read_trace_csv(write("head.csv", "ordinal,worker\n")),
                       doctest::Contains("unexpected header"), FormatError);
  CHECK_THROWS_WITH_AS(
      read_trace_csv(write("rec.csv",
                           "ordinal,worker,point_index,start,finish,observed_y,true_f\n"
                           "not,a,record,x,y,z,w\n")),
      doctest::Contains("bad record at line 2"), FormatError);
  CHECK_THROWS_WITH_AS(read_trace_csv(write("meta.csv", "# seed=abc\n")),
                       doctest::Contains("bad metadata"), FormatError);
  CHECK_THROWS_WITH_AS(read_trace_csv(dir.file("absent.csv")),
                       doctest::Contains("cannot open"), FormatError);
}

TEST_CASE("run settings and policy outputs are validated") {
  const auto obj = testutil::constant_objective(3, 100.0);
  ScriptedPolicy ok({0});
  CHECK_THROWS_AS(run_sequential(ok, obj, NoiseModel{0.0}, TimeModel::explicit_scale(1.0),
                                 settings(0.0, 1, 1)),
                  DomainError);
  CHECK_THROWS_AS(run_synchronous(ok, obj, NoiseModel{0.0}, TimeModel::explicit_scale(1.0),
                                  settings(100.0, 0, 1)),
                  DomainError);
  ScriptedPolicy out_of_range({7});
  CHECK_THROWS_AS(run_sequential(out_of_range, obj, NoiseModel{0.0},
                                 TimeModel::explicit_scale(1.0), settings(100.0, 1, 1)),
                  DomainError);
}

}  // TEST_SUITE
