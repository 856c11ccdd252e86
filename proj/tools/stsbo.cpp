// Command-line front end: flag parsing only, all behavior lives in the
// library's cmd_* bodies.

#include "stsbo/cli.hpp"

#include <CLI11.hpp>

int main(int argc, char** argv) {
  CLI::App app{"Satisficing Thompson-sampling Bayesian optimization simulator"};
  app.require_subcommand(1);

  stsbo::RunArgs run_args;
  CLI::App* run = app.add_subcommand(
      "run", "Run the configured sweep; write traces, regret curves, aggregates, summary.json");
  run->add_option("-c,--config", run_args.config_path, "Config file (key = value lines)");
  run->add_option("--set", run_args.overrides, "Inline override, key=value (repeatable)");
  run->add_option("-j,--jobs", run_args.jobs, "Concurrent runs")->capture_default_str();
  run->add_flag("--ba-dump", run_args.ba_dump,
                "Also dump each sts run's first compression (distortion + iterates)");

  stsbo::SynthArgs synth_args;
  CLI::App* synth =
      app.add_subcommand("synth", "Write the synthetic objective table as CSV");
  synth->add_option("-o,--out", synth_args.out_path, "Output CSV path")->capture_default_str();
  synth->add_option("--t-f", synth_args.t_f, "Total charge time, seconds")->capture_default_str();
  synth->add_option("--i3-max", synth_args.i3_max, "Feasibility cap on the stage-3 C-rate");
  synth->add_option("--axis-lo", synth_args.axis_lo, "Axis start, C")->capture_default_str();
  synth->add_option("--axis-hi", synth_args.axis_hi, "Axis end, C")->capture_default_str();
  synth->add_option("--axis-step", synth_args.axis_step, "Axis step, C")->capture_default_str();

  stsbo::CheckArgs check_args;
  CLI::App* check = app.add_subcommand(
      "check", "Verify the information-theoretic identities on exact finite environments");
  check->add_option("--envs", check_args.envs, "Randomized environments")->capture_default_str();
  check->add_option("--seed", check_args.seed, "Environment seed")->capture_default_str();
  check->add_flag("--perturb", check_args.perturb,
                  "Negative control: corrupt one conditional entry by 1e-3");

  stsbo::ReportArgs report_args;
  CLI::App* report = app.add_subcommand(
      "report", "Recompute curves, aggregates, and summary.json from existing trace CSVs");
  report->add_option("-c,--config", report_args.config_path, "Config file (key = value lines)");
  report->add_option("--set", report_args.overrides, "Inline override, key=value (repeatable)");
  report->add_option("-d,--dir", report_args.dir, "Trace directory (default: the config's out_dir)");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return stsbo::cmd_run(run_args);
  if (synth->parsed()) return stsbo::cmd_synth(synth_args);
  if (check->parsed()) return stsbo::cmd_check(check_args);
  return stsbo::cmd_report(report_args);
}
