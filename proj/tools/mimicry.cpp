// Command-line front end: run, batch, metrics, validate.
//
// Exit codes: 0 ok, 1 usage, 2 validation, 3 runtime.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mimicry/mimicry.hpp"

namespace {

using namespace mimicry;

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kValidation:
    case ErrorCode::kParse:
    case ErrorCode::kInvalidParameter:
    case ErrorCode::kSchemaViolation:
      return kExitValidation;
    default:
      return kExitRuntime;
  }
}

struct Common {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string mode;
  std::string ablate = "none";
  std::optional<double> rollout_jitter;
  std::optional<double> grasp_jitter;
  std::optional<int> replans;
  bool stop_on_failure = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--scenario", c.scenario, "Scenario JSON file")->required();
  app->add_option("--seed", c.seed, "Base seed");
  app->add_option("--mode", c.mode, "Planning mode override")
      ->check(CLI::IsMember({"mimic", "constrained", "skill-transfer", "text-only"}));
  app->add_option("--ablate", c.ablate, "Ablation")->check(CLI::IsMember({"none", "fdp", "path", "parsing"}));
  app->add_option("--rollout-jitter", c.rollout_jitter, "Rollout noise std-dev in meters");
  app->add_option("--grasp-jitter", c.grasp_jitter, "Grasp stability noise std-dev");
  app->add_option("--replans", c.replans, "Replan budget per subtask");
  app->add_flag("--stop-on-failure", c.stop_on_failure, "Abort a trial at its first failed subtask");
}

harness::Scenario load(const Common& c) {
  harness::Scenario sc = harness::load_scenario(c.scenario);
  if (c.rollout_jitter) sc.settings.fixtures.rollout_jitter = *c.rollout_jitter;
  if (c.grasp_jitter) sc.settings.fixtures.grasp_jitter = *c.grasp_jitter;
  if (c.replans) sc.settings.replan_budget = *c.replans;
  if (c.stop_on_failure) sc.settings.stop_on_failure = true;
  sc.settings.validate();
  return sc;
}

std::optional<PlanMode> mode_of(const Common& c) {
  if (c.mode.empty()) return std::nullopt;
  return parse_plan_mode(c.mode);
}

int cmd_run(const Common& c, const std::string& out) {
  const auto sc = load(c);
  const std::uint64_t seed = harness::trial_seed(c.seed, 0);
  const auto result = harness::run_trial(sc, seed, harness::parse_ablation(c.ablate), mode_of(c));
  std::cout << "scenario " << sc.name << " seed " << seed << "\n";
  for (std::size_t i = 0; i < result.outcomes.size(); ++i) {
    const auto& o = result.outcomes[i];
    std::cout << "  subtask " << i + 1 << ": " << (o.pass ? "pass" : "FAIL (" + o.reason + ")") << ", attempts "
              << o.attempts;
    if (!o.detail.empty()) std::cout << ", " << o.detail;
    std::cout << "\n";
  }
  std::cout << "S_i=" << result.S << " n_i=" << result.n << " replans=" << result.replans_used
            << " collisions=" << result.collision_events << "\n";
  if (!out.empty()) {
    json j{{"scenario", sc.name}, {"seed", seed}};
    j.update(executor::to_json(result, true));
    write_text_file(out, j.dump(2) + "\n");
    std::cout << "wrote " << out << "\n";
  }
  return 0;
}

int cmd_batch(const Common& c, int trials, int jobs, const std::string& out, const std::string& format) {
  const auto sc = load(c);
  harness::BatchOptions opts;
  opts.trials = trials;
  opts.seed = c.seed;
  opts.ablation = harness::parse_ablation(c.ablate);
  opts.mode = mode_of(c);
  opts.jobs = jobs;
  const auto records = harness::run_batch(sc, opts);
  const auto metrics = harness::compute_metrics(records, sc.expected_subtasks);
  std::vector<harness::TrialRow> rows;
  for (const auto& r : records) rows.push_back(harness::to_row(r));
  const json report = harness::build_report(sc, opts, records, metrics);
  for (const auto& p : harness::emit_report(report, rows, out, format)) std::cout << "wrote " << p << "\n";
  std::printf("%s N=%d M=%d TSR=%.4f SSR=%.4f collisions=%s\n", sc.name.c_str(), metrics.N, metrics.M, metrics.TSR,
              metrics.SSR, report.at("collision_events").dump().c_str());
  return 0;
}

int cmd_metrics(const std::string& csv, std::optional<int> subtasks, const std::string& format) {
  int m = 0;
  if (subtasks) {
    m = *subtasks;
  } else {
    const auto report = std::filesystem::path(csv).parent_path() / "report.json";
    if (!std::filesystem::exists(report)) {
      throw Error(ErrorCode::kValidation, "--subtasks is required when no report.json sits next to " + csv);
    }
    m = read_json_file(report.string()).at("metrics").at("M").get<int>();
  }
  const auto rows = harness::parse_trials_csv(read_text_file(csv), csv);
  const auto metrics = harness::compute_metrics(rows, m);
  if (format == "csv") {
    std::printf("N,M,TSR,SSR\n%d,%d,%.6f,%.6f\n", metrics.N, metrics.M, metrics.TSR, metrics.SSR);
  } else {
    std::cout << harness::to_json(metrics).dump(2) << "\n";
  }
  return 0;
}

int cmd_validate(const std::string& path) {
  const auto sc = harness::load_scenario(path);
  auto diags = harness::validate_scenario(sc);
  if (sc.demonstration) {
    const auto kf = keyframes::extract_keyframes(sc.demonstration->stream, sc.settings.keyframes);
    std::size_t labelled = 0;
    for (auto k : kf) labelled += sc.demonstration->label_at(k).empty() ? 0 : 1;
    std::cout << sc.name << ": " << kf.size() << " keyframes, " << labelled << " labelled\n";
  }
  for (const auto& d : diags) std::cout << "  [" << d.rule << "] " << d.subject << ": " << d.message << "\n";
  if (!diags.empty()) return kExitValidation;
  std::cout << sc.name << ": ok (M=" << sc.expected_subtasks << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Demonstration-to-execution pipeline harness"};
  app.require_subcommand(1);

  Common run_c, batch_c;
  std::string run_out, batch_out = "out", format = "both", metrics_in, metrics_format = "json", validate_path;
  int trials = 20, jobs = 1;
  std::optional<int> subtasks;

  auto* run = app.add_subcommand("run", "Run a single trial with a verbose log");
  add_common(run, run_c);
  run->add_option("--out", run_out, "Write the trial (with execution logs) to this JSON file");

  auto* batch = app.add_subcommand("batch", "Run N trials and report metrics");
  add_common(batch, batch_c);
  batch->add_option("--trials", trials, "Number of trials")->check(CLI::PositiveNumber);
  batch->add_option("--jobs", jobs, "Parallel trials")->check(CLI::PositiveNumber);
  batch->add_option("--out", batch_out, "Output directory");
  batch->add_option("--format", format, "Report files")->check(CLI::IsMember({"json", "csv", "both"}));

  auto* metrics = app.add_subcommand("metrics", "Recompute metrics from trials.csv");
  metrics->add_option("trials_csv", metrics_in, "trials.csv path")->required();
  metrics->add_option("--subtasks", subtasks, "Subtasks per trial (M)");
  metrics->add_option("--format", metrics_format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  auto* validate = app.add_subcommand("validate", "Lint a scenario file");
  validate->add_option("--scenario", validate_path, "Scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_c, run_out);
    if (*batch) return cmd_batch(batch_c, trials, jobs, batch_out, format);
    if (*metrics) return cmd_metrics(metrics_in, subtasks, metrics_format);
    if (*validate) return cmd_validate(validate_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
