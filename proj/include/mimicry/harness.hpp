#pragma once

// Scenario files, seeded batches of trials, success-rate metrics and reports.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mimicry/adapters.hpp"
#include "mimicry/error.hpp"
#include "mimicry/executor.hpp"
#include "mimicry/fixtures.hpp"
#include "mimicry/keyframes.hpp"
#include "mimicry/model.hpp"
#include "mimicry/planning.hpp"
#include "mimicry/serialization.hpp"

namespace mimicry::harness {

struct DemoLabel {
  std::int64_t first = 0;
  std::int64_t last = 0;
  std::string label;
};

struct Demonstration {
  std::string landmarks_path;  // as resolved at load time
  keyframes::LandmarkStream stream;
  std::vector<DemoLabel> labels;

  /// Label of the interval containing `frame`, or "".
  std::string label_at(std::int64_t frame) const {
    for (const auto& l : labels) {
      if (frame >= l.first && frame <= l.last) return l.label;
    }
    return {};
  }
};

/// Everything a trial needs besides the seed and the ablation switches.
struct Settings {
  keyframes::KeyframeParams keyframes;
  dynamics::RdpParams rdp;
  trajopt::OptParams optimizer;
  executor::ExecParams executor;
  int frames = 16;
  int replan_budget = 2;
  double verify_tolerance = 0.01;
  bool stop_on_failure = false;
  fixtures::FixtureOptions fixtures;

  void validate() const {
    keyframes.validate();
    rdp.validate();
    optimizer.validate();
    executor.validate();
    fixtures.validate();
    require(frames >= 2, ErrorCode::kValidation, "frames must be >= 2");
    require(replan_budget >= 0, ErrorCode::kValidation, "replan_budget must be >= 0");
    require(verify_tolerance >= 0.0, ErrorCode::kValidation, "verify_tolerance must be >= 0");
  }
};

inline json to_json(const Settings& s) {
  return json{{"keyframes", json{{"epsilon", s.keyframes.epsilon},
                                 {"half_window", s.keyframes.half_window},
                                 {"min_interval", s.keyframes.min_interval},
                                 {"min_confidence", s.keyframes.min_confidence}}},
              {"rdp", json{{"epsilon_px", s.rdp.epsilon_px}}},
              {"optimizer", trajopt::to_json(s.optimizer)},
              {"executor", json{{"clearance", s.executor.clearance},
                                {"grasp_radius", s.executor.grasp_radius},
                                {"step", s.executor.step}}},
              {"frames", s.frames},
              {"replan_budget", s.replan_budget},
              {"verify_tolerance", s.verify_tolerance},
              {"stop_on_failure", s.stop_on_failure},
              {"fixtures", fixtures::to_json(s.fixtures)}};
}

/// Applies the keys present in `j` on top of `s`.
inline Settings settings_from_json(const json& j, Settings s = {}) {
  using mimicry::detail::get_or;
  const std::string ctx = "config";
  if (j.is_null()) return s;
  if (!j.is_object()) throw Error(ErrorCode::kParse, "config: expected an object");
  if (j.contains("keyframes")) {
    const json& k = j.at("keyframes");
    s.keyframes.epsilon = get_or<double>(k, "epsilon", s.keyframes.epsilon, ctx + ".keyframes");
    s.keyframes.half_window = get_or<int>(k, "half_window", s.keyframes.half_window, ctx + ".keyframes");
    s.keyframes.min_interval = get_or<std::int64_t>(k, "min_interval", s.keyframes.min_interval, ctx + ".keyframes");
    s.keyframes.min_confidence = get_or<double>(k, "min_confidence", s.keyframes.min_confidence, ctx + ".keyframes");
  }
  if (j.contains("rdp")) s.rdp.epsilon_px = get_or<double>(j.at("rdp"), "epsilon_px", s.rdp.epsilon_px, ctx + ".rdp");
  if (j.contains("optimizer")) s.optimizer = trajopt::opt_params_from_json(j.at("optimizer"), s.optimizer);
  if (j.contains("executor")) {
    const json& e = j.at("executor");
    s.executor.clearance = get_or<double>(e, "clearance", s.executor.clearance, ctx + ".executor");
    s.executor.grasp_radius = get_or<double>(e, "grasp_radius", s.executor.grasp_radius, ctx + ".executor");
    s.executor.step = get_or<double>(e, "step", s.executor.step, ctx + ".executor");
  }
  s.frames = get_or<int>(j, "frames", s.frames, ctx);
  s.replan_budget = get_or<int>(j, "replan_budget", s.replan_budget, ctx);
  s.verify_tolerance = get_or<double>(j, "verify_tolerance", s.verify_tolerance, ctx);
  s.stop_on_failure = get_or<bool>(j, "stop_on_failure", s.stop_on_failure, ctx);
  if (j.contains("fixtures")) {
    const json& f = j.at("fixtures");
    s.fixtures.lift_height = get_or<double>(f, "lift_height", s.fixtures.lift_height, ctx + ".fixtures");
    s.fixtures.rollout_jitter = get_or<double>(f, "rollout_jitter", s.fixtures.rollout_jitter, ctx + ".fixtures");
    s.fixtures.grasp_jitter = get_or<double>(f, "grasp_jitter", s.fixtures.grasp_jitter, ctx + ".fixtures");
    s.fixtures.context_limit = get_or<int>(f, "context_limit", s.fixtures.context_limit, ctx + ".fixtures");
    s.fixtures.depth_holes = get_or<bool>(f, "depth_holes", s.fixtures.depth_holes, ctx + ".fixtures");
    if (f.contains("faults")) {
      s.fixtures.faults.clear();
      for (std::size_t i = 0; i < f.at("faults").size(); ++i) {
        s.fixtures.faults.push_back(fixtures::fault_from_json(f.at("faults")[i], ctx + ".fixtures.faults[" + std::to_string(i) + "]"));
      }
    }
  }
  s.validate();
  return s;
}

struct Scenario {
  std::string name;
  std::string path;
  PlanMode mode = PlanMode::kMimic;
  std::optional<std::string> language;          // constrained / skill-transfer command
  std::optional<std::string> text_instruction;  // used in text-only mode
  int expected_subtasks = 0;
  SceneState scene;
  std::optional<Demonstration> demonstration;
  CameraIntrinsics intrinsics;
  CameraExtrinsics extrinsics;
  std::map<std::string, std::vector<executor::GraspCandidate>> grasp_offsets;
  double placement_jitter = 0.0;  // std-dev in meters of per-trial xy placement noise
  Settings settings;
};

inline Scenario scenario_from_json(const json& j, const std::filesystem::path& base_dir, const std::string& source) {
  using mimicry::detail::field;
  using mimicry::detail::get;
  using mimicry::detail::get_or;
  Scenario s;
  s.path = source;
  s.name = get<std::string>(j, "name", source);
  s.mode = parse_plan_mode(get_or<std::string>(j, "mode", "mimic", source));
  if (j.contains("language") && !j.at("language").is_null()) s.language = get<std::string>(j, "language", source);
  if (j.contains("text_instruction") && !j.at("text_instruction").is_null()) {
    s.text_instruction = get<std::string>(j, "text_instruction", source);
  }
  s.expected_subtasks = get<int>(j, "expected_subtasks", source);
  require(s.expected_subtasks >= 1, ErrorCode::kValidation, source + ": expected_subtasks must be >= 1");
  s.scene = scene_from_json(field(j, "scene", source), source + ".scene");

  const json& camera = field(j, "camera", source);
  s.intrinsics = intrinsics_from_json(field(camera, "intrinsics", source + ".camera"), source + ".camera.intrinsics");
  s.extrinsics = extrinsics_from_json(field(camera, "extrinsics", source + ".camera"), source + ".camera.extrinsics");

  if (j.contains("demonstration") && !j.at("demonstration").is_null()) {
    const json& d = j.at("demonstration");
    const std::string ctx = source + ".demonstration";
    Demonstration demo;
    std::filesystem::path lm = get<std::string>(d, "landmarks", ctx);
    if (lm.is_relative()) lm = base_dir / lm;
    if (!std::filesystem::exists(lm)) throw Error(ErrorCode::kIo, ctx + ": referenced file not found: " + lm.string(), lm.string());
    demo.landmarks_path = lm.string();
    demo.stream = keyframes::load_landmarks(demo.landmarks_path);
    if (d.contains("labels")) {
      for (std::size_t i = 0; i < d.at("labels").size(); ++i) {
        const json& l = d.at("labels")[i];
        const std::string lctx = ctx + ".labels[" + std::to_string(i) + "]";
        const auto frames = get<std::vector<std::int64_t>>(l, "frames", lctx);
        require(frames.size() == 2 && frames[0] <= frames[1], ErrorCode::kParse, lctx + ".frames: expected [first, last]");
        demo.labels.push_back({frames[0], frames[1], get<std::string>(l, "label", lctx)});
      }
    }
    s.demonstration = std::move(demo);
  }
  if (j.contains("grasp_candidates")) {
    const json& g = j.at("grasp_candidates");
    for (auto it = g.begin(); it != g.end(); ++it) {
      auto& list = s.grasp_offsets[it.key()];
      for (const auto& c : it.value()) list.push_back(executor::grasp_from_json(c, source + ".grasp_candidates." + it.key()));
    }
  }
  s.placement_jitter = get_or<double>(j, "placement_jitter", 0.0, source);
  require(s.placement_jitter >= 0.0, ErrorCode::kValidation, source + ": placement_jitter must be >= 0");
  s.settings = settings_from_json(j.value("config", json::object()));
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  const json j = read_json_file(path);
  return scenario_from_json(j, std::filesystem::path(path).parent_path(), path);
}

/// Lint findings for a scenario (empty when it is runnable).
inline std::vector<Diagnostic> validate_scenario(const Scenario& s) {
  std::vector<Diagnostic> out = validate_scene(s.scene);
  if (!s.intrinsics.valid()) out.push_back({"intrinsics", s.name, "camera intrinsics are invalid"});
  for (const auto& [id, list] : s.grasp_offsets) {
    if (s.scene.find_object(id) == nullptr) out.push_back({"unknown-object", id, "grasp candidates for unknown object '" + id + "'"});
    if (list.empty()) out.push_back({"no-grasp", id, "empty grasp candidate list for '" + id + "'"});
  }
  const bool needs_demo = s.mode != PlanMode::kTextOnly;
  if (needs_demo && !s.demonstration) out.push_back({"demonstration", s.name, "mode requires a demonstration"});
  if (s.mode == PlanMode::kConstrained && !s.language) out.push_back({"language", s.name, "constrained mode requires language"});
  if (s.mode == PlanMode::kTextOnly && !s.text_instruction && !s.language) {
    out.push_back({"language", s.name, "text-only mode requires text_instruction"});
  }
  for (const auto& o : s.scene.objects) {
    const Point3D pc = s.extrinsics.to_camera(o.position);
    if (!(pc.z > 0.0) || !s.intrinsics.contains({s.intrinsics.fx * pc.x / pc.z + s.intrinsics.cx,
                                                  s.intrinsics.fy * pc.y / pc.z + s.intrinsics.cy})) {
      out.push_back({"camera-view", o.id, "object '" + o.id + "' is outside the camera image"});
    }
  }
  return out;
}

// --- batches ---------------------------------------------------------------------

enum class Ablation { kNone, kFdp, kPath, kParsing };

inline std::string_view to_string(Ablation a) {
  switch (a) {
    case Ablation::kNone: return "none";
    case Ablation::kFdp: return "fdp";
    case Ablation::kPath: return "path";
    case Ablation::kParsing: return "parsing";
  }
  return "none";
}

inline Ablation parse_ablation(std::string_view s) {
  if (s == "none" || s.empty()) return Ablation::kNone;
  if (s == "fdp") return Ablation::kFdp;
  if (s == "path") return Ablation::kPath;
  if (s == "parsing") return Ablation::kParsing;
  throw Error(ErrorCode::kParse, "unknown ablation '" + std::string(s) + "' (expected fdp, path or parsing)");
}

struct BatchOptions {
  int trials = 20;
  std::uint64_t seed = 0;
  Ablation ablation = Ablation::kNone;
  std::optional<PlanMode> mode;  // overrides the scenario's mode
  int jobs = 1;

  void validate() const {
    require(trials >= 1, ErrorCode::kValidation, "trials must be >= 1");
    require(jobs >= 1, ErrorCode::kValidation, "jobs must be >= 1");
  }
};

inline std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  return adapters::mix_key(seed, static_cast<std::uint64_t>(trial));
}

/// Descriptors handed to the planner: one per keyframe, or one per frame when
/// parsing is ablated.
inline std::vector<planning::KeyframeDescriptor> demonstration_descriptors(const Demonstration& demo,
                                                                          const keyframes::KeyframeParams& params,
                                                                          bool every_frame) {
  std::vector<planning::KeyframeDescriptor> out;
  if (every_frame) {
    for (const auto& f : demo.stream.frames) out.push_back({f.frame_index, demo.label_at(f.frame_index)});
  } else {
    for (auto k : keyframes::extract_keyframes(demo.stream, params)) out.push_back({k, demo.label_at(k)});
  }
  return out;
}

/// Adapter suite for one trial: fixtures, or a remote endpoint where
/// MIMICRY_<ROLE>_ENDPOINT is set.
inline adapters::AdapterSuite trial_suite(std::uint64_t seed, const fixtures::FixtureOptions& opts) {
  opts.validate();
  auto make = [&](adapters::Role r) {
    adapters::AdapterConfig cfg;
    cfg.seed = seed;
    cfg = adapters::apply_env_overrides(r, cfg);
    return adapters::Adapter(r, cfg, fixtures::make_fixture(r, opts));
  };
  using adapters::Role;
  return {make(Role::kPlanner), make(Role::kGenerator), make(Role::kTracker), make(Role::kDepth), make(Role::kSelector)};
}

inline executor::TaskContext trial_context(const Scenario& sc, std::uint64_t seed) {
  executor::TaskContext ctx;
  ctx.scene = sc.scene;
  ctx.intrinsics = sc.intrinsics;
  ctx.extrinsics = sc.extrinsics;
  ctx.grasp_offsets = sc.grasp_offsets;
  ctx.expected_subtasks = sc.expected_subtasks;
  if (sc.placement_jitter > 0.0) {
    adapters::KeyedRng rng(adapters::mix_key(seed, adapters::fnv1a("placement")));
    for (auto& o : ctx.scene.objects) {
      o.position.x += sc.placement_jitter * rng.normal();
      o.position.y += sc.placement_jitter * rng.normal();
    }
  }
  return ctx;
}

/// Runs one trial end to end. Planning failures become a trial with every
/// subtask failed for reason "plan".
inline executor::TrialResult run_trial(const Scenario& sc, std::uint64_t seed, Ablation ablation,
                                       std::optional<PlanMode> mode_override = std::nullopt) {
  const Settings& st = sc.settings;
  const auto suite = trial_suite(seed, st.fixtures);
  executor::TaskContext ctx = trial_context(sc, seed);

  executor::RunConfig rc;
  rc.exec = st.executor;
  rc.opt = st.optimizer;
  rc.rdp = st.rdp;
  rc.frames = st.frames;
  rc.replan_budget = st.replan_budget;
  rc.verify_tolerance = st.verify_tolerance;
  rc.stop_on_failure = st.stop_on_failure;
  rc.predictor = ablation == Ablation::kFdp    ? executor::Predictor::kStraight
                 : ablation == Ablation::kPath ? executor::Predictor::kFinalOnly
                                               : executor::Predictor::kFdp;

  planning::PlanningRequest req;
  req.mode = mode_override.value_or(sc.mode);
  req.scene_summary = planning::summarize_scene(ctx.scene);
  TaskPlan plan;
  std::optional<std::string> plan_error;
  try {
    if (req.mode == PlanMode::kTextOnly) {
      req.language = sc.text_instruction ? sc.text_instruction : sc.language;
    } else {
      require(sc.demonstration.has_value(), ErrorCode::kValidation, "mode requires a demonstration");
      const auto descriptors = demonstration_descriptors(*sc.demonstration, st.keyframes, ablation == Ablation::kParsing);
      req.baseline = planning::abstract_demonstration(descriptors, suite.planner);
      if (req.mode != PlanMode::kMimic) req.language = sc.language;
    }
    plan = planning::unify_plan(req, suite.planner);
    ctx.replan_request = req;
  } catch (const Error& e) {
    plan_error = e.what();
  }

  executor::TrialResult result = executor::run_task(ctx, plan, suite, rc);
  if (plan_error) {
    for (auto& o : result.outcomes) o.detail = *plan_error;
  }
  return result;
}

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  executor::TrialResult result;
};

/// N independent trials; trial i is seeded by (seed, i). Results are in trial
/// order regardless of `jobs`.
inline std::vector<TrialRecord> run_batch(const Scenario& sc, const BatchOptions& opts) {
  opts.validate();
  std::vector<TrialRecord> out(static_cast<std::size_t>(opts.trials));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < opts.trials; i = next++) {
      const std::uint64_t seed = trial_seed(opts.seed, i);
      out[static_cast<std::size_t>(i)] = {i, seed, run_trial(sc, seed, opts.ablation, opts.mode)};
    }
  };
  const int jobs = std::min(opts.jobs, opts.trials);
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  return out;
}

// --- metrics -----------------------------------------------------------------------

/// Per-trial row as stored in trials.csv.
struct TrialRow {
  int trial = 0;
  std::uint64_t seed = 0;
  int S = 0;
  int n = 0;
  int replans = 0;
  std::vector<std::string> failure_modes;

  friend bool operator==(const TrialRow&, const TrialRow&) = default;
};

inline TrialRow to_row(const TrialRecord& r) {
  TrialRow row{r.trial, r.seed, r.result.S, r.result.n, r.result.replans_used, {}};
  for (const auto& o : r.result.outcomes) {
    if (!o.pass) row.failure_modes.push_back(o.reason);
  }
  return row;
}

struct MetricsReport {
  int N = 0;
  int M = 0;
  long long sum_S = 0;
  long long sum_n = 0;
  double TSR = 0.0;
  double SSR = 0.0;
  std::vector<int> S;
  std::vector<int> n;
  std::map<std::string, int> failure_modes;
};

inline MetricsReport compute_metrics(const std::vector<TrialRow>& rows, int M) {
  if (rows.empty()) throw Error(ErrorCode::kInsufficientData, "metrics need at least one trial");
  require(M >= 1, ErrorCode::kValidation, "M must be >= 1");
  MetricsReport r;
  r.N = static_cast<int>(rows.size());
  r.M = M;
  for (const auto& row : rows) {
    require(row.n >= 0 && row.n <= M, ErrorCode::kValidation, "trial " + std::to_string(row.trial) + ": n_i outside [0, M]");
    require(row.S == (row.n == M ? 1 : 0), ErrorCode::kValidation,
            "trial " + std::to_string(row.trial) + ": S_i inconsistent with n_i");
    r.sum_S += row.S;
    r.sum_n += row.n;
    r.S.push_back(row.S);
    r.n.push_back(row.n);
    for (const auto& f : row.failure_modes) ++r.failure_modes[f];
  }
  r.TSR = static_cast<double>(r.sum_S) / static_cast<double>(r.N);
  r.SSR = static_cast<double>(r.sum_n) / (static_cast<double>(r.N) * static_cast<double>(M));
  require(r.TSR <= r.SSR, ErrorCode::kValidation, "TSR exceeds SSR");
  return r;
}

inline MetricsReport compute_metrics(const std::vector<TrialRecord>& records, int M) {
  std::vector<TrialRow> rows;
  for (const auto& r : records) rows.push_back(to_row(r));
  return compute_metrics(rows, M);
}

// --- reports -------------------------------------------------------------------------

inline std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? std::string(1, sep) : "") + parts[i];
  return out;
}

inline std::string trials_csv(const std::vector<TrialRow>& rows) {
  std::string out = "trial,seed,S_i,n_i,replans,failure_modes\n";
  for (const auto& r : rows) {
    out += std::to_string(r.trial) + "," + std::to_string(r.seed) + "," + std::to_string(r.S) + "," + std::to_string(r.n) +
           "," + std::to_string(r.replans) + "," + join(r.failure_modes, ';') + "\n";
  }
  return out;
}

inline std::vector<TrialRow> parse_trials_csv(const std::string& text, const std::string& source = "trials.csv") {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == "trial,seed,S_i,n_i,replans,failure_modes", ErrorCode::kParse, source + ":1: unexpected header");
  std::vector<TrialRow> rows;
  for (int lineno = 2; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    const std::string where = source + ":" + std::to_string(lineno);
    require(cells.size() == 6, ErrorCode::kParse, where + ": expected 6 columns");
    TrialRow r;
    try {
      std::size_t used = 0;
      r.trial = std::stoi(cells[0], &used);
      require(used == cells[0].size(), ErrorCode::kParse, where + ": bad trial");
      r.seed = std::stoull(cells[1], &used);
      require(used == cells[1].size(), ErrorCode::kParse, where + ": bad seed");
      r.S = std::stoi(cells[2]);
      r.n = std::stoi(cells[3]);
      r.replans = std::stoi(cells[4]);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kParse, where + ": malformed number");
    }
    std::istringstream fs(cells[5]);
    for (std::string f; std::getline(fs, f, ';');) {
      if (!f.empty()) r.failure_modes.push_back(f);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

inline json to_json(const MetricsReport& m) {
  json modes = json::object();
  for (const auto& [k, v] : m.failure_modes) modes[k] = v;
  return json{{"N", m.N},        {"M", m.M},        {"TSR", m.TSR}, {"SSR", m.SSR}, {"sum_S", m.sum_S},
              {"sum_n", m.sum_n}, {"S_i", m.S},      {"n_i", m.n},   {"failure_modes", modes}};
}

/// report.json contents. Only run-independent data is included so that reruns
/// with the same inputs are byte-identical.
inline json build_report(const Scenario& sc, const BatchOptions& opts, const std::vector<TrialRecord>& records,
                         const MetricsReport& metrics) {
  std::set<std::uint64_t> instances;
  std::size_t collisions = 0;
  int replans = 0;
  json trials = json::array();
  for (const auto& r : records) {
    instances.insert(r.result.simulator_instance);
    collisions += r.result.collision_events;
    replans += r.result.replans_used;
    json row{{"trial", r.trial}, {"seed", r.seed}};
    row.update(executor::to_json(r.result));
    trials.push_back(row);
  }
  json config{{"scenario", sc.name},
              {"scenario_path", sc.path},
              {"mode", std::string(to_string(opts.mode.value_or(sc.mode)))},
              {"ablation", std::string(to_string(opts.ablation))},
              {"trials", opts.trials},
              {"seed", opts.seed},
              {"placement_jitter", sc.placement_jitter},
              {"settings", to_json(sc.settings)}};
  return json{{"metrics", to_json(metrics)},
              {"collision_events", collisions},
              {"replans", replans},
              {"simulator_instances", instances.size()},
              {"config", config},
              {"trials", trials}};
}

/// Writes report.json and/or trials.csv into `dir` (created if needed).
inline std::vector<std::string> emit_report(const json& report, const std::vector<TrialRow>& rows,
                                            const std::string& dir, const std::string& format = "both") {
  require(format == "json" || format == "csv" || format == "both", ErrorCode::kValidation,
          "format must be json, csv or both");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create output directory " + dir + ": " + ec.message(), dir);
  std::vector<std::string> written;
  if (format != "csv") {
    const std::string p = (std::filesystem::path(dir) / "report.json").string();
    write_text_file(p, report.dump(2) + "\n");
    written.push_back(p);
  }
  if (format != "json") {
    const std::string p = (std::filesystem::path(dir) / "trials.csv").string();
    write_text_file(p, trials_csv(rows));
    written.push_back(p);
  }
  return written;
}

}  // namespace mimicry::harness
