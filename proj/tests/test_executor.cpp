#include <gtest/gtest.h>

#include "mimicry/mimicry.hpp"
#include "oracles.hpp"

using namespace mimicry;
using namespace mimicry::executor;
using adapters::Adapter;
using adapters::AdapterConfig;
using adapters::Role;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::kIo;
}

Adapter selector(fixtures::FixtureOptions opts = {}) {
  return Adapter(Role::kSelector, AdapterConfig{}, fixtures::make_fixture(Role::kSelector, std::move(opts)));
}

SceneState table() {
  SceneState s;
  s.objects.push_back({"apple_1", {0.3, 0.0, 0.1}, std::nullopt, 0.03, "apple", "fruit", false});
  s.objects.push_back({"cup_1", {0.45, 0.3, 0.1}, std::nullopt, 0.03, "cup", "cup", false});
  s.regions.push_back({"plate_1", {0.5, 0.1, 0.0}, {0.7, 0.3, 0.2}, "plate"});
  return s;
}

Trajectory line(std::vector<Point3D> w) {
  Trajectory t;
  t.object_id = "apple_1";
  t.waypoints = std::move(w);
  for (std::size_t i = 0; i < t.waypoints.size(); ++i) t.frame_index.push_back(static_cast<std::int64_t>(i));
  return t;
}

SubtaskSpec apple_to_plate() {
  return {"put the apple in the plate", "apple_1", "plate_1", "pick up apple_1 and place it in plate_1", {}};
}

}  // namespace

TEST(SelectGrasp, Rules) {
  const auto sel = selector();
  const GraspCandidate only{{0, 0, 0}, 0.0, 0.2, 4};
  EXPECT_EQ(select_grasp({only}, sel), only);
  const std::vector<GraspCandidate> tie{{{0, 0, 0}, 0, 0.3, 0}, {{0, 0, 0}, 0, 0.9, 1}, {{0, 0, 0}, 0, 0.9, 2}};
  EXPECT_EQ(select_grasp(tie, sel).id, 1);
  EXPECT_EQ(code_of([&] { select_grasp({}, sel); }), ErrorCode::kNoGrasp);
}

TEST(SelectGrasp, ChoiceAgreesWithExhaustiveComparison) {
  const auto sel = selector();
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<GraspCandidate> cands;
    for (int i = 0; i < 6; ++i) cands.push_back({{0, 0, 0}, 0, ((i * 7 + trial * 3) % 5) / 4.0, (i * 5 + trial) % 11});
    GraspCandidate best = cands[0];
    for (const auto& c : cands) {
      if (c.stability > best.stability || (c.stability == best.stability && c.id < best.id)) best = c;
    }
    EXPECT_EQ(select_grasp(cands, sel), best);
  }
}

TEST(SelectGrasp, ForeignChoiceRejected) {
  const Adapter liar(Role::kSelector, AdapterConfig{}, [](const json&, std::uint64_t) { return json{{"id", 99}}; });
  EXPECT_EQ(code_of([&] { select_grasp({{{0, 0, 0}, 0, 0.5, 1}}, liar); }), ErrorCode::kNoGrasp);
}

TEST(ProposeGrasps, FourCandidatesNearObject) {
  const auto s = table();
  const auto cands = propose_grasps(s.objects[0], selector());
  ASSERT_EQ(cands.size(), 4u);
  for (const auto& c : cands) EXPECT_LT(distance(c.pose, s.objects[0].position), 0.01);
}

TEST(Execute, FreeTransferFollowsInterpolation) {
  const auto s = table();
  const auto traj = line({{0.3, 0, 0.1}, {0.6, 0.2, 0.1}});
  const GraspCandidate grasp{{0.3, 0, 0.1}, 0, 0.9, 0};
  const auto r = execute_trajectory(s, traj, grasp);
  EXPECT_TRUE(r.log.collisions.empty());
  EXPECT_TRUE(r.log.completed);
  EXPECT_EQ(r.scene.find_object("apple_1")->position, (Point3D{0.6, 0.2, 0.1}));
  EXPECT_FALSE(r.scene.find_object("apple_1")->disturbed);
  EXPECT_FALSE(r.scene.held_object.has_value());
  const auto expect = oracle::interpolate(traj.waypoints, grasp.pose, 0.01);
  ASSERT_EQ(r.log.gripper.size(), expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_NEAR(distance(r.log.gripper[i], expect[i]), 0.0, 1e-12);
  EXPECT_TRUE(verify_subtask(r.scene, apple_to_plate()).pass);
}

TEST(Execute, OffsetGraspKeepsObjectOffset) {
  const auto s = table();
  const GraspCandidate grasp{{0.31, 0, 0.1}, 0, 0.9, 0};
  const auto r = execute_trajectory(s, line({{0.3, 0, 0.1}, {0.6, 0.2, 0.1}}), grasp);
  const Point3D end = r.scene.find_object("apple_1")->position;
  EXPECT_NEAR(distance(end, {0.6, 0.2, 0.1}), 0.0, 1e-12);
  EXPECT_NEAR(distance(r.log.gripper.back(), {0.61, 0.2, 0.1}), 0.0, 1e-12);
}

TEST(Execute, PassingNearObjectIsCollision) {
  const auto s = table();
  // The straight line passes within 1 cm of cup_1's surface.
  const auto traj = line({{0.3, 0, 0.1}, {0.45, 0.26, 0.1}, {0.6, 0.2, 0.1}});
  const auto r = execute_trajectory(s, traj, {{0.3, 0, 0.1}, 0, 0.9, 0});
  ASSERT_FALSE(r.log.collisions.empty());
  EXPECT_EQ(r.log.collisions[0].with, "cup_1");
  for (const auto& e : r.log.collisions) {
    const Point3D g = r.log.gripper[e.step];
    EXPECT_NEAR(e.distance, distance(g, {0.45, 0.3, 0.1}) - 0.03, 1e-12);
    EXPECT_LT(e.distance, 0.02);
  }
  EXPECT_TRUE(r.scene.find_object("cup_1")->disturbed);
  EXPECT_TRUE(r.scene.find_object("apple_1")->disturbed);
  EXPECT_EQ(verify_subtask(r.scene, apple_to_plate()), (Verdict{false, "disturbed"}));
}

TEST(Execute, ObstacleContactNamesPoint) {
  auto s = table();
  s.obstacles = {{0.9, 0.9, 0.9}, {0.45, 0.1, 0.1}};
  const auto r = execute_trajectory(s, line({{0.3, 0, 0.1}, {0.6, 0.2, 0.1}}), {{0.3, 0, 0.1}, 0, 0.9, 0});
  ASSERT_FALSE(r.log.collisions.empty());
  EXPECT_EQ(r.log.collisions[0].with, "obstacle[1]");
  EXPECT_TRUE(r.scene.find_object("apple_1")->disturbed);
  EXPECT_FALSE(r.scene.find_object("cup_1")->disturbed);
}

TEST(Execute, FarGraspFails) {
  EXPECT_EQ(code_of([] { execute_trajectory(table(), line({{0.3, 0, 0.1}, {0.6, 0.2, 0.1}}), {{0.4, 0, 0.1}, 0, 0.9, 0}); }),
            ErrorCode::kGraspFailure);
}

TEST(Verify, Outcomes) {
  auto s = table();
  s.objects[0].position = {0.6, 0.2, 0.05};
  EXPECT_EQ(verify_subtask(s, apple_to_plate(), 0.01), (Verdict{true, "ok"}));
  s.objects[0].position = {0.72, 0.2, 0.05};
  EXPECT_EQ(verify_subtask(s, apple_to_plate(), 0.01), (Verdict{false, "out-of-region"}));
  s.objects[0].position = {0.6, 0.2, 0.05};
  s.objects[0].disturbed = true;
  EXPECT_EQ(verify_subtask(s, apple_to_plate(), 0.01), (Verdict{false, "disturbed"}));
  auto ghost = apple_to_plate();
  ghost.obj = "ghost_1";
  EXPECT_EQ(code_of([&] { verify_subtask(s, ghost); }), ErrorCode::kGrounding);
}

TEST(Preconditions, OnAndHolding) {
  auto s = table();
  auto sub = apple_to_plate();
  sub.precond = {{"cup_1", Relation::kOn, "plate_1"}};
  EXPECT_FALSE(preconditions_hold(s, sub));
  s.objects[1].position = {0.6, 0.2, 0.05};
  EXPECT_TRUE(preconditions_hold(s, sub));
  sub.precond.push_back({"apple_1", Relation::kHolding, ""});
  EXPECT_FALSE(preconditions_hold(s, sub));
  s.held_object = "apple_1";
  EXPECT_TRUE(preconditions_hold(s, sub));
}

// --- trial loop --------------------------------------------------------------------

namespace {

/// Five apples on a line, two bowls behind them.
struct Fixture {
  TaskContext ctx;
  TaskPlan plan;
};

Fixture five_moves() {
  Fixture f;
  auto& s = f.ctx.scene;
  for (int i = 0; i < 5; ++i) {
    s.objects.push_back({"apple_" + std::to_string(i + 1), {0.1 + 0.12 * i, 0.0, 0.03}, std::nullopt, 0.03, "apple", "fruit", false});
  }
  s.regions.push_back({"bowl_1", {0.05, 0.3, 0.0}, {0.35, 0.5, 0.12}, "bowl"});
  s.regions.push_back({"bowl_2", {0.45, 0.3, 0.0}, {0.75, 0.5, 0.12}, "bowl"});
  f.ctx.extrinsics = CameraExtrinsics::look_at({-0.7, 0.2, 0.4}, {0.45, 0.2, 0.0});
  f.ctx.expected_subtasks = 5;
  for (int i = 0; i < 5; ++i) {
    const std::string obj = "apple_" + std::to_string(i + 1), loc = i < 3 ? "bowl_1" : "bowl_2";
    f.plan.subtasks.push_back({"put the apple in the bowl", obj, loc, "pick up " + obj + " and place it in " + loc, {}});
  }
  return f;
}

RunConfig small_steps() {
  RunConfig rc;
  rc.opt.w_coll = 0.1;
  rc.opt.step_size = 0.001;
  return rc;
}

}  // namespace

TEST(RunTask, PerfectFixturesSucceed) {
  const auto f = five_moves();
  const auto r = run_task(f.ctx, f.plan, fixtures::make_fixture_suite(0, {}), small_steps());
  EXPECT_EQ(r.S, 1);
  EXPECT_EQ(r.n, 5);
  EXPECT_EQ(r.replans_used, 0);
  EXPECT_EQ(r.collision_events, 0u);
  ASSERT_EQ(r.logs.size(), 5u);
  for (const auto& o : r.outcomes) EXPECT_EQ(o.attempts, 1);
  for (const auto& sub : f.plan.subtasks) EXPECT_TRUE(verify_subtask(r.final_scene, sub).pass);
}

TEST(RunTask, GeneratorFaultOnThirdSubtaskRecoversByReplan) {
  const auto f = five_moves();
  for (auto kind : {fixtures::FaultKind::kDropout, fixtures::FaultKind::kSchema}) {
    fixtures::FixtureOptions opts;
    opts.faults.push_back({Role::kGenerator, 2, 1, kind});
    RunConfig rc = small_steps();
    rc.replan_budget = 2;
    const auto r = run_task(f.ctx, f.plan, fixtures::make_fixture_suite(0, opts), rc);
    EXPECT_EQ(r.S, 1) << fixtures::to_string(kind);
    EXPECT_EQ(r.replans_used, 1);
    EXPECT_EQ(r.outcomes[2].attempts, 2);
  }
}

TEST(RunTask, FailureReasonsFollowTaxonomy) {
  const auto f = five_moves();
  RunConfig rc = small_steps();
  rc.replan_budget = 0;
  fixtures::FixtureOptions dropout;
  dropout.faults.push_back({Role::kGenerator, 1, 1, fixtures::FaultKind::kDropout});
  auto r = run_task(f.ctx, f.plan, fixtures::make_fixture_suite(0, dropout), rc);
  EXPECT_EQ(r.outcomes[1].reason, "predict");
  EXPECT_NE(r.outcomes[1].detail.find("hallucination"), std::string::npos);

  fixtures::FixtureOptions schema;
  schema.faults.push_back({Role::kTracker, 1, 1, fixtures::FaultKind::kSchema});
  r = run_task(f.ctx, f.plan, fixtures::make_fixture_suite(0, schema), rc);
  EXPECT_EQ(r.outcomes[1].reason, "predict");
  EXPECT_NE(r.outcomes[1].detail.find("schema-violation"), std::string::npos);
}

TEST(RunTask, NoReplanBudgetAndOneVerifyFailure) {
  const auto f = five_moves();
  fixtures::FixtureOptions opts;
  opts.faults.push_back({Role::kSelector, 3, 1, fixtures::FaultKind::kVerifyFail});
  RunConfig rc = small_steps();
  rc.replan_budget = 0;
  const auto r = run_task(f.ctx, f.plan, fixtures::make_fixture_suite(0, opts), rc);
  EXPECT_EQ(r.S, 0);
  EXPECT_EQ(r.n, 4);
  EXPECT_EQ(r.outcomes[3].reason, "verify");
  EXPECT_EQ(r.outcomes[3].detail, "scripted");
  EXPECT_EQ(r.replans_used, 0);
}

TEST(RunTask, StopOnFailurePadsRemainingSubtasks) {
  const auto f = five_moves();
  fixtures::FixtureOptions opts;
  opts.faults.push_back({Role::kSelector, 1, 1, fixtures::FaultKind::kVerifyFail});
  RunConfig rc = small_steps();
  rc.replan_budget = 0;
  rc.stop_on_failure = true;
  const auto r = run_task(f.ctx, f.plan, fixtures::make_fixture_suite(0, opts), rc);
  EXPECT_EQ(r.n, 1);
  ASSERT_EQ(r.outcomes.size(), 5u);
  EXPECT_EQ(r.outcomes[4].detail, "not attempted");
  EXPECT_EQ(r.logs.size(), 2u);
}

TEST(RunTask, TimeoutAbortsTrial) {
  const auto f = five_moves();
  fixtures::FixtureOptions opts;
  opts.faults.push_back({Role::kGenerator, 1, 1, fixtures::FaultKind::kTimeout});
  const auto r = run_task(f.ctx, f.plan, fixtures::make_fixture_suite(0, opts), small_steps());
  EXPECT_EQ(r.n, 1);
  EXPECT_EQ(r.replans_used, 0);
  for (std::size_t i = 1; i < 5; ++i) {
    EXPECT_EQ(r.outcomes[i].reason, "predict");
    EXPECT_NE(r.outcomes[i].detail.find("adapter-unavailable"), std::string::npos);
  }
}

TEST(RunTask, UnmetPreconditionIsPlanFailure) {
  auto f = five_moves();
  f.plan.subtasks[0].precond = {{"apple_1", Relation::kOn, "bowl_2"}};
  const auto r = run_task(f.ctx, f.plan, fixtures::make_fixture_suite(0, {}), small_steps());
  EXPECT_EQ(r.outcomes[0].reason, "plan");
  EXPECT_EQ(r.outcomes[0].attempts, 0);
  EXPECT_EQ(r.n, 4);
}

TEST(RunTask, ShortPlanPaddedLongPlanTruncated) {
  auto f = five_moves();
  TaskPlan shorter = f.plan;
  shorter.subtasks.resize(3);
  auto r = run_task(f.ctx, shorter, fixtures::make_fixture_suite(0, {}), small_steps());
  EXPECT_EQ(r.n, 3);
  EXPECT_EQ(r.outcomes.size(), 5u);
  EXPECT_EQ(r.outcomes[3].reason, "plan");
  f.ctx.expected_subtasks = 2;
  r = run_task(f.ctx, f.plan, fixtures::make_fixture_suite(0, {}), small_steps());
  EXPECT_EQ(r.outcomes.size(), 2u);
  EXPECT_EQ(r.S, 1);
}

TEST(RunTask, Ablations) {
  const auto f = five_moves();
  RunConfig rc = small_steps();
  for (auto p : {Predictor::kStraight, Predictor::kFinalOnly}) {
    rc.predictor = p;
    const auto r = run_task(f.ctx, f.plan, fixtures::make_fixture_suite(0, {}), rc);
    EXPECT_EQ(r.outcomes.size(), 5u);
    for (const auto& log : r.logs) EXPECT_GE(log.gripper.size(), 2u);
  }
}

TEST(RunTask, DistinctSimulatorInstances) {
  const auto f = five_moves();
  const auto suite = fixtures::make_fixture_suite(0, {});
  const auto a = run_task(f.ctx, f.plan, suite, small_steps());
  const auto b = run_task(f.ctx, f.plan, suite, small_steps());
  EXPECT_NE(a.simulator_instance, b.simulator_instance);
}
