#include <gtest/gtest.h>

#include "mimicry/mimicry.hpp"

using namespace mimicry;
using namespace mimicry::planning;
using adapters::Adapter;
using adapters::AdapterConfig;
using adapters::Role;

namespace {

Adapter fixture_planner(fixtures::FixtureOptions opts = {}) {
  return Adapter(Role::kPlanner, AdapterConfig{}, fixtures::make_fixture(Role::kPlanner, std::move(opts)));
}

Adapter scripted_planner(json body) {
  return Adapter(Role::kPlanner, AdapterConfig{}, [body](const json&, std::uint64_t) { return body; });
}

SceneObject object(const std::string& id, Point3D p, const std::string& cat, const std::string& group) {
  return {id, p, std::nullopt, 0.03, cat, group, false};
}

SceneState kitchen() {
  SceneState s;
  s.objects = {object("apple_1", {0.1, 0, 0.03}, "apple", "fruit"), object("banana_1", {0.2, 0, 0.03}, "banana", "fruit"),
               object("box_1", {0.3, 0, 0.03}, "box", "box")};
  s.regions = {{"plate_1", {0.0, 0.3, 0.0}, {0.2, 0.5, 0.1}, "plate"},
               {"basket_1", {0.4, 0.3, 0.0}, {0.6, 0.5, 0.1}, "basket"}};
  return s;
}

SubtaskSpec move(const std::string& obj, const std::string& loc, std::vector<Predicate> pre = {}) {
  return {"put " + obj + " in " + loc, obj, loc, "pick up " + obj + " and place it in " + loc, std::move(pre)};
}

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

}  // namespace

TEST(AbstractDemonstration, GraspReleasePairBecomesOneStep) {
  const auto plan = abstract_demonstration({{10, "grasp apple"}, {40, "release over plate"}}, fixture_planner());
  ASSERT_EQ(plan.steps.size(), 1u);
  EXPECT_EQ(plan.steps[0], (BaselineStep{"move", "apple", "plate", {10, 40}}));
}

TEST(AbstractDemonstration, LoneGraspHasUnknownDestination) {
  const auto plan = abstract_demonstration({{5, "grasp apple"}}, fixture_planner());
  ASSERT_EQ(plan.steps.size(), 1u);
  EXPECT_EQ(plan.steps[0].destination, "unknown");
}

TEST(AbstractDemonstration, FourPairsFourSteps) {
  std::vector<KeyframeDescriptor> kfs;
  const char* nouns[] = {"apple", "banana", "orange", "box"};
  for (int i = 0; i < 4; ++i) {
    kfs.push_back({i * 100, std::string("grasp ") + nouns[i]});
    kfs.push_back({i * 100 + 50, "release plate"});
  }
  const auto plan = abstract_demonstration(kfs, fixture_planner());
  ASSERT_EQ(plan.steps.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(plan.steps[i].object, nouns[i]);
}

TEST(AbstractDemonstration, RepeatedAndEmptyLabelsCollapse) {
  const auto plan = abstract_demonstration(
      {{1, "grasp apple"}, {2, "grasp apple"}, {3, ""}, {4, "release plate"}, {5, "release plate"}}, fixture_planner());
  ASSERT_EQ(plan.steps.size(), 1u);
  EXPECT_EQ(plan.steps[0].keyframes, (std::vector<std::int64_t>{1, 4}));
}

TEST(AbstractDemonstration, Errors) {
  EXPECT_EQ(code_of([] { abstract_demonstration({}, fixture_planner()); }), ErrorCode::kInsufficientData);
  EXPECT_EQ(code_of([] { abstract_demonstration({{1, "grasp apple"}}, scripted_planner(json{{"steps", "nope"}})); }),
            ErrorCode::kSchemaViolation);
  fixtures::FixtureOptions timeout;
  timeout.faults.push_back({Role::kPlanner, std::nullopt, 1, fixtures::FaultKind::kTimeout});
  EXPECT_EQ(code_of([&] { abstract_demonstration({{1, "grasp apple"}}, fixture_planner(timeout)); }),
            ErrorCode::kAdapterUnavailable);
}

TEST(AbstractDemonstration, SchemaViolationCarriesRawBody) {
  try {
    abstract_demonstration({{1, "grasp apple"}}, scripted_planner(json{{"steps", json::array({json{{"action", "move"}}})}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaViolation);
    EXPECT_EQ(e.payload(), R"({"steps":[{"action":"move"}]})");
  }
}

TEST(UnifyPlan, MimicGroundsByCategory) {
  SceneState s;
  s.objects = {object("apple_1", {0, 0, 0.03}, "apple", "fruit")};
  s.regions = {{"plate_1", {0.3, 0, 0}, {0.5, 0.2, 0.1}, "plate"}};
  PlanningRequest req;
  req.baseline = BaselinePlan{{{"move", "apple", "plate", {1, 2}}}};
  req.scene_summary = summarize_scene(s);
  const auto plan = unify_plan(req, fixture_planner());
  ASSERT_EQ(plan.subtasks.size(), 1u);
  EXPECT_EQ(plan.subtasks[0].obj, "apple_1");
  EXPECT_EQ(plan.subtasks[0].loc, "plate_1");
  EXPECT_NE(plan.subtasks[0].guide.find("apple_1"), std::string::npos);
  EXPECT_NE(plan.subtasks[0].guide.find("plate_1"), std::string::npos);
  EXPECT_EQ(plan.provenance, PlanMode::kMimic);
}

TEST(UnifyPlan, TiesGoToSmallestUnusedId) {
  SceneState s = kitchen();
  s.objects.insert(s.objects.begin(), object("apple_2", {0.15, 0, 0.03}, "apple", "fruit"));
  PlanningRequest req;
  req.baseline = BaselinePlan{{{"move", "apple", "plate", {1}}, {"move", "apple", "plate", {2}}}};
  req.scene_summary = summarize_scene(s);
  const auto plan = unify_plan(req, fixture_planner());
  ASSERT_EQ(plan.subtasks.size(), 2u);
  EXPECT_EQ(plan.subtasks[0].obj, "apple_1");
  EXPECT_EQ(plan.subtasks[1].obj, "apple_2");
}

TEST(UnifyPlan, ConstrainedRedirectsNamedObjects) {
  PlanningRequest req;
  req.mode = PlanMode::kConstrained;
  req.baseline = BaselinePlan{{{"move", "apple", "plate", {1}}, {"move", "box", "plate", {2}}}};
  req.language = "put the box in the basket";
  req.scene_summary = summarize_scene(kitchen());
  const auto plan = unify_plan(req, fixture_planner());
  ASSERT_EQ(plan.subtasks.size(), 2u);
  EXPECT_EQ(plan.subtasks[0].loc, "plate_1");
  EXPECT_EQ(plan.subtasks[1].obj, "box_1");
  EXPECT_EQ(plan.subtasks[1].loc, "basket_1");
}

TEST(UnifyPlan, SkillTransferSortsNovelCategoriesIntoDistinctContainers) {
  SceneState s;
  s.objects = {object("hammer_1", {0.1, 0, 0.03}, "hammer", "tool"), object("pen_1", {0.2, 0, 0.03}, "pen", "stationery"),
               object("wrench_1", {0.3, 0, 0.03}, "wrench", "tool"), object("ruler_1", {0.4, 0, 0.03}, "ruler", "stationery")};
  s.regions = kitchen().regions;
  PlanningRequest req;
  req.mode = PlanMode::kSkillTransfer;
  req.baseline = BaselinePlan{{{"move", "apple", "plate", {1}}, {"move", "box", "basket", {2}}}};
  req.scene_summary = summarize_scene(s);
  const auto plan = unify_plan(req, fixture_planner());
  ASSERT_EQ(plan.subtasks.size(), 4u);
  std::map<std::string, std::string> dest;
  for (const auto& st : plan.subtasks) dest[st.obj] = st.loc;
  EXPECT_EQ(dest["hammer_1"], dest["wrench_1"]);
  EXPECT_EQ(dest["pen_1"], dest["ruler_1"]);
  EXPECT_NE(dest["hammer_1"], dest["pen_1"]);
}

TEST(UnifyPlan, TextOnlyFollowsClauses) {
  PlanningRequest req;
  req.mode = PlanMode::kTextOnly;
  req.language = "put the fruit in the plate and then the box in the basket";
  req.scene_summary = summarize_scene(kitchen());
  const auto plan = unify_plan(req, fixture_planner());
  ASSERT_EQ(plan.subtasks.size(), 3u);
  EXPECT_EQ(plan.subtasks[0].obj, "apple_1");
  EXPECT_EQ(plan.subtasks[1].obj, "banana_1");
  EXPECT_EQ(plan.subtasks[2].obj, "box_1");
  EXPECT_EQ(plan.subtasks[2].loc, "basket_1");
}

TEST(UnifyPlan, RepeatedObjectGetsPreconditionOnPreviousDestination) {
  PlanningRequest req;
  req.baseline = BaselinePlan{{{"move", "apple", "plate", {1}}, {"move", "apple_1", "basket", {2}}}};
  req.scene_summary = summarize_scene(kitchen());
  const auto plan = unify_plan(req, fixture_planner());
  ASSERT_EQ(plan.subtasks.size(), 2u);
  EXPECT_TRUE(plan.subtasks[0].precond.empty());
  ASSERT_EQ(plan.subtasks[1].precond.size(), 1u);
  EXPECT_EQ(plan.subtasks[1].precond[0], (Predicate{"apple_1", Relation::kOn, "plate_1"}));
}

TEST(UnifyPlan, ModeContractsAreValidated) {
  PlanningRequest req;
  req.baseline = BaselinePlan{{{"move", "apple", "plate", {1}}}};
  req.language = "anything";
  req.scene_summary = summarize_scene(kitchen());
  EXPECT_EQ(code_of([&] { unify_plan(req, fixture_planner()); }), ErrorCode::kValidation);
  req.mode = PlanMode::kTextOnly;
  EXPECT_EQ(code_of([&] { unify_plan(req, fixture_planner()); }), ErrorCode::kValidation);
  req.mode = PlanMode::kConstrained;
  req.language.reset();
  EXPECT_EQ(code_of([&] { unify_plan(req, fixture_planner()); }), ErrorCode::kValidation);
}

TEST(UnifyPlan, UnknownIdentifiersAreGroundingErrors) {
  PlanningRequest req;
  req.baseline = BaselinePlan{{{"move", "ghost", "plate", {1}}}};
  req.scene_summary = summarize_scene(kitchen());
  try {
    unify_plan(req, fixture_planner());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGrounding);
    EXPECT_EQ(e.payload(), "ghost");
  }
}

TEST(UnifyPlan, OutOfOrderPreconditionIsPlanCycle) {
  const json body{{"subtasks",
                   {to_json(move("apple_1", "basket_1", {{"apple_1", Relation::kOn, "plate_1"}})),
                    to_json(move("apple_1", "plate_1"))}}};
  PlanningRequest req;
  req.mode = PlanMode::kSkillTransfer;
  req.baseline = BaselinePlan{{{"move", "apple", "plate", {1}}}};
  req.scene_summary = summarize_scene(kitchen());
  EXPECT_EQ(code_of([&] { unify_plan(req, scripted_planner(body)); }), ErrorCode::kPlanCycle);
}

TEST(UnifyPlan, GuideIsCompletedWithIdentifiers) {
  json sub = to_json(move("apple_1", "plate_1"));
  sub["guide"] = "move the fruit";
  PlanningRequest req;
  req.baseline = BaselinePlan{{{"move", "apple", "plate", {1}}}};
  req.scene_summary = summarize_scene(kitchen());
  const auto plan = unify_plan(req, scripted_planner(json{{"subtasks", {sub}}}));
  EXPECT_EQ(plan.subtasks[0].guide, "move the fruit (move apple_1 to plate_1)");
}

TEST(UnifyPlan, FixtureIsDeterministicPerSeed) {
  PlanningRequest req;
  req.baseline = BaselinePlan{{{"move", "apple", "plate", {1}}}};
  req.scene_summary = summarize_scene(kitchen());
  AdapterConfig cfg;
  cfg.seed = 7;
  const Adapter a(Role::kPlanner, cfg, fixtures::make_fixture(Role::kPlanner, {}));
  EXPECT_EQ(a.call(to_json(req)).payload, a.call(to_json(req)).payload);
}

TEST(ValidatePlan, Diagnostics) {
  const auto scene = kitchen();
  TaskPlan ok;
  ok.subtasks = {move("apple_1", "plate_1"), move("banana_1", "plate_1"), move("box_1", "basket_1"),
                 move("apple_1", "basket_1", {{"apple_1", Relation::kOn, "plate_1"}}), move("banana_1", "basket_1")};
  EXPECT_TRUE(validate_plan(ok, scene).empty());

  TaskPlan ghost;
  ghost.subtasks = {move("ghost_1", "plate_1")};
  const auto d = validate_plan(ghost, scene);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].subject, "ghost_1");

  TaskPlan order;
  order.subtasks = {move("banana_1", "plate_1"), move("apple_1", "basket_1", {{"apple_1", Relation::kOn, "plate_1"}}),
                    move("apple_1", "plate_1")};
  const auto o = validate_plan(order, scene);
  ASSERT_EQ(o.size(), 1u);
  EXPECT_EQ(o[0].rule, "precondition-order");
  EXPECT_NE(o[0].message.find("subtask 3"), std::string::npos);

  TaskPlan never;
  never.subtasks = {move("apple_1", "basket_1", {{"apple_1", Relation::kHolding, ""}})};
  ASSERT_EQ(validate_plan(never, scene).size(), 1u);
  EXPECT_EQ(validate_plan(never, scene)[0].rule, "precondition-unsatisfiable");
}
