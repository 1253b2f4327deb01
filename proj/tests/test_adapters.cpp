#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "mimicry/mimicry.hpp"

using namespace mimicry;
using namespace mimicry::adapters;

namespace {

template <typename F>
Error error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "expected an error";
  return Error(ErrorCode::kIo, "none");
}

const json kGraspRequest{{"task", "grasp"},
                         {"object", "cup_1"},
                         {"candidates", json::array({json{{"id", 0}, {"pose", {0.1, 0.0, 0.0}}, {"yaw", 0.0}, {"stability", 0.4}},
                                                     json{{"id", 1}, {"pose", {0.0, 0.1, 0.0}}, {"yaw", 0.0}, {"stability", 0.8}}})}};

const json kProposeRequest{{"task", "propose"},
                           {"object", json{{"id", "cup_1"}, {"position", {0.3, 0.0, 0.03}}, {"radius", 0.03}}}};

/// Local HTTP stub that replies from a scripted handler.
class Stub {
 public:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&, int call)>;

  explicit Stub(Handler h) : handler_(std::move(h)) {
    server_.Post(R"(/v1/(\w+))", [this](const httplib::Request& req, httplib::Response& res) {
      int call = 0;
      {
        std::lock_guard lock(mu_);
        call = ++calls_;
        last_auth_ = req.get_header_value("Authorization");
        last_path_ = req.path;
      }
      handler_(req, res, call);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~Stub() {
    server_.stop();
    thread_.join();
  }

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int calls() const {
    std::lock_guard lock(mu_);
    return calls_;
  }
  std::string last_auth() const {
    std::lock_guard lock(mu_);
    return last_auth_;
  }
  std::string last_path() const {
    std::lock_guard lock(mu_);
    return last_path_;
  }

 private:
  Handler handler_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  mutable std::mutex mu_;
  int calls_ = 0;
  std::string last_auth_, last_path_;
};

AdapterConfig remote(const std::string& endpoint, int retries = 0, double timeout = 2.0) {
  AdapterConfig c;
  c.kind = AdapterKind::kRemote;
  c.endpoint = endpoint;
  c.retries = retries;
  c.timeout = timeout;
  return c;
}

}  // namespace

TEST(Keys, DependOnSeedRoleAndBytes) {
  const json a{{"x", 1}}, b{{"x", 2}};
  EXPECT_EQ(fixture_key(7, Role::kGenerator, a), fixture_key(7, Role::kGenerator, a));
  EXPECT_NE(fixture_key(7, Role::kGenerator, a), fixture_key(8, Role::kGenerator, a));
  EXPECT_NE(fixture_key(7, Role::kGenerator, a), fixture_key(7, Role::kTracker, a));
  EXPECT_NE(fixture_key(7, Role::kGenerator, a), fixture_key(7, Role::kGenerator, b));
}

TEST(KeyedRng, DeterministicAndBounded) {
  KeyedRng r1(42), r2(42);
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = r1.uniform();
    EXPECT_EQ(u, r2.uniform());
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double z = r1.normal();
    r2.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / 20000, 0.0, 0.05);
  EXPECT_NEAR(sq / 20000, 1.0, 0.05);
}

TEST(FixtureAdapter, DeterministicPerSeed) {
  fixtures::FixtureOptions opts;
  opts.grasp_jitter = 0.1;
  const auto s1 = fixtures::make_fixture_suite(3, opts);
  const auto s2 = fixtures::make_fixture_suite(3, opts);
  const auto s3 = fixtures::make_fixture_suite(4, opts);
  const auto p1 = s1.selector.call(kProposeRequest).payload;
  EXPECT_EQ(p1, s2.selector.call(kProposeRequest).payload);
  EXPECT_EQ(p1, s1.selector.call(kProposeRequest).payload);
  EXPECT_NE(p1, s3.selector.call(kProposeRequest).payload);
  EXPECT_EQ(p1.at("candidates").size(), 4u);
}

TEST(FixtureAdapter, UnconfiguredIsUnavailable) {
  EXPECT_EQ(error_of([] { Adapter().call(kGraspRequest); }).code(), ErrorCode::kAdapterUnavailable);
  EXPECT_EQ(error_of([] { call_adapter(Role::kSelector, kGraspRequest, {}); }).code(), ErrorCode::kAdapterUnavailable);
}

TEST(Schema, RequestChecks) {
  EXPECT_TRUE(check_request(Role::kSelector, kGraspRequest).ok());
  EXPECT_FALSE(check_request(Role::kSelector, json{{"task", "dance"}}).ok());
  EXPECT_FALSE(check_request(Role::kSelector, json::array()).ok());
  const auto c = check_request(Role::kGenerator, json{{"guide", "g"}, {"obj", "a"}, {"loc", "b"}, {"frames", 1}});
  EXPECT_FALSE(c.ok());
  bool saw_frames = false;
  for (const auto& e : c.errors()) saw_frames |= e.find("generator.request.frames") != std::string::npos;
  EXPECT_TRUE(saw_frames);
  EXPECT_FALSE(check_request(Role::kPlanner, json{{"stage", "guess"}}).ok());
}

TEST(Schema, ResponseChecks) {
  const json abstract{{"stage", "abstract"}, {"keyframes", json::array()}};
  EXPECT_TRUE(check_response(Role::kPlanner, abstract,
                             json{{"steps", {{{"action", "move"}, {"object", "a"}, {"destination", "b"}, {"keyframes", {1}}}}}})
                  .ok());
  EXPECT_FALSE(check_response(Role::kPlanner, abstract, json{{"steps", json::array()}, {"extra", 1}}).ok());
  EXPECT_FALSE(check_response(Role::kPlanner, abstract,
                              json{{"steps", {{{"action", "move"}, {"object", "a"}, {"destination", "b"}, {"keyframes", json::array()}}}}})
                   .ok());
  EXPECT_TRUE(check_response(Role::kSelector, kGraspRequest, json{{"id", 1}}).ok());
  EXPECT_FALSE(check_response(Role::kSelector, kGraspRequest, json{{"id", "1"}}).ok());
  const json tracker_req{{"frames", json::array({json::object(), json::object()})}};
  EXPECT_FALSE(check_response(Role::kTracker, tracker_req, json{{"track", {{1, 2}}}}).ok());
  EXPECT_TRUE(check_response(Role::kTracker, tracker_req, json{{"track", {{1, 2}, nullptr}}}).ok());
}

TEST(Schema, FixtureResponseViolationCarriesBody) {
  const Adapter bad(Role::kSelector, {}, [](const json&, std::uint64_t) { return json{{"choice", 1}}; });
  const auto e = error_of([&] { bad.call(kGraspRequest); });
  EXPECT_EQ(e.code(), ErrorCode::kSchemaViolation);
  EXPECT_EQ(e.payload(), "{\"choice\":1}");
}

TEST(Schema, InvalidRequestRejectedBeforeCall) {
  int called = 0;
  const Adapter a(Role::kSelector, {}, [&](const json&, std::uint64_t) {
    ++called;
    return json{{"id", 1}};
  });
  EXPECT_EQ(error_of([&] { a.call(json{{"task", "grasp"}}); }).code(), ErrorCode::kSchemaViolation);
  EXPECT_EQ(called, 0);
}

TEST(Config, Validation) {
  AdapterConfig c;
  c.retries = 6;
  EXPECT_EQ(error_of([&] { c.validate(); }).code(), ErrorCode::kInvalidParameter);
  c.retries = 5;
  c.kind = AdapterKind::kRemote;
  EXPECT_EQ(error_of([&] { c.validate(); }).code(), ErrorCode::kInvalidParameter);
}

TEST(Config, EnvironmentOverrides) {
  ::setenv("MIMICRY_SELECTOR_ENDPOINT", "http://127.0.0.1:9", 1);
  ::setenv("MIMICRY_ADAPTER_TOKEN", "tok", 1);
  const auto sel = apply_env_overrides(Role::kSelector, {});
  const auto gen = apply_env_overrides(Role::kGenerator, {});
  AdapterConfig explicit_token;
  explicit_token.bearer_token = "mine";
  const auto kept = apply_env_overrides(Role::kGenerator, explicit_token);
  ::unsetenv("MIMICRY_SELECTOR_ENDPOINT");
  ::unsetenv("MIMICRY_ADAPTER_TOKEN");
  EXPECT_EQ(sel.kind, AdapterKind::kRemote);
  EXPECT_EQ(sel.endpoint, "http://127.0.0.1:9");
  EXPECT_EQ(sel.bearer_token, "tok");
  EXPECT_EQ(gen.kind, AdapterKind::kFixture);
  EXPECT_EQ(kept.bearer_token, "mine");
}

TEST(Concurrency, InFlightLimitHolds) {
  std::atomic<int> now{0}, peak{0};
  AdapterConfig cfg;
  cfg.max_in_flight = 2;
  const Adapter a(Role::kSelector, cfg, [&](const json&, std::uint64_t) {
    const int n = ++now;
    int p = peak.load();
    while (n > p && !peak.compare_exchange_weak(p, n)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    --now;
    return json{{"id", 1}};
  });
  std::vector<std::thread> pool;
  for (int i = 0; i < 8; ++i) pool.emplace_back([&] { a.call(kGraspRequest); });
  for (auto& t : pool) t.join();
  EXPECT_LE(peak.load(), 2);
  EXPECT_GE(peak.load(), 1);
}

TEST(Remote, RetriesOnServerErrors) {
  Stub stub([](const httplib::Request&, httplib::Response& res, int call) {
    if (call < 3) {
      res.status = 503;
      res.set_content("busy", "text/plain");
      return;
    }
    res.set_content(R"({"id":1})", "application/json");
  });
  const auto r = call_adapter(Role::kSelector, kGraspRequest, remote(stub.endpoint(), 3));
  EXPECT_EQ(r.attempt_count, 3);
  EXPECT_EQ(r.payload, (json{{"id", 1}}));
  EXPECT_EQ(stub.calls(), 3);
  EXPECT_EQ(stub.last_path(), "/v1/selector");
  EXPECT_GE(r.latency, 0.0);
}

TEST(Remote, ExhaustedRetriesReportStatus) {
  Stub stub([](const httplib::Request&, httplib::Response& res, int) {
    res.status = 503;
    res.set_content("busy", "text/plain");
  });
  const auto e = error_of([&] { call_adapter(Role::kSelector, kGraspRequest, remote(stub.endpoint(), 1)); });
  EXPECT_EQ(e.code(), ErrorCode::kRemoteError);
  EXPECT_EQ(e.payload(), "503 busy");
  EXPECT_EQ(stub.calls(), 2);
}

TEST(Remote, ClientErrorNotRetried) {
  Stub stub([](const httplib::Request&, httplib::Response& res, int) {
    res.status = 404;
    res.set_content("nope", "text/plain");
  });
  const auto e = error_of([&] { call_adapter(Role::kSelector, kGraspRequest, remote(stub.endpoint(), 3)); });
  EXPECT_EQ(e.code(), ErrorCode::kRemoteError);
  EXPECT_EQ(e.payload(), "404 nope");
  EXPECT_EQ(stub.calls(), 1);
}

TEST(Remote, SchemaViolationCarriesRawBody) {
  Stub stub([](const httplib::Request& req, httplib::Response& res, int) {
    res.set_content(req.body.find("grasp") != std::string::npos ? R"({"pick":1})" : "not json", "application/json");
  });
  auto e = error_of([&] { call_adapter(Role::kSelector, kGraspRequest, remote(stub.endpoint())); });
  EXPECT_EQ(e.code(), ErrorCode::kSchemaViolation);
  EXPECT_EQ(e.payload(), R"({"pick":1})");
  e = error_of([&] { call_adapter(Role::kSelector, kProposeRequest, remote(stub.endpoint())); });
  EXPECT_EQ(e.code(), ErrorCode::kSchemaViolation);
  EXPECT_EQ(e.payload(), "not json");
}

TEST(Remote, BearerTokenSent) {
  Stub stub([](const httplib::Request&, httplib::Response& res, int) { res.set_content(R"({"id":0})", "application/json"); });
  auto cfg = remote(stub.endpoint());
  cfg.bearer_token = "secret";
  call_adapter(Role::kSelector, kGraspRequest, cfg);
  EXPECT_EQ(stub.last_auth(), "Bearer secret");
  call_adapter(Role::kSelector, kGraspRequest, remote(stub.endpoint()));
  EXPECT_EQ(stub.last_auth(), "");
}

TEST(Remote, UnreachableIsUnavailable) {
  std::string endpoint;
  {
    Stub stub([](const httplib::Request&, httplib::Response&, int) {});
    endpoint = stub.endpoint();
  }
  const auto e = error_of([&] { call_adapter(Role::kSelector, kGraspRequest, remote(endpoint, 2, 0.5)); });
  EXPECT_EQ(e.code(), ErrorCode::kAdapterUnavailable);
  EXPECT_NE(std::string(e.what()).find("3 attempt(s)"), std::string::npos);
}

TEST(Remote, SlowServerTimesOut) {
  Stub stub([](const httplib::Request&, httplib::Response& res, int) {
    std::this_thread::sleep_for(std::chrono::milliseconds(600));
    res.set_content(R"({"id":0})", "application/json");
  });
  const auto e = error_of([&] { call_adapter(Role::kSelector, kGraspRequest, remote(stub.endpoint(), 0, 0.15)); });
  EXPECT_EQ(e.code(), ErrorCode::kAdapterUnavailable);
}
