#pragma once

// Uniform contract for the external model roles. Every role exchanges JSON
// request/response bodies; a fixture implementation is a pure function of
// (request, key) and a remote implementation is a JSON-over-HTTP POST to
// `<endpoint>/v1/<role>`. Both directions are schema-checked here, so callers
// only ever see payloads that match the published schema.

#include <chrono>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <memory>
#include <numbers>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "httplib.h"
#include "mimicry/error.hpp"
#include "mimicry/serialization.hpp"

namespace mimicry::adapters {

enum class Role { kPlanner, kGenerator, kTracker, kDepth, kSelector };

inline constexpr Role kAllRoles[] = {Role::kPlanner, Role::kGenerator, Role::kTracker, Role::kDepth,
                                     Role::kSelector};

inline std::string_view to_string(Role r) {
  switch (r) {
    case Role::kPlanner: return "planner";
    case Role::kGenerator: return "generator";
    case Role::kTracker: return "tracker";
    case Role::kDepth: return "depth";
    case Role::kSelector: return "selector";
  }
  return "planner";
}

inline Role parse_role(std::string_view s) {
  for (Role r : kAllRoles)
    if (to_string(r) == s) return r;
  throw Error(ErrorCode::kParse, "unknown adapter role '" + std::string(s) + "'");
}

// --- keyed randomness --------------------------------------------------------

/// SplitMix64 step; used both to mix keys and as the fixture PRNG.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

inline std::uint64_t mix_key(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (b + 0x9E3779B97F4A7C15ull + (a << 6) + (a >> 2));
  return splitmix64(s);
}

/// Key for one fixture call: depends only on (seed, role, request bytes).
inline std::uint64_t fixture_key(std::uint64_t seed, Role role, const json& request) {
  return mix_key(mix_key(seed, fnv1a(to_string(role))), fnv1a(request.dump()));
}

/// Small portable PRNG. Distributions are implemented here so that streams are
/// identical across standard libraries.
class KeyedRng {
 public:
  explicit KeyedRng(std::uint64_t key) : state_(key) {}

  std::uint64_t next() { return splitmix64(state_); }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  KeyedRng split(std::uint64_t stream) { return KeyedRng(mix_key(next(), stream)); }

 private:
  std::uint64_t state_;
};

// --- schema checking --------------------------------------------------------

class SchemaCheck {
 public:
  enum class Kind { kObject, kArray, kString, kNonEmptyString, kNumber, kInteger, kBool, kPoint3, kPoint2 };

  bool ok() const { return errors_.empty(); }
  const std::vector<std::string>& errors() const { return errors_; }
  std::string summary() const {
    std::string s;
    for (const auto& e : errors_) s += (s.empty() ? "" : "; ") + e;
    return s;
  }
  void fail(const std::string& path, const std::string& what) { errors_.push_back(path + ": " + what); }

  bool is(const json& j, Kind kind, const std::string& path) {
    bool good = false;
    switch (kind) {
      case Kind::kObject: good = j.is_object(); break;
      case Kind::kArray: good = j.is_array(); break;
      case Kind::kString: good = j.is_string(); break;
      case Kind::kNonEmptyString: good = j.is_string() && !j.get_ref<const std::string&>().empty(); break;
      case Kind::kNumber: good = j.is_number() && std::isfinite(j.get<double>()); break;
      case Kind::kInteger: good = j.is_number_integer(); break;
      case Kind::kBool: good = j.is_boolean(); break;
      case Kind::kPoint3:
      case Kind::kPoint2: {
        const std::size_t n = kind == Kind::kPoint3 ? 3 : 2;
        good = j.is_array() && j.size() == n;
        for (std::size_t i = 0; good && i < n; ++i) good = j[i].is_number() && std::isfinite(j[i].get<double>());
        break;
      }
    }
    if (!good) fail(path, "wrong type or empty");
    return good;
  }

  /// Required member of an object; returns nullptr (and records) when absent or mistyped.
  const json* member(const json& obj, const char* key, Kind kind, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) {
      fail(path + "." + key, "missing");
      return nullptr;
    }
    const json& v = obj.at(key);
    return is(v, kind, path + "." + key) ? &v : nullptr;
  }

  /// Optional member: null and absent are both accepted.
  const json* optional(const json& obj, const char* key, Kind kind, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key) || obj.at(key).is_null()) return nullptr;
    const json& v = obj.at(key);
    return is(v, kind, path + "." + key) ? &v : nullptr;
  }

  void only_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& path) {
    if (!obj.is_object()) return;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool found = false;
      for (auto a : allowed) found = found || it.key() == a;
      if (!found) fail(path + "." + it.key(), "unexpected key");
    }
  }

 private:
  std::vector<std::string> errors_;
};

using K = SchemaCheck::Kind;

namespace schema_detail {

inline void check_intrinsics(SchemaCheck& c, const json& j, const std::string& path) {
  if (!c.is(j, K::kObject, path)) return;
  for (const char* key : {"fx", "fy", "cx", "cy"}) c.member(j, key, K::kNumber, path);
  c.member(j, "width", K::kInteger, path);
  c.member(j, "height", K::kInteger, path);
}

inline void check_generator_frames(SchemaCheck& c, const json& frames, const std::string& path) {
  if (!c.is(frames, K::kArray, path)) return;
  if (frames.size() < 2) c.fail(path, "need at least 2 frames");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (const json* objs = c.member(frames[i], "objects", K::kObject, p)) {
      for (auto it = objs->begin(); it != objs->end(); ++it) c.is(it.value(), K::kPoint3, p + ".objects." + it.key());
    }
  }
}

inline void check_grasp_candidates(SchemaCheck& c, const json& arr, const std::string& path) {
  if (!c.is(arr, K::kArray, path)) return;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    c.member(arr[i], "id", K::kInteger, p);
    c.member(arr[i], "pose", K::kPoint3, p);
    c.member(arr[i], "yaw", K::kNumber, p);
    if (const json* s = c.member(arr[i], "stability", K::kNumber, p)) {
      const double v = s->get<double>();
      if (v < 0.0 || v > 1.0) c.fail(p + ".stability", "outside [0, 1]");
    }
  }
}

inline void check_box(SchemaCheck& c, const json& j, const std::string& path) {
  if (!c.is(j, K::kObject, path)) return;
  c.member(j, "id", K::kNonEmptyString, path);
  c.member(j, "min", K::kPoint3, path);
  c.member(j, "max", K::kPoint3, path);
}

}  // namespace schema_detail

/// Violations of the role's request schema (empty when valid).
inline SchemaCheck check_request(Role role, const json& req) {
  using namespace schema_detail;
  SchemaCheck c;
  const std::string root = std::string(to_string(role)) + ".request";
  if (!c.is(req, K::kObject, root)) return c;
  c.optional(req, "subtask", K::kInteger, root);
  c.optional(req, "attempt", K::kInteger, root);
  switch (role) {
    case Role::kPlanner: {
      const json* stage = c.member(req, "stage", K::kString, root);
      if (!stage) break;
      if (*stage == "abstract") {
        if (const json* kfs = c.member(req, "keyframes", K::kArray, root)) {
          for (std::size_t i = 0; i < kfs->size(); ++i) {
            const std::string p = root + ".keyframes[" + std::to_string(i) + "]";
            c.member((*kfs)[i], "frame", K::kInteger, p);
            c.member((*kfs)[i], "label", K::kString, p);
          }
        }
      } else if (*stage == "unify") {
        if (const json* mode = c.member(req, "mode", K::kString, root)) {
          try {
            parse_plan_mode(mode->get<std::string>());
          } catch (const Error&) {
            c.fail(root + ".mode", "unknown mode");
          }
        }
        if (const json* base = c.optional(req, "baseline", K::kObject, root)) {
          if (const json* steps = c.member(*base, "steps", K::kArray, root + ".baseline")) {
            for (std::size_t i = 0; i < steps->size(); ++i) {
              const std::string p = root + ".baseline.steps[" + std::to_string(i) + "]";
              for (const char* key : {"action", "object", "destination"}) c.member((*steps)[i], key, K::kNonEmptyString, p);
              c.member((*steps)[i], "keyframes", K::kArray, p);
            }
          }
        }
        c.optional(req, "language", K::kString, root);
        if (const json* summary = c.member(req, "scene_summary", K::kArray, root)) {
          for (std::size_t i = 0; i < summary->size(); ++i) {
            const std::string p = root + ".scene_summary[" + std::to_string(i) + "]";
            c.member((*summary)[i], "id", K::kNonEmptyString, p);
            if (const json* kind = c.member((*summary)[i], "kind", K::kString, p)) {
              if (*kind != "object" && *kind != "region") c.fail(p + ".kind", "must be object or region");
            }
            c.member((*summary)[i], "category", K::kString, p);
            c.optional((*summary)[i], "group", K::kString, p);
            c.optional((*summary)[i], "region", K::kString, p);
          }
        }
      } else {
        c.fail(root + ".stage", "must be abstract or unify");
      }
      break;
    }
    case Role::kGenerator: {
      c.member(req, "guide", K::kNonEmptyString, root);
      c.member(req, "obj", K::kNonEmptyString, root);
      c.member(req, "loc", K::kNonEmptyString, root);
      if (const json* q = c.member(req, "frames", K::kInteger, root)) {
        if (q->get<std::int64_t>() < 2) c.fail(root + ".frames", "must be >= 2");
      }
      if (const json* obs = c.member(req, "observation", K::kObject, root)) {
        if (const json* objs = c.member(*obs, "objects", K::kArray, root + ".observation")) {
          for (std::size_t i = 0; i < objs->size(); ++i) {
            const std::string p = root + ".observation.objects[" + std::to_string(i) + "]";
            c.member((*objs)[i], "id", K::kNonEmptyString, p);
            c.member((*objs)[i], "position", K::kPoint3, p);
            c.member((*objs)[i], "radius", K::kNumber, p);
          }
        }
        if (const json* regs = c.member(*obs, "regions", K::kArray, root + ".observation")) {
          for (std::size_t i = 0; i < regs->size(); ++i) {
            check_box(c, (*regs)[i], root + ".observation.regions[" + std::to_string(i) + "]");
          }
        }
      }
      if (const json* cam = c.member(req, "camera", K::kObject, root)) {
        if (const json* k = c.member(*cam, "intrinsics", K::kObject, root + ".camera")) check_intrinsics(c, *k, root + ".camera.intrinsics");
        c.member(*cam, "extrinsics", K::kObject, root + ".camera");
      }
      break;
    }
    case Role::kTracker:
      c.member(req, "object", K::kNonEmptyString, root);
      if (const json* k = c.member(req, "intrinsics", K::kObject, root)) check_intrinsics(c, *k, root + ".intrinsics");
      if (const json* f = c.member(req, "frames", K::kArray, root)) check_generator_frames(c, *f, root + ".frames");
      break;
    case Role::kDepth: {
      if (const json* k = c.member(req, "intrinsics", K::kObject, root)) check_intrinsics(c, *k, root + ".intrinsics");
      const json* frames = c.member(req, "frames", K::kArray, root);
      if (frames) check_generator_frames(c, *frames, root + ".frames");
      if (const json* q = c.member(req, "queries", K::kArray, root)) {
        if (frames && q->size() != frames->size()) c.fail(root + ".queries", "length differs from frames");
        for (std::size_t i = 0; i < q->size(); ++i) {
          if (!(*q)[i].is_null()) c.is((*q)[i], K::kPoint2, root + ".queries[" + std::to_string(i) + "]");
        }
      }
      break;
    }
    case Role::kSelector: {
      const json* task = c.member(req, "task", K::kString, root);
      if (!task) break;
      if (*task == "propose") {
        if (const json* obj = c.member(req, "object", K::kObject, root)) {
          c.member(*obj, "id", K::kNonEmptyString, root + ".object");
          c.member(*obj, "position", K::kPoint3, root + ".object");
          c.member(*obj, "radius", K::kNumber, root + ".object");
        }
      } else if (*task == "grasp") {
        c.member(req, "object", K::kNonEmptyString, root);
        if (const json* cands = c.member(req, "candidates", K::kArray, root)) check_grasp_candidates(c, *cands, root + ".candidates");
      } else if (*task == "verify") {
        if (const json* obj = c.member(req, "object", K::kObject, root)) {
          c.member(*obj, "id", K::kNonEmptyString, root + ".object");
          c.member(*obj, "position", K::kPoint3, root + ".object");
          c.member(*obj, "disturbed", K::kBool, root + ".object");
        }
        if (const json* reg = c.member(req, "region", K::kObject, root)) check_box(c, *reg, root + ".region");
        c.member(req, "tolerance", K::kNumber, root);
      } else {
        c.fail(root + ".task", "must be propose, grasp or verify");
      }
      break;
    }
  }
  return c;
}

/// Violations of the role's response schema for the given request.
inline SchemaCheck check_response(Role role, const json& req, const json& res) {
  using namespace schema_detail;
  SchemaCheck c;
  const std::string root = std::string(to_string(role)) + ".response";
  if (!c.is(res, K::kObject, root)) return c;
  switch (role) {
    case Role::kPlanner:
      if (req.value("stage", "") == "abstract") {
        c.only_keys(res, {"steps"}, root);
        if (const json* steps = c.member(res, "steps", K::kArray, root)) {
          for (std::size_t i = 0; i < steps->size(); ++i) {
            const std::string p = root + ".steps[" + std::to_string(i) + "]";
            c.only_keys((*steps)[i], {"action", "object", "destination", "keyframes"}, p);
            for (const char* key : {"action", "object", "destination"}) c.member((*steps)[i], key, K::kNonEmptyString, p);
            if (const json* kf = c.member((*steps)[i], "keyframes", K::kArray, p)) {
              if (kf->empty()) c.fail(p + ".keyframes", "must name at least one keyframe");
              for (const auto& f : *kf) c.is(f, K::kInteger, p + ".keyframes[]");
            }
          }
        }
      } else {
        c.only_keys(res, {"subtasks"}, root);
        if (const json* subs = c.member(res, "subtasks", K::kArray, root)) {
          for (std::size_t i = 0; i < subs->size(); ++i) {
            const std::string p = root + ".subtasks[" + std::to_string(i) + "]";
            c.only_keys((*subs)[i], {"desc", "obj", "loc", "guide", "precond"}, p);
            for (const char* key : {"desc", "obj", "loc", "guide"}) c.member((*subs)[i], key, K::kNonEmptyString, p);
            if (const json* pre = c.member((*subs)[i], "precond", K::kArray, p)) {
              for (std::size_t k = 0; k < pre->size(); ++k) {
                const std::string pp = p + ".precond[" + std::to_string(k) + "]";
                c.only_keys((*pre)[k], {"relation", "subject", "object"}, pp);
                c.member((*pre)[k], "subject", K::kNonEmptyString, pp);
                if (const json* rel = c.member((*pre)[k], "relation", K::kString, pp)) {
                  if (*rel == "on") {
                    c.member((*pre)[k], "object", K::kNonEmptyString, pp);
                  } else if (*rel != "holding") {
                    c.fail(pp + ".relation", "must be on or holding");
                  }
                }
              }
            }
          }
        }
      }
      break;
    case Role::kGenerator:
      if (const json* f = c.member(res, "frames", K::kArray, root)) check_generator_frames(c, *f, root + ".frames");
      break;
    case Role::kTracker:
      if (const json* t = c.member(res, "track", K::kArray, root)) {
        const auto n = req.contains("frames") ? req.at("frames").size() : t->size();
        if (t->size() != n) c.fail(root + ".track", "length differs from request frames");
        for (std::size_t i = 0; i < t->size(); ++i) {
          if (!(*t)[i].is_null()) c.is((*t)[i], K::kPoint2, root + ".track[" + std::to_string(i) + "]");
        }
      }
      break;
    case Role::kDepth:
      if (const json* f = c.member(res, "frames", K::kArray, root)) {
        const auto n = req.contains("frames") ? req.at("frames").size() : f->size();
        if (f->size() != n) c.fail(root + ".frames", "length differs from request frames");
        for (std::size_t i = 0; i < f->size(); ++i) {
          const std::string p = root + ".frames[" + std::to_string(i) + "]";
          if (const json* d = c.member((*f)[i], "depth", K::kArray, p)) {
            for (const auto& e : *d) {
              if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
                  !e[2].is_number()) {
                c.fail(p + ".depth[]", "expected [u, v, z] with integer pixel");
              }
            }
          }
        }
      }
      break;
    case Role::kSelector: {
      const std::string task = req.value("task", "");
      if (task == "propose") {
        if (const json* cands = c.member(res, "candidates", K::kArray, root)) check_grasp_candidates(c, *cands, root + ".candidates");
      } else if (task == "grasp") {
        c.member(res, "id", K::kInteger, root);
      } else {
        c.member(res, "pass", K::kBool, root);
        c.member(res, "reason", K::kString, root);
      }
      break;
    }
  }
  return c;
}

// --- configuration and calls --------------------------------------------------

enum class AdapterKind { kFixture, kRemote };

struct AdapterConfig {
  AdapterKind kind = AdapterKind::kFixture;
  std::string endpoint;  // e.g. http://127.0.0.1:8080 (remote only)
  double timeout = 10.0;  // seconds per attempt
  int retries = 0;
  std::uint64_t seed = 0;
  int max_in_flight = 4;
  std::string bearer_token;

  void validate() const {
    require(kind != AdapterKind::kRemote || !endpoint.empty(), ErrorCode::kInvalidParameter,
            "remote adapter requires an endpoint");
    require(retries >= 0 && retries <= 5, ErrorCode::kInvalidParameter, "adapter retries must be in [0, 5]");
    require(timeout > 0.0, ErrorCode::kInvalidParameter, "adapter timeout must be > 0");
    require(max_in_flight >= 1, ErrorCode::kInvalidParameter, "adapter max_in_flight must be >= 1");
  }
};

/// MIMICRY_<ROLE>_ENDPOINT switches a role to remote mode;
/// MIMICRY_ADAPTER_TOKEN supplies a bearer token when none is configured.
inline AdapterConfig apply_env_overrides(Role role, AdapterConfig config) {
  std::string var = "MIMICRY_";
  for (char ch : to_string(role)) var += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  var += "_ENDPOINT";
  if (const char* ep = std::getenv(var.c_str()); ep != nullptr && *ep != '\0') {
    config.kind = AdapterKind::kRemote;
    config.endpoint = ep;
  }
  if (config.bearer_token.empty()) {
    if (const char* tok = std::getenv("MIMICRY_ADAPTER_TOKEN"); tok != nullptr) config.bearer_token = tok;
  }
  return config;
}

struct AdapterResponse {
  json payload;
  double latency = 0.0;  // seconds
  int attempt_count = 0;
};

/// Fixture body: receives the validated request and the per-call key.
using FixtureFn = std::function<json(const json& request, std::uint64_t key)>;

namespace detail {

inline json validated(Role role, const json& request, json body, const std::string& raw) {
  const SchemaCheck c = check_response(role, request, body);
  if (!c.ok()) throw Error(ErrorCode::kSchemaViolation, c.summary(), raw);
  return body;
}

inline AdapterResponse call_remote(Role role, const json& request, const AdapterConfig& config) {
  httplib::Client client(config.endpoint);
  const auto secs = static_cast<time_t>(config.timeout);
  const auto usecs = static_cast<time_t>((config.timeout - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  httplib::Headers headers;
  if (!config.bearer_token.empty()) headers.emplace("Authorization", "Bearer " + config.bearer_token);

  const std::string path = "/v1/" + std::string(to_string(role));
  const std::string body = request.dump();
  const auto start = std::chrono::steady_clock::now();
  std::string last_failure;
  int last_status = 0;
  const int max_attempts = config.retries + 1;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    auto res = client.Post(path, headers, body, "application/json");
    if (!res) {
      last_status = 0;
      last_failure = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 200 && res->status < 300) {
      json parsed;
      try {
        parsed = json::parse(res->body);
      } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::kSchemaViolation, std::string("response is not JSON: ") + e.what(), res->body);
      }
      AdapterResponse out;
      out.payload = validated(role, request, std::move(parsed), res->body);
      out.attempt_count = attempt;
      out.latency = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      return out;
    }
    last_status = res->status;
    last_failure = res->body;
    if (res->status < 500) break;  // client errors are not retried
  }
  if (last_status == 0) {
    throw Error(ErrorCode::kAdapterUnavailable,
                std::string(to_string(role)) + " unreachable after " + std::to_string(max_attempts) +
                    " attempt(s): " + last_failure);
  }
  throw Error(ErrorCode::kRemoteError,
              std::string(to_string(role)) + " returned HTTP " + std::to_string(last_status),
              std::to_string(last_status) + " " + last_failure);
}

}  // namespace detail

/// One request/response exchange with schema validation on both sides.
inline AdapterResponse call_adapter(Role role, const json& request, const AdapterConfig& config,
                                    const FixtureFn& fixture = {}) {
  config.validate();
  const SchemaCheck req_check = check_request(role, request);
  if (!req_check.ok()) throw Error(ErrorCode::kSchemaViolation, "request: " + req_check.summary(), request.dump());
  if (config.kind == AdapterKind::kRemote) return detail::call_remote(role, request, config);

  require(static_cast<bool>(fixture), ErrorCode::kAdapterUnavailable,
          std::string(to_string(role)) + ": no fixture implementation configured");
  const auto start = std::chrono::steady_clock::now();
  json body = fixture(request, fixture_key(config.seed, role, request));
  AdapterResponse out;
  const std::string raw = body.dump();
  out.payload = detail::validated(role, request, std::move(body), raw);
  out.attempt_count = 1;
  out.latency = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

/// A role bound to its configuration and (for fixture mode) implementation.
/// Copies share the in-flight limiter.
class Adapter {
 public:
  Adapter() = default;
  Adapter(Role role, AdapterConfig config, FixtureFn fixture = {})
      : role_(role),
        config_(std::move(config)),
        fixture_(std::move(fixture)),
        in_flight_(std::make_shared<std::counting_semaphore<>>(config_.max_in_flight)) {
    config_.validate();
  }

  Role role() const { return role_; }
  const AdapterConfig& config() const { return config_; }

  AdapterResponse call(const json& request) const {
    if (!in_flight_) throw Error(ErrorCode::kAdapterUnavailable, "adapter not configured");
    in_flight_->acquire();
    struct Release {
      std::counting_semaphore<>* s;
      ~Release() { s->release(); }
    } release{in_flight_.get()};
    return call_adapter(role_, request, config_, fixture_);
  }

 private:
  Role role_ = Role::kPlanner;
  AdapterConfig config_;
  FixtureFn fixture_;
  std::shared_ptr<std::counting_semaphore<>> in_flight_;
};

/// The five roles used by the pipeline.
struct AdapterSuite {
  Adapter planner;
  Adapter generator;
  Adapter tracker;
  Adapter depth;
  Adapter selector;

  const Adapter& get(Role r) const {
    switch (r) {
      case Role::kPlanner: return planner;
      case Role::kGenerator: return generator;
      case Role::kTracker: return tracker;
      case Role::kDepth: return depth;
      case Role::kSelector: return selector;
    }
    return planner;
  }
};

}  // namespace mimicry::adapters
