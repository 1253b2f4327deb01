#pragma once

// Deterministic stand-ins for the five external model roles. Each fixture is a
// pure function of (request, key); the key already mixes in the suite seed and
// the role, so repeated requests give repeated answers.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mimicry/adapters.hpp"
#include "mimicry/error.hpp"
#include "mimicry/geometry.hpp"
#include "mimicry/model.hpp"
#include "mimicry/serialization.hpp"

namespace mimicry::fixtures {

using adapters::Role;

enum class FaultKind { kTimeout, kSchema, kDropout, kVerifyFail };

inline std::string_view to_string(FaultKind k) {
  switch (k) {
    case FaultKind::kTimeout: return "timeout";
    case FaultKind::kSchema: return "schema";
    case FaultKind::kDropout: return "dropout";
    case FaultKind::kVerifyFail: return "verify_fail";
  }
  return "timeout";
}

inline FaultKind parse_fault_kind(std::string_view s) {
  if (s == "timeout") return FaultKind::kTimeout;
  if (s == "schema") return FaultKind::kSchema;
  if (s == "dropout") return FaultKind::kDropout;
  if (s == "verify_fail") return FaultKind::kVerifyFail;
  throw Error(ErrorCode::kParse, "unknown fault kind '" + std::string(s) + "'");
}

/// Fires on requests of `role` (optionally only for one subtask index) whose
/// `attempt` field is below `attempts`. Requests without the field count as
/// attempt 0.
struct FaultRule {
  Role role = Role::kGenerator;
  std::optional<int> subtask;
  int attempts = 1;
  FaultKind kind = FaultKind::kTimeout;

  friend bool operator==(const FaultRule&, const FaultRule&) = default;
};

struct FixtureOptions {
  double lift_height = 0.15;     // apex of the imagined carry, meters
  double rollout_jitter = 0.0;   // std-dev of per-frame position noise, meters
  double grasp_jitter = 0.0;     // std-dev of stability noise
  int context_limit = 48;        // keyframe descriptors the planner reads before subsampling
  bool depth_holes = false;      // omit depth at the exact track pixel
  std::vector<FaultRule> faults;

  void validate() const {
    require(lift_height >= 0.0 && std::isfinite(lift_height), ErrorCode::kInvalidParameter, "lift_height must be >= 0");
    require(rollout_jitter >= 0.0, ErrorCode::kInvalidParameter, "rollout_jitter must be >= 0");
    require(grasp_jitter >= 0.0, ErrorCode::kInvalidParameter, "grasp_jitter must be >= 0");
    require(context_limit >= 2, ErrorCode::kInvalidParameter, "context_limit must be >= 2");
    for (const auto& f : faults) require(f.attempts >= 1, ErrorCode::kInvalidParameter, "fault attempts must be >= 1");
  }
};

inline json to_json(const FaultRule& f) {
  json j{{"role", std::string(adapters::to_string(f.role))}};
  j["subtask"] = f.subtask ? json(*f.subtask) : json(nullptr);
  j["attempts"] = f.attempts;
  j["kind"] = std::string(to_string(f.kind));
  return j;
}

inline FaultRule fault_from_json(const json& j, const std::string& ctx = "fault") {
  FaultRule f;
  f.role = adapters::parse_role(mimicry::detail::get<std::string>(j, "role", ctx));
  if (j.contains("subtask") && !j.at("subtask").is_null()) f.subtask = mimicry::detail::get<int>(j, "subtask", ctx);
  f.attempts = mimicry::detail::get_or<int>(j, "attempts", 1, ctx);
  f.kind = parse_fault_kind(mimicry::detail::get<std::string>(j, "kind", ctx));
  return f;
}

inline json to_json(const FixtureOptions& o) {
  json faults = json::array();
  for (const auto& f : o.faults) faults.push_back(to_json(f));
  return json{{"lift_height", o.lift_height},   {"rollout_jitter", o.rollout_jitter}, {"grasp_jitter", o.grasp_jitter},
              {"context_limit", o.context_limit}, {"depth_holes", o.depth_holes},     {"faults", faults}};
}

namespace detail {

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::string spaced(std::string_view id) {
  std::string out = lower(id);
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

inline bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

/// Whole-word (or whole-phrase) occurrence of `phrase` in `text`, also
/// accepting a trailing plural "s"/"es".
inline bool mentions(std::string_view text, std::string_view phrase) {
  if (phrase.empty()) return false;
  for (std::size_t pos = text.find(phrase); pos != std::string_view::npos; pos = text.find(phrase, pos + 1)) {
    if (pos > 0 && is_word_char(text[pos - 1])) continue;
    std::size_t end = pos + phrase.size();
    if (text.substr(end, 2) == "es" && (end + 2 == text.size() || !is_word_char(text[end + 2]))) return true;
    if (end < text.size() && text[end] == 's') ++end;
    if (end == text.size() || !is_word_char(text[end])) return true;
  }
  return false;
}

inline std::vector<std::string> split_clauses(std::string_view text) {
  std::string t = lower(text);
  for (std::string_view sep : {" and then ", " then ", " and ", ";", ","}) {
    for (auto pos = t.find(sep); pos != std::string::npos; pos = t.find(sep)) t.replace(pos, sep.size(), "|");
  }
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= t.size(); ++i) {
    if (i == t.size() || t[i] == '|') {
      if (i > start) out.push_back(" " + t.substr(start, i - start) + " ");
      start = i + 1;
    }
  }
  return out;
}

inline bool fault_fires(const FixtureOptions& opts, Role role, FaultKind kind, const json& req) {
  const int attempt = req.value("attempt", 0);
  const int subtask = req.value("subtask", -1);
  for (const auto& f : opts.faults) {
    if (f.role != role || f.kind != kind) continue;
    if (f.subtask && *f.subtask != subtask) continue;
    if (attempt < f.attempts) return true;
  }
  return false;
}

/// Common fault handling; returns a malformed body for schema faults.
inline std::optional<json> injected(const FixtureOptions& opts, Role role, const json& req) {
  if (fault_fires(opts, role, FaultKind::kTimeout, req)) {
    throw Error(ErrorCode::kAdapterUnavailable, std::string(adapters::to_string(role)) + ": scripted timeout");
  }
  if (fault_fires(opts, role, FaultKind::kSchema, req)) return json{{"malformed", true}};
  return std::nullopt;
}

inline Point3D gaussian3(adapters::KeyedRng& rng, double sigma) {
  const double x = rng.normal(), y = rng.normal(), z = rng.normal();
  return {sigma * x, sigma * y, sigma * z};
}

// --- planner -------------------------------------------------------------------

struct SummaryView {
  struct Obj {
    std::string id, category, group;
    std::optional<std::string> region;
  };
  struct Reg {
    std::string id, category;
  };
  std::vector<Obj> objects;  // sorted by id
  std::vector<Reg> regions;  // sorted by id

  explicit SummaryView(const json& summary) {
    for (const auto& e : summary) {
      if (e.at("kind") == "region") {
        regions.push_back({e.at("id").get<std::string>(), e.value("category", "")});
      } else {
        Obj o{e.at("id").get<std::string>(), e.value("category", ""), "", std::nullopt};
        if (e.contains("group") && e.at("group").is_string()) o.group = e.at("group").get<std::string>();
        if (e.contains("region") && e.at("region").is_string()) o.region = e.at("region").get<std::string>();
        objects.push_back(std::move(o));
      }
    }
    std::sort(objects.begin(), objects.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    std::sort(regions.begin(), regions.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  }

  const Obj* object(const std::string& id) const {
    for (const auto& o : objects) {
      if (o.id == id) return &o;
    }
    return nullptr;
  }
  const Reg* region(const std::string& id) const {
    for (const auto& r : regions) {
      if (r.id == id) return &r;
    }
    return nullptr;
  }

  /// Object named by `noun`: exact id, else category, else group. Among
  /// matches the smallest id not yet used wins, falling back to the smallest.
  std::optional<std::string> ground_object(const std::string& noun, const std::set<std::string>& used) const {
    const std::string n = lower(noun);
    for (const auto& o : objects) {
      if (lower(o.id) == n || spaced(o.id) == n) return o.id;
    }
    for (int pass = 0; pass < 2; ++pass) {
      std::optional<std::string> first;
      for (const auto& o : objects) {
        const std::string key = lower(pass == 0 ? o.category : o.group);
        if (key.empty() || key != n) continue;
        if (!used.count(o.id)) return o.id;
        if (!first) first = o.id;
      }
      if (first) return first;
    }
    return std::nullopt;
  }

  std::optional<std::string> ground_region(const std::string& noun) const {
    const std::string n = lower(noun);
    for (const auto& r : regions) {
      if (lower(r.id) == n || spaced(r.id) == n) return r.id;
    }
    for (const auto& r : regions) {
      if (!r.category.empty() && lower(r.category) == n) return r.id;
    }
    return std::nullopt;
  }

  /// Region mentioned in a clause (id or category).
  std::optional<std::string> region_in(const std::string& clause) const {
    for (const auto& r : regions) {
      if (mentions(clause, spaced(r.id)) || (!r.category.empty() && mentions(clause, lower(r.category)))) return r.id;
    }
    return std::nullopt;
  }

  /// Objects mentioned in a clause by id, category or group; "everything" and
  /// "all" select every object.
  std::vector<std::string> objects_in(const std::string& clause) const {
    std::vector<std::string> out;
    const bool all = mentions(clause, "everything") || mentions(clause, "all objects") || mentions(clause, "all items");
    for (const auto& o : objects) {
      if (all || mentions(clause, spaced(o.id)) || (!o.category.empty() && mentions(clause, lower(o.category))) ||
          (!o.group.empty() && mentions(clause, lower(o.group)))) {
        out.push_back(o.id);
      }
    }
    return out;
  }
};

inline json planner_abstract(const json& req, const FixtureOptions& opts) {
  const json& kfs = req.at("keyframes");
  std::vector<std::size_t> picked;
  if (static_cast<int>(kfs.size()) > opts.context_limit) {
    const std::size_t limit = static_cast<std::size_t>(opts.context_limit);
    for (std::size_t i = 0; i < limit; ++i) picked.push_back(i * kfs.size() / limit);
  } else {
    for (std::size_t i = 0; i < kfs.size(); ++i) picked.push_back(i);
  }

  struct Event {
    std::int64_t frame;
    std::string verb, noun;
  };
  std::vector<Event> events;
  std::string previous;
  for (std::size_t i : picked) {
    const std::string label = lower(kfs[i].at("label").get<std::string>());
    if (label == previous) continue;
    previous = label;
    const auto sp = label.find(' ');
    if (label.empty() || sp == std::string::npos) continue;
    std::string noun = label.substr(sp + 1);
    for (bool again = true; again;) {
      again = false;
      for (std::string_view w : {"over ", "into ", "onto ", "in ", "on ", "the ", "a "}) {
        if (noun.size() > w.size() && noun.starts_with(w)) {
          noun.erase(0, w.size());
          again = true;
        }
      }
    }
    events.push_back({kfs[i].at("frame").get<std::int64_t>(), label.substr(0, sp), noun});
  }

  json steps = json::array();
  std::optional<Event> pending;
  auto flush = [&](const std::string& destination, std::vector<std::int64_t> frames) {
    steps.push_back(json{{"action", "move"}, {"object", pending->noun}, {"destination", destination}, {"keyframes", frames}});
    pending.reset();
  };
  for (const auto& e : events) {
    if (e.verb == "grasp") {
      if (pending) flush("unknown", {pending->frame});
      pending = e;
    } else if (e.verb == "release" && pending) {
      flush(e.noun, {pending->frame, e.frame});
    }
  }
  if (pending) flush("unknown", {pending->frame});
  return json{{"steps", steps}};
}

inline json planner_unify(const json& req) {
  const SummaryView view(req.at("scene_summary"));
  const PlanMode mode = parse_plan_mode(req.at("mode").get<std::string>());
  const std::string language = req.contains("language") && req.at("language").is_string()
                                   ? req.at("language").get<std::string>()
                                   : std::string();

  // (object id, region id, description noun) per subtask; ungrounded names pass
  // through verbatim so that the caller reports them.
  struct Move {
    std::string obj, loc;
  };
  std::vector<Move> moves;

  std::vector<std::pair<std::string, std::string>> baseline;  // grounded (obj, loc)
  if (req.contains("baseline") && req.at("baseline").is_object()) {
    std::set<std::string> used;
    for (const auto& s : req.at("baseline").at("steps")) {
      const std::string noun = s.at("object").get<std::string>();
      const std::string dest = s.at("destination").get<std::string>();
      const std::string obj = view.ground_object(noun, used).value_or(noun);
      used.insert(obj);
      baseline.emplace_back(obj, view.ground_region(dest).value_or(dest));
    }
  }

  switch (mode) {
    case PlanMode::kMimic:
      for (const auto& [o, l] : baseline) moves.push_back({o, l});
      break;
    case PlanMode::kConstrained: {
      for (const auto& [o, l] : baseline) moves.push_back({o, l});
      for (const auto& clause : split_clauses(language)) {
        const auto region = view.region_in(clause);
        if (!region) continue;
        const auto named = view.objects_in(clause);
        for (auto& m : moves) {
          if (named.empty() || std::find(named.begin(), named.end(), m.obj) != named.end()) m.loc = *region;
        }
      }
      break;
    }
    case PlanMode::kSkillTransfer: {
      std::map<std::string, std::string> group_target;
      std::vector<std::string> destinations;
      for (const auto& [o, l] : baseline) {
        if (std::find(destinations.begin(), destinations.end(), l) == destinations.end()) destinations.push_back(l);
        if (const auto* obj = view.object(o)) group_target.emplace(obj->group.empty() ? obj->category : obj->group, l);
      }
      std::size_t novel = 0;
      for (const auto& o : view.objects) {
        const std::string g = o.group.empty() ? o.category : o.group;
        if (group_target.count(g)) continue;
        std::optional<std::string> target;
        for (const auto& r : view.regions) {
          if (!r.category.empty() && lower(r.category) == lower(g)) target = r.id;
        }
        if (!target && !view.regions.empty()) target = view.regions[novel % view.regions.size()].id;
        ++novel;
        if (target) group_target.emplace(g, *target);
      }
      for (const auto& o : view.objects) {
        const auto it = group_target.find(o.group.empty() ? o.category : o.group);
        if (it == group_target.end() || (o.region && *o.region == it->second)) continue;
        moves.push_back({o.id, it->second});
      }
      break;
    }
    case PlanMode::kTextOnly: {
      std::set<std::string> seen;
      for (const auto& clause : split_clauses(language)) {
        const auto region = view.region_in(clause);
        if (!region) continue;
        for (const auto& id : view.objects_in(clause)) {
          if (seen.insert(id).second) moves.push_back({id, *region});
        }
      }
      break;
    }
  }

  std::map<std::string, std::string> last_destination;
  json subtasks = json::array();
  for (const auto& m : moves) {
    const auto* obj = view.object(m.obj);
    const auto* reg = view.region(m.loc);
    const std::string obj_noun = obj && !obj->category.empty() ? obj->category : m.obj;
    const std::string loc_noun = reg && !reg->category.empty() ? reg->category : m.loc;
    json precond = json::array();
    if (auto it = last_destination.find(m.obj); it != last_destination.end()) {
      precond.push_back(json{{"relation", "on"}, {"subject", m.obj}, {"object", it->second}});
    } else if (obj && obj->region) {
      precond.push_back(json{{"relation", "on"}, {"subject", m.obj}, {"object", *obj->region}});
    }
    last_destination[m.obj] = m.loc;
    subtasks.push_back(json{{"desc", "put the " + obj_noun + " in the " + loc_noun},
                            {"obj", m.obj},
                            {"loc", m.loc},
                            {"guide", "pick up " + m.obj + " and place it in " + m.loc},
                            {"precond", precond}});
  }
  return json{{"subtasks", subtasks}};
}

// --- generator / tracker / depth ------------------------------------------------

/// Placement slot inside a region: a 3x3 grid shrunk by the object radius,
/// centre first, choosing the slot farthest (in xy) from other objects. Gaps
/// beyond `radius + other + 0.05` count as equally free.
inline Point3D placement_slot(const Region& region, const std::string& self, double radius,
                              const std::vector<std::tuple<std::string, Point3D, double>>& others, double start_z) {
  const Point3D lo{std::min(region.min.x + radius, region.center().x), std::min(region.min.y + radius, region.center().y), 0};
  const Point3D hi{std::max(region.max.x - radius, region.center().x), std::max(region.max.y - radius, region.center().y), 0};
  std::vector<Point3D> slots{{0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y), 0}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == 1 && j == 1) continue;
      slots.push_back({lo.x + 0.5 * i * (hi.x - lo.x), lo.y + 0.5 * j * (hi.y - lo.y), 0});
    }
  }
  Point3D best = slots.front();
  double best_score = -1.0;
  for (const auto& s : slots) {
    double score = std::numeric_limits<double>::infinity();
    for (const auto& [id, p, r] : others) {
      if (id == self) continue;
      const double gap = std::hypot(s.x - p.x, s.y - p.y);
      score = std::min(score, std::min(gap, radius + r + 0.05));
    }
    if (score > best_score) {
      best_score = score;
      best = s;
    }
  }
  best.z = std::clamp(start_z, region.min.z, region.max.z);
  return best;
}

inline json generator(const json& req, std::uint64_t key, const FixtureOptions& opts) {
  const std::string target = req.at("obj").get<std::string>();
  const std::string loc = req.at("loc").get<std::string>();
  const int q = req.at("frames").get<int>();
  const CameraExtrinsics ext = extrinsics_from_json(req.at("camera").at("extrinsics"), "generator.camera.extrinsics");

  std::vector<std::tuple<std::string, Point3D, double>> objects;
  for (const auto& o : req.at("observation").at("objects")) {
    objects.emplace_back(o.at("id").get<std::string>(), point3_from_json(o.at("position"), "generator.object"),
                         o.at("radius").get<double>());
  }
  std::optional<Region> region;
  for (const auto& r : req.at("observation").at("regions")) {
    if (r.at("id") == loc) {
      region = Region{loc, point3_from_json(r.at("min"), "generator.region"), point3_from_json(r.at("max"), "generator.region"), ""};
    }
  }
  const auto self = std::find_if(objects.begin(), objects.end(), [&](const auto& o) { return std::get<0>(o) == target; });

  adapters::KeyedRng rng(key);
  json frames = json::array();
  if (self == objects.end() || !region) {
    // Nothing sensible to imagine: a static scene without the target.
    for (int k = 0; k < q; ++k) {
      json objs = json::object();
      for (const auto& [id, p, r] : objects) objs[id] = mimicry::to_json(ext.to_camera(p));
      frames.push_back(json{{"objects", objs}});
    }
    return json{{"frames", frames}};
  }

  const Point3D start = std::get<1>(*self);
  const Point3D goal = placement_slot(*region, target, std::get<2>(*self), objects, start.z);
  const bool dropout = fault_fires(opts, Role::kGenerator, FaultKind::kDropout, req);
  for (int k = 0; k < q; ++k) {
    const double s = static_cast<double>(k) / (q - 1);
    Point3D p = lerp(start, goal, s);
    p.z += 4.0 * opts.lift_height * s * (1.0 - s);
    if (k > 0 && opts.rollout_jitter > 0.0) p += gaussian3(rng, opts.rollout_jitter);
    json objs = json::object();
    for (const auto& [id, pos, r] : objects) {
      if (id == target) {
        if (!(dropout && k == q / 2)) objs[id] = mimicry::to_json(ext.to_camera(p));
      } else {
        objs[id] = mimicry::to_json(ext.to_camera(pos));
      }
    }
    frames.push_back(json{{"objects", objs}});
  }
  return json{{"frames", frames}};
}

inline json tracker(const json& req) {
  const CameraIntrinsics k = intrinsics_from_json(req.at("intrinsics"), "tracker.intrinsics");
  const std::string id = req.at("object").get<std::string>();
  json track = json::array();
  for (const auto& f : req.at("frames")) {
    const json& objs = f.at("objects");
    if (!objs.contains(id)) {
      track.push_back(nullptr);
      continue;
    }
    const Point3D p = point3_from_json(objs.at(id), "tracker.frame");
    if (!(p.z > 0.0)) {
      track.push_back(nullptr);
      continue;
    }
    track.push_back(json::array({k.fx * p.x / p.z + k.cx, k.fy * p.y / p.z + k.cy}));
  }
  return json{{"track", track}};
}

/// Depth at each query pixel: the camera-frame z of the object whose projection
/// is nearest to the query (ties to the first listed).
inline json depth(const json& req, const FixtureOptions& opts) {
  const CameraIntrinsics k = intrinsics_from_json(req.at("intrinsics"), "depth.intrinsics");
  const json& frames = req.at("frames");
  const json& queries = req.at("queries");
  json out = json::array();
  for (std::size_t i = 0; i < frames.size(); ++i) {
    json entries = json::array();
    if (!queries[i].is_null()) {
      const Point2D qp = point2_from_json(queries[i], "depth.query");
      double best = std::numeric_limits<double>::infinity();
      double z = 0.0;
      for (auto it = frames[i].at("objects").begin(); it != frames[i].at("objects").end(); ++it) {
        const Point3D p = point3_from_json(it.value(), "depth.frame");
        if (!(p.z > 0.0)) continue;
        const double d = std::hypot(k.fx * p.x / p.z + k.cx - qp.u, k.fy * p.y / p.z + k.cy - qp.v);
        if (d < best) {
          best = d;
          z = p.z;
        }
      }
      if (std::isfinite(best)) {
        const int u = static_cast<int>(std::lround(qp.u)), v = static_cast<int>(std::lround(qp.v));
        if (opts.depth_holes) {
          for (auto [du, dv] : {std::pair{-2, 0}, std::pair{2, 0}, std::pair{0, -2}, std::pair{0, 2}}) {
            entries.push_back(json::array({u + du, v + dv, z}));
          }
        } else {
          entries.push_back(json::array({u, v, z}));
        }
      }
    }
    out.push_back(json{{"depth", entries}});
  }
  return json{{"frames", out}};
}

// --- selector ----------------------------------------------------------------------

inline constexpr double kBaseStability[] = {0.9, 0.7, 0.8, 0.6};
inline constexpr double kCandidateOffset[][3] = {{0.0, 0.0, 0.0}, {0.006, 0.0, 0.0}, {0.0, 0.006, 0.0}, {-0.004, -0.004, 0.002}};

inline json selector(const json& req, std::uint64_t key, const FixtureOptions& opts) {
  const std::string task = req.at("task").get<std::string>();
  if (task == "propose") {
    const Point3D pos = point3_from_json(req.at("object").at("position"), "selector.object");
    adapters::KeyedRng rng(key);
    json cands = json::array();
    for (int i = 0; i < 4; ++i) {
      double s = kBaseStability[i];
      if (opts.grasp_jitter > 0.0) s = std::clamp(s + opts.grasp_jitter * rng.normal(), 0.0, 1.0);
      const Point3D off{kCandidateOffset[i][0], kCandidateOffset[i][1], kCandidateOffset[i][2]};
      cands.push_back(json{{"id", i}, {"pose", mimicry::to_json(pos + off)}, {"yaw", i * std::numbers::pi / 2}, {"stability", s}});
    }
    return json{{"candidates", cands}};
  }
  if (task == "grasp") {
    const json* best = nullptr;
    for (const auto& c : req.at("candidates")) {
      if (best == nullptr || c.at("stability").get<double>() > best->at("stability").get<double>() ||
          (c.at("stability").get<double>() == best->at("stability").get<double>() &&
           c.at("id").get<std::int64_t>() < best->at("id").get<std::int64_t>())) {
        best = &c;
      }
    }
    // An empty list has no valid answer; -1 is rejected by the caller.
    return json{{"id", best ? best->at("id").get<std::int64_t>() : -1}};
  }
  if (fault_fires(opts, Role::kSelector, FaultKind::kVerifyFail, req)) return json{{"pass", false}, {"reason", "scripted"}};
  const json& obj = req.at("object");
  const json& reg = req.at("region");
  const Region region{reg.at("id").get<std::string>(), point3_from_json(reg.at("min"), "selector.region"),
                      point3_from_json(reg.at("max"), "selector.region"), ""};
  const Verdict v = placement_verdict(point3_from_json(obj.at("position"), "selector.object"), obj.at("disturbed").get<bool>(),
                                      region, req.at("tolerance").get<double>());
  return json{{"pass", v.pass}, {"reason", v.reason}};
}

}  // namespace detail

/// The fixture response for one role; the entry point used by the suite and by
/// the HTTP stub in tests.
inline json fixture_response(Role role, const json& request, std::uint64_t key, const FixtureOptions& opts) {
  if (auto bad = detail::injected(opts, role, request)) return *bad;
  switch (role) {
    case Role::kPlanner:
      return request.at("stage") == "abstract" ? detail::planner_abstract(request, opts) : detail::planner_unify(request);
    case Role::kGenerator: return detail::generator(request, key, opts);
    case Role::kTracker: return detail::tracker(request);
    case Role::kDepth: return detail::depth(request, opts);
    case Role::kSelector: return detail::selector(request, key, opts);
  }
  return json::object();
}

inline adapters::FixtureFn make_fixture(Role role, FixtureOptions opts) {
  return [role, opts = std::move(opts)](const json& request, std::uint64_t key) {
    return fixture_response(role, request, key, opts);
  };
}

/// All five roles backed by fixtures. When `base.kind` is remote, roles still
/// get their fixture but call the endpoint instead.
inline adapters::AdapterSuite make_fixture_suite(std::uint64_t seed, const FixtureOptions& opts = {},
                                                 adapters::AdapterConfig base = {}) {
  opts.validate();
  base.seed = seed;
  auto make = [&](Role r) { return adapters::Adapter(r, base, make_fixture(r, opts)); };
  return {make(Role::kPlanner), make(Role::kGenerator), make(Role::kTracker), make(Role::kDepth), make(Role::kSelector)};
}

}  // namespace mimicry::fixtures
