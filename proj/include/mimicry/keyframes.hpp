#pragma once

// Key-action parsing of a demonstration: a frame is a keyframe candidate when
// the mean wrist speed over a window around it drops below a threshold.
// Candidates are grouped into maximal stationary runs, one representative is
// chosen per run, and representatives closer than a minimum interval to the
// previously accepted keyframe are dropped.

#include <algorithm>
#include <cmath>
#include <iterator>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mimicry/error.hpp"
#include "mimicry/geometry.hpp"
#include "mimicry/serialization.hpp"

namespace mimicry::keyframes {

struct LandmarkFrame {
  std::int64_t frame_index = 0;
  Point2D wrist;
  double confidence = 1.0;
};

struct LandmarkStream {
  std::vector<LandmarkFrame> frames;

  std::size_t size() const { return frames.size(); }
};

struct KeyframeParams {
  double epsilon = 2.0;        // px/frame
  int half_window = 3;         // frames
  std::int64_t min_interval = 15;  // frames
  double min_confidence = 0.3;

  void validate() const {
    require(epsilon > 0.0, ErrorCode::kInvalidParameter, "keyframe epsilon must be > 0");
    require(half_window >= 1, ErrorCode::kInvalidParameter, "keyframe half_window must be >= 1");
    require(min_interval >= 1, ErrorCode::kInvalidParameter, "keyframe min_interval must be >= 1");
  }
};

inline void check_stream(const LandmarkStream& stream) {
  for (std::size_t i = 0; i < stream.frames.size(); ++i) {
    const auto& f = stream.frames[i];
    require(is_finite(f.wrist), ErrorCode::kValidation, "landmark wrist position is not finite");
    require(f.confidence >= 0.0 && f.confidence <= 1.0, ErrorCode::kValidation,
            "landmark confidence outside [0, 1]");
    if (i > 0) {
      require(f.frame_index > stream.frames[i - 1].frame_index, ErrorCode::kValidation,
              "landmark frame indices must be strictly increasing");
    }
  }
}

/// ||p_i - p_{i-1}|| for stream position i (1 <= i < size).
inline double frame_speed(const LandmarkStream& stream, std::size_t i) {
  if (i == 0 || i >= stream.size()) {
    throw Error(ErrorCode::kIndex, "frame_speed position " + std::to_string(i) +
                                       " outside [1, " + std::to_string(stream.size()) + ")");
  }
  return distance(stream.frames[i].wrist, stream.frames[i - 1].wrist);
}

/// Mean frame speed over {t - half_window, ..., t + half_window}, clipped to
/// the positions where a speed is defined.
inline double stationarity_score(const LandmarkStream& stream, std::size_t t, int half_window) {
  require(stream.size() >= 2, ErrorCode::kInsufficientData, "stationarity needs >= 2 frames");
  require(t < stream.size(), ErrorCode::kIndex, "stationarity position out of range");
  require(half_window >= 0, ErrorCode::kInvalidParameter, "half_window must be >= 0");
  const auto hw = static_cast<std::ptrdiff_t>(half_window);
  const auto last = static_cast<std::ptrdiff_t>(stream.size()) - 1;
  const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(1, static_cast<std::ptrdiff_t>(t) - hw);
  const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(last, static_cast<std::ptrdiff_t>(t) + hw);
  if (lo > hi) {
    // Only possible with half_window == 0 at t == 0.
    return frame_speed(stream, 1);
  }
  double sum = 0.0;
  for (std::ptrdiff_t i = lo; i <= hi; ++i) sum += frame_speed(stream, static_cast<std::size_t>(i));
  return sum / static_cast<double>(hi - lo + 1);
}

/// Replaces wrist positions of low-confidence frames by linear interpolation
/// (in frame index) between the nearest confident neighbours; leading and
/// trailing gaps hold the nearest confident position. Streams without any
/// confident frame are returned unchanged.
inline LandmarkStream bridge_dropouts(const LandmarkStream& stream, double min_confidence) {
  LandmarkStream out = stream;
  std::vector<std::size_t> good;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (stream.frames[i].confidence >= min_confidence) good.push_back(i);
  }
  if (good.empty() || good.size() == stream.size()) return out;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (stream.frames[i].confidence >= min_confidence) continue;
    const auto next = std::lower_bound(good.begin(), good.end(), i);
    auto& wrist = out.frames[i].wrist;
    if (next == good.begin()) {
      wrist = stream.frames[*next].wrist;
    } else if (next == good.end()) {
      wrist = stream.frames[good.back()].wrist;
    } else {
      const auto& a = stream.frames[*std::prev(next)];
      const auto& b = stream.frames[*next];
      const double s = static_cast<double>(stream.frames[i].frame_index - a.frame_index) /
                       static_cast<double>(b.frame_index - a.frame_index);
      wrist = a.wrist + s * (b.wrist - a.wrist);
    }
  }
  return out;
}

/// Stream positions whose score is strictly below epsilon.
inline std::vector<bool> candidate_mask(const LandmarkStream& stream, const KeyframeParams& params) {
  std::vector<bool> mask(stream.size());
  for (std::size_t t = 0; t < stream.size(); ++t) {
    mask[t] = stationarity_score(stream, t, params.half_window) < params.epsilon;
  }
  return mask;
}

/// Returns frame indices (not stream positions) of the keyframes.
inline std::vector<std::int64_t> extract_keyframes(const LandmarkStream& raw, const KeyframeParams& params) {
  params.validate();
  require(raw.size() >= 2, ErrorCode::kInsufficientData, "keyframe extraction needs >= 2 frames");
  check_stream(raw);
  const LandmarkStream stream = bridge_dropouts(raw, params.min_confidence);

  std::vector<double> score(stream.size());
  for (std::size_t t = 0; t < stream.size(); ++t) score[t] = stationarity_score(stream, t, params.half_window);

  std::vector<std::int64_t> keyframes;
  std::size_t t = 0;
  while (t < stream.size()) {
    if (!(score[t] < params.epsilon)) {
      ++t;
      continue;
    }
    std::size_t best = t;
    for (; t < stream.size() && score[t] < params.epsilon; ++t) {
      if (score[t] < score[best]) best = t;
    }
    const std::int64_t frame = stream.frames[best].frame_index;
    if (keyframes.empty() || frame - keyframes.back() >= params.min_interval) keyframes.push_back(frame);
  }
  return keyframes;
}

// --- I/O -------------------------------------------------------------------

/// CSV with header exactly `frame,u,v,confidence`; one row per frame.
inline LandmarkStream parse_landmark_csv(const std::string& text, const std::string& source = "landmarks") {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
    return s;
  };
  if (!std::getline(in, line) || trim(line) != "frame,u,v,confidence") {
    throw Error(ErrorCode::kParse, source + ":1: expected header 'frame,u,v,confidence'");
  }
  ++line_no;
  LandmarkStream stream;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell[4];
    for (int c = 0; c < 4; ++c) {
      if (!std::getline(row, cell[c], ',')) {
        throw Error(ErrorCode::kParse, source + ":" + std::to_string(line_no) + ": expected 4 columns");
      }
    }
    try {
      LandmarkFrame f;
      f.frame_index = std::stoll(cell[0]);
      f.wrist.u = std::stod(cell[1]);
      f.wrist.v = std::stod(cell[2]);
      f.confidence = std::stod(cell[3]);
      stream.frames.push_back(f);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParse, source + ":" + std::to_string(line_no) + ": malformed number");
    }
  }
  check_stream(stream);
  return stream;
}

/// JSON array of {"frame": int, "u": px, "v": px, "confidence": [0,1]}.
inline LandmarkStream landmarks_from_json(const json& j, const std::string& source = "landmarks") {
  if (!j.is_array()) throw Error(ErrorCode::kParse, source + ": expected an array");
  LandmarkStream stream;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string ctx = source + "[" + std::to_string(i) + "]";
    LandmarkFrame f;
    f.frame_index = detail::get<std::int64_t>(j[i], "frame", ctx);
    f.wrist.u = detail::get<double>(j[i], "u", ctx);
    f.wrist.v = detail::get<double>(j[i], "v", ctx);
    f.confidence = detail::get_or<double>(j[i], "confidence", 1.0, ctx);
    stream.frames.push_back(f);
  }
  check_stream(stream);
  return stream;
}

inline json to_json(const LandmarkStream& stream) {
  json out = json::array();
  for (const auto& f : stream.frames) {
    out.push_back(json{{"frame", f.frame_index}, {"u", f.wrist.u}, {"v", f.wrist.v}, {"confidence", f.confidence}});
  }
  return out;
}

inline LandmarkStream load_landmarks(const std::string& path) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    return landmarks_from_json(read_json_file(path), path);
  }
  return parse_landmark_csv(read_text_file(path), path);
}

}  // namespace mimicry::keyframes
