#include "handsynth/pose_library.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "handsynth/errors.hpp"
#include "handsynth/json_util.hpp"

namespace handsynth {
namespace {

// ---------------------------------------------------------------------------
// Pose authoring. Hand shapes are described with a handful of intuitive
// scalars and baked down to per-joint quaternions once, at library build time.
// ---------------------------------------------------------------------------

struct FingerShape {
  double curl = 0.0;      // 0 straight .. 1 fully curled
  double splay = 0.0;     // degrees, positive = toward the thumb side
  double claw = 0.0;      // shifts curl from the knuckle toward the distal joints
  double mcp_bias = 0.0;  // extra knuckle flexion in degrees; negative hyperextends
};

struct ThumbShape {
  double curl = 0.2;    // 0 straight .. 1 wrapped across the palm
  double splay = 14.0;  // degrees away from the index ray (negative = tucked inward)
  double lift = 0.0;    // degrees about the palm plane; negative drops palmward
};

struct HandShape {
  ThumbShape thumb;
  FingerShape fingers[4];  // index, middle, ring, pinky
  EulerXYZ wrist{0.0, 0.0, 0.0};  // degrees here; converted when baked
};

Quat quat_x(double rad) { return Quat::from_axis_angle({1.0, 0.0, 0.0}, rad); }
Quat quat_z(double rad) { return Quat::from_axis_angle({0.0, 0.0, 1.0}, rad); }

// Flexion curls a finger toward the palm, which faces -Z on the rest
// template, so flexion is a negative rotation about local X.
Quat finger_joint(double flex_deg, double splay_deg = 0.0) {
  return (quat_z(deg_to_rad(splay_deg)) * quat_x(deg_to_rad(-flex_deg))).normalized();
}

// The thumb column points diagonally (+X, +Y); its flexion axis lies in the
// palm plane perpendicular to the column so positive angles sweep the thumb
// across the palm face.
const Vec3 kThumbFlexAxis = normalized(Vec3{-0.027, 0.021, 0.0});

Quat thumb_flex(double deg) { return Quat::from_axis_angle(kThumbFlexAxis, deg_to_rad(deg)); }

Pose bake(const HandShape& s) {
  Pose p = Pose::identity();

  constexpr int kChainBase[4] = {kIndexMcp, kMiddleMcp, kRingMcp, kPinkyMcp};
  for (int f = 0; f < 4; ++f) {
    const FingerShape& fs = s.fingers[f];
    const double mcp = 68.0 * fs.curl * (1.0 - 0.55 * fs.claw) + fs.mcp_bias;
    const double pip = 95.0 * fs.curl * (1.0 + 0.18 * fs.claw);
    const double dip = 62.0 * fs.curl * (1.0 + 0.35 * fs.claw);
    const int base = kChainBase[f];
    p.rotations[base] = finger_joint(mcp, fs.splay);
    p.rotations[base + 1] = finger_joint(pip);
    p.rotations[base + 2] = finger_joint(dip);
  }

  const ThumbShape& t = s.thumb;
  Quat cmc = quat_z(deg_to_rad(-t.splay)) * quat_x(deg_to_rad(t.lift)) * thumb_flex(42.0 * t.curl);
  p.rotations[kThumbCmc] = cmc.normalized();
  p.rotations[kThumbMcp] = thumb_flex(52.0 * t.curl).normalized();
  p.rotations[kThumbIp] = thumb_flex(78.0 * t.curl).normalized();

  p.wrist_rotation = from_euler_xyz({deg_to_rad(s.wrist.rx), deg_to_rad(s.wrist.ry),
                                     deg_to_rad(s.wrist.rz)});
  return p;
}

HandShape uniform_shape(double curl, ThumbShape thumb) {
  HandShape s;
  s.thumb = thumb;
  for (auto& f : s.fingers) f.curl = curl;
  return s;
}

// Natural-looking splay fans the fingers outward from the middle ray.
void fan(HandShape& s, double amount) {
  const double scale[4] = {1.0, 0.3, -0.4, -1.1};
  for (int i = 0; i < 4; ++i) s.fingers[i].splay = amount * scale[i];
}

LibraryEntry static_entry(std::string name, std::string affect, const HandShape& shape) {
  LibraryEntry e;
  e.name = std::move(name);
  e.affect = std::move(affect);
  e.kind = EntryKind::Static;
  e.clip.name = e.name;
  e.clip.keyframes.emplace_back(0.0, bake(shape));
  return e;
}

// A wave: the shape is held while the wrist oscillates about the given axes.
LibraryEntry wave_entry(std::string name, std::string affect, HandShape shape, double roll_deg,
                        double yaw_deg, double duration) {
  LibraryEntry e;
  e.name = std::move(name);
  e.affect = std::move(affect);
  e.kind = EntryKind::Motion;
  e.clip.name = e.name;
  const int kFrames = 5;
  for (int k = 0; k < kFrames; ++k) {
    const double t = duration * k / (kFrames - 1);
    const double phase = (k % 2 == 0) ? -1.0 : 1.0;
    HandShape frame = shape;
    frame.wrist.rz += phase * roll_deg;
    frame.wrist.ry += phase * yaw_deg;
    e.clip.keyframes.emplace_back(t, bake(frame));
  }
  return e;
}

std::vector<LibraryEntry> build_entries() {
  std::vector<LibraryEntry> out;
  out.reserve(44);
  auto add = [&out](LibraryEntry e) { out.push_back(std::move(e)); };

  {
    HandShape s = uniform_shape(0.28, {.curl = 0.25, .splay = 16});
    fan(s, 3.0);
    add(static_entry("Neutral relaxed", "Baseline state; calm or disengaged", s));
  }
  {
    HandShape s = uniform_shape(0.05, {.curl = 0.1, .splay = 10});
    add(static_entry("Neutral rigid", "Slight tension; discomfort or guardedness", s));
  }
  {
    // Index and middle crossed; the rest folded in.
    HandShape s;
    s.fingers[0] = {.curl = 0.06, .splay = -4.0};
    s.fingers[1] = {.curl = 0.14, .splay = 9.0};
    s.fingers[2] = {.curl = 0.85};
    s.fingers[3] = {.curl = 0.9};
    s.thumb = {.curl = 0.6, .splay = 2.0, .lift = -10.0};
    add(static_entry("Good luck", "Hopeful anticipation, anxious optimism", s));
  }
  {
    HandShape s;
    s.fingers[0] = {.curl = 0.03};
    s.fingers[1] = {.curl = 0.75};
    s.fingers[2] = {.curl = 0.93};
    s.fingers[3] = {.curl = 0.95};
    s.thumb = {.curl = 0.02, .splay = 30.0, .lift = 10.0};
    add(static_entry("Fake gun", "Playful or mildly confrontational, context-dependent", s));
  }
  {
    // Split salute: index+middle together, ring+pinky together, wide gap.
    HandShape s;
    s.fingers[0] = {.curl = 0.04, .splay = 8.0};
    s.fingers[1] = {.curl = 0.04, .splay = 6.0};
    s.fingers[2] = {.curl = 0.04, .splay = -9.0};
    s.fingers[3] = {.curl = 0.04, .splay = -11.0};
    s.thumb = {.curl = 0.05, .splay = 24.0};
    add(static_entry("Star Trek", "Cultural symbol; peace, formality, or sci-fi fandom", s));
  }
  {
    HandShape s = uniform_shape(0.45, {.curl = 0.0, .splay = 30.0});
    add(static_entry("Extended thumb", "Request, openness, or informal friendliness", s));
  }
  add(static_entry("Thumb up relaxed", "Casual approval, positive but informal",
                   uniform_shape(0.75, {.curl = 0.0, .splay = 28.0})));
  add(static_entry("Thumb up normal", "Agreement or encouragement",
                   uniform_shape(0.88, {.curl = 0.0, .splay = 30.0})));
  add(static_entry("Thumb up rigid", "Strong approval or assertive positivity",
                   uniform_shape(1.0, {.curl = 0.0, .splay = 32.0})));
  add(static_entry("Thumb tuck normal", "Passive stance; possibly insecure",
                   uniform_shape(0.5, {.curl = 0.55, .splay = -12.0, .lift = -18.0})));
  add(static_entry("Thumb tuck rigid", "Guarded or defensive self-comfort",
                   uniform_shape(0.8, {.curl = 0.65, .splay = -14.0, .lift = -20.0})));
  {
    // Thumb and index form the ring; remaining fingers splayed upward.
    HandShape s;
    s.fingers[0] = {.curl = 0.78, .splay = 2.0};
    s.fingers[1] = {.curl = 0.12, .splay = 2.0};
    s.fingers[2] = {.curl = 0.08, .splay = -4.0};
    s.fingers[3] = {.curl = 0.06, .splay = -10.0};
    s.thumb = {.curl = 0.55, .splay = 4.0, .lift = -16.0};
    add(static_entry("A-okay", "Approval, everything is fine", s));
    s.wrist = {0.0, 0.0, 24.0};
    add(static_entry("A-okay upright", "Assertive or emphatic approval", s));
  }
  {
    HandShape s;
    s.fingers[0] = {.curl = 0.9};
    s.fingers[1] = {.curl = 0.95};
    s.fingers[2] = {.curl = 0.95};
    s.fingers[3] = {.curl = 0.06, .splay = -16.0};
    s.thumb = {.curl = 0.0, .splay = 34.0};
    add(static_entry("Surfer (shaka)", "Relaxed, friendly, laid-back", s));
  }
  {
    HandShape rocker;
    rocker.fingers[0] = {.curl = 0.04, .splay = 6.0};
    rocker.fingers[1] = {.curl = 0.93};
    rocker.fingers[2] = {.curl = 0.95};
    rocker.fingers[3] = {.curl = 0.05, .splay = -13.0};
    rocker.thumb = {.curl = 0.5, .splay = -2.0, .lift = -12.0};
    add(static_entry("Rocker", "Enthusiasm, rebelliousness (rock culture)", rocker));
    HandShape front = rocker;
    front.wrist = {-28.0, 0.0, 0.0};
    add(static_entry("Rocker front", "Expressive engagement or intensity", front));
    HandShape back = rocker;
    back.wrist = {22.0, 160.0, 0.0};
    add(static_entry("Rocker back", "Dismissive or distanced gesture", back));
  }
  add(static_entry("Fist", "Determination, strength, or readiness",
                   uniform_shape(1.0, {.curl = 0.7, .splay = -8.0, .lift = -15.0})));
  {
    HandShape s = uniform_shape(1.0, {.curl = 0.78, .splay = -9.0, .lift = -16.0});
    for (auto& f : s.fingers) f.mcp_bias = 6.0;
    add(static_entry("Fist rigid", "Aggression, anger, or tension", s));
  }
  {
    // Flat jaw: fingers straight and together, thumb opposed underneath.
    HandShape s = uniform_shape(0.1, {.curl = 0.15, .splay = 8.0, .lift = -35.0});
    add(static_entry("Alligator closed", "Playful or aggressive storytelling", s));
  }
  {
    HandShape s;
    s.fingers[0] = {.curl = 0.02};
    s.fingers[1] = {.curl = 0.9};
    s.fingers[2] = {.curl = 0.93};
    s.fingers[3] = {.curl = 0.93};
    s.thumb = {.curl = 0.55, .splay = -4.0, .lift = -12.0};
    add(static_entry("One count", "pointer finger", s));
    s.fingers[1] = {.curl = 0.02, .splay = -6.0};
    s.fingers[0].splay = 9.0;
    add(static_entry("Two count", "Peace sign, V", s));
    s.fingers[2] = {.curl = 0.02, .splay = -10.0};
    s.fingers[1].splay = 0.0;
    s.fingers[0].splay = 10.0;
    add(static_entry("Three count", "Number three", s));
    s.fingers[3] = {.curl = 0.03, .splay = -12.0};
    s.fingers[2].splay = -4.0;
    s.thumb = {.curl = 0.6, .splay = -6.0, .lift = -18.0};
    add(static_entry("Four count", "Number four", s));
    s.thumb = {.curl = 0.0, .splay = 26.0};
    add(static_entry("Five count", "Open palm, displaying openness", s));
  }
  {
    // Thumb-to-fingertip precision grips.
    auto tip_pose = [](int finger, double finger_curl, double thumb_curl) {
      HandShape s;
      for (int i = 0; i < 4; ++i) s.fingers[i] = {.curl = 0.1};
      fan(s, 5.0);
      s.fingers[finger].curl = finger_curl;
      s.thumb = {.curl = thumb_curl, .splay = 6.0, .lift = -22.0};
      return s;
    };
    add(static_entry("Index tip", "Precision or pointing focus", tip_pose(0, 0.55, 0.5)));
    add(static_entry("Middle tip", "Emphasis or clarity in focus", tip_pose(1, 0.6, 0.55)));
    add(static_entry("Ring tip", "Delicacy or gentleness", tip_pose(2, 0.65, 0.6)));
    add(static_entry("Pinky tip", "Subtlety or playfulness", tip_pose(3, 0.7, 0.65)));
  }
  {
    HandShape s = uniform_shape(0.15, {.curl = 0.1, .splay = 22.0});
    fan(s, 4.0);
    s.wrist = {0.0, 175.0, 0.0};
    add(static_entry("Palm up", "Openness, offering, or request", s));
  }
  {
    HandShape s = uniform_shape(0.2, {.curl = 0.15, .splay = 22.0});
    fan(s, 8.0);
    add(static_entry("Finger spread relaxed", "Casual openness or readiness", s));
    s = uniform_shape(0.08, {.curl = 0.05, .splay = 27.0});
    fan(s, 11.0);
    add(static_entry("Finger spread normal", "Attention or mild alertness", s));
    s = uniform_shape(0.0, {.curl = 0.0, .splay = 32.0});
    fan(s, 14.0);
    for (auto& f : s.fingers) f.mcp_bias = -4.0;
    add(static_entry("Finger spread rigid", "High tension or strong assertiveness", s));
  }
  {
    // Fingertips bunched against the thumb, hand tipped up.
    HandShape s = uniform_shape(0.42, {.curl = 0.5, .splay = 0.0, .lift = -26.0});
    const double pinch[4] = {-6.0, -1.0, 4.0, 10.0};
    for (int i = 0; i < 4; ++i) s.fingers[i].splay = pinch[i];
    s.wrist = {-20.0, 0.0, 0.0};
    add(static_entry("Capisce", "Inquiry, emphasis, or theatrical disbelief", s));
  }
  {
    HandShape s = uniform_shape(0.55, {.curl = 0.45, .splay = 18.0});
    fan(s, 9.0);
    for (auto& f : s.fingers) f.claw = 0.8;
    add(static_entry("Claws", "Aggression, frustration, or drama", s));
  }
  {
    HandShape s;
    const double curls[4] = {0.02, 0.06, 0.1, 0.14};
    for (int i = 0; i < 4; ++i) s.fingers[i].curl = curls[i];
    fan(s, 13.0);
    s.thumb = {.curl = 0.0, .splay = 30.0};
    s.wrist = {0.0, 0.0, 18.0};
    add(static_entry("Peacock", "Display, pride, or flamboyance", s));
  }
  {
    HandShape s = uniform_shape(0.35, {.curl = 0.3, .splay = 12.0});
    for (auto& f : s.fingers) f.splay *= 0.2;
    s.wrist = {0.0, 170.0, 0.0};
    add(static_entry("Cup", "Nurturing, receiving, or inquiry", s));
  }
  {
    // Gripping an imagined skull from above.
    HandShape s = uniform_shape(0.5, {.curl = 0.4, .splay = 20.0, .lift = -10.0});
    fan(s, 12.0);
    s.wrist = {-55.0, 0.0, 0.0};
    add(static_entry("Shakespeare's Yorick", "Reflective, dramatic, sorrowful", s));
  }
  {
    HandShape s = uniform_shape(0.7, {.curl = 0.5, .splay = 10.0});
    fan(s, 4.0);
    for (auto& f : s.fingers) f.claw = 0.5;
    s.wrist = {-15.0, 0.0, 0.0};
    add(static_entry("Dinosaur", "Playful, exaggerated, humorous", s));
  }
  {
    HandShape s;
    s.fingers[0] = {.curl = 0.93};
    s.fingers[1] = {.curl = 0.03};
    s.fingers[2] = {.curl = 0.93};
    s.fingers[3] = {.curl = 0.95};
    s.thumb = {.curl = 0.6, .splay = -4.0, .lift = -14.0};
    add(static_entry("Middle finger", "Aggression, rejection, or disrespect", s));
  }
  {
    // Index part-curled onto an imagined surface, other fingers folded away.
    HandShape s;
    s.fingers[0] = {.curl = 0.35, .claw = 0.6};
    s.fingers[1] = {.curl = 0.75};
    s.fingers[2] = {.curl = 0.8};
    s.fingers[3] = {.curl = 0.82};
    s.thumb = {.curl = 0.45, .splay = 4.0, .lift = -15.0};
    add(static_entry("Pointer tip", "Directed attention or instructive focus", s));
  }

  {
    HandShape open = uniform_shape(0.18, {.curl = 0.12, .splay = 20.0});
    fan(open, 7.0);
    add(wave_entry("Relaxed wave", "Friendly or casual greeting/farewell", open, 22.0, 0.0, 1.2));
    HandShape fist = uniform_shape(1.0, {.curl = 0.7, .splay = -8.0, .lift = -15.0});
    add(wave_entry("Fist wave", "Unity or playful strength", fist, 18.0, 0.0, 1.2));
    HandShape stiff = uniform_shape(0.06, {.curl = 0.04, .splay = 26.0});
    fan(stiff, 10.0);
    add(wave_entry("Prom wave", "Formality, politeness, or sarcasm", stiff, 12.0, 10.0, 1.6));
  }

  return out;
}

}  // namespace

Pose AnimationClip::evaluate(double time) const {
  if (keyframes.empty()) throw std::invalid_argument("cannot evaluate an empty clip");
  if (time <= keyframes.front().first) return keyframes.front().second;
  if (time >= keyframes.back().first) return keyframes.back().second;
  size_t hi = 1;
  while (keyframes[hi].first < time) ++hi;
  const auto& [t0, p0] = keyframes[hi - 1];
  const auto& [t1, p1] = keyframes[hi];
  const double span = t1 - t0;
  const double u = span > 0.0 ? (time - t0) / span : 0.0;
  return interpolate(p0, p1, u);
}

PoseLibrary PoseLibrary::builtin() {
  PoseLibrary lib;
  lib.entries_ = build_entries();
  return lib;
}

bool PoseLibrary::contains(const std::string& name) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const LibraryEntry& e) { return e.name == name; });
}

const LibraryEntry& PoseLibrary::entry(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return e;
  }
  throw std::out_of_range("pose library has no entry named '" + name + "'");
}

PoseKeyframe PoseLibrary::get_pose(const std::string& name) const {
  const LibraryEntry& e = entry(name);
  return {e.name, e.clip.keyframes.front().second, e.affect};
}

Pose PoseLibrary::evaluate(const LibraryEntry& e, double u) const {
  if (u < 0.0 || u > 1.0) throw std::invalid_argument("progress must lie in [0, 1]");
  if (e.kind == EntryKind::Static) return e.clip.keyframes.front().second;
  return e.clip.evaluate(e.clip.keyframes.front().first + u * e.clip.duration());
}

size_t PoseLibrary::static_count() const {
  return static_cast<size_t>(std::count_if(entries_.begin(), entries_.end(), [](const auto& e) {
    return e.kind == EntryKind::Static;
  }));
}

size_t PoseLibrary::motion_count() const { return size() - static_count(); }

std::vector<std::string> PoseLibrary::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.name);
  return out;
}

void PoseLibrary::add(LibraryEntry e) {
  if (contains(e.name)) throw std::invalid_argument("duplicate pose name: " + e.name);
  if (e.clip.keyframes.empty()) throw std::invalid_argument("entry must have keyframes: " + e.name);
  entries_.push_back(std::move(e));
}

Pose interpolate(const Pose& a, const Pose& b, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("interpolation parameter outside [0, 1]");
  Pose out;
  for (int j = 0; j < kNumJoints; ++j) out.rotations[j] = slerp(a.rotations[j], b.rotations[j], t);
  out.wrist_rotation = slerp(a.wrist_rotation, b.wrist_rotation, t);
  out.wrist_translation = a.wrist_translation * (1.0 - t) + b.wrist_translation * t;
  return out;
}

std::vector<Pose> sample_animation(const PoseLibrary& lib, const LibraryEntry& a,
                                   const LibraryEntry& b, double frame_rate, double duration) {
  if (frame_rate <= 0.0 || duration <= 0.0) {
    throw std::invalid_argument("frame_rate and duration must be positive");
  }
  const int frames = static_cast<int>(std::floor(frame_rate * duration));
  if (frames < 1) throw std::invalid_argument("frame_rate * duration yields no frames");
  std::vector<Pose> out;
  out.reserve(static_cast<size_t>(frames));
  for (int k = 0; k < frames; ++k) {
    const double u = frames > 1 ? static_cast<double>(k) / (frames - 1) : 0.0;
    out.push_back(interpolate(lib.evaluate(a, u), lib.evaluate(b, u), u));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {
constexpr int kPoseSchemaVersion = 1;

json pose_to_json(const Pose& p) {
  json j;
  j["rotations"] = json::array();
  for (const Quat& q : p.rotations) j["rotations"].push_back(q);
  j["wrist_rotation"] = p.wrist_rotation;
  j["wrist_translation"] = p.wrist_translation;
  return j;
}

Pose pose_from_json(const json& j) {
  Pose p;
  const json& rots = j.at("rotations");
  if (!rots.is_array() || rots.size() != kNumJoints) {
    throw SchemaError("pose rotations must be an array of 21 quaternions");
  }
  for (int i = 0; i < kNumJoints; ++i) p.rotations[i] = rots[i].get<Quat>();
  p.wrist_rotation = require<Quat>(j, "wrist_rotation");
  p.wrist_translation = require<Vec3>(j, "wrist_translation");
  return p;
}
}  // namespace

void PoseLibrary::save(const std::string& path) const {
  json j;
  j["schema_version"] = kPoseSchemaVersion;
  j["entries"] = json::array();
  for (const auto& e : entries_) {
    json je;
    je["name"] = e.name;
    je["affect"] = e.affect;
    je["kind"] = e.kind == EntryKind::Static ? "static" : "motion";
    je["keyframes"] = json::array();
    for (const auto& [t, pose] : e.clip.keyframes) {
      json jk = pose_to_json(pose);
      jk["time"] = t;
      je["keyframes"].push_back(std::move(jk));
    }
    j["entries"].push_back(std::move(je));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

PoseLibrary PoseLibrary::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open pose library: " + path);
  json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("pose library parse error: ") + e.what());
  }
  check_schema_version(j, kPoseSchemaVersion, "pose library");
  if (!j.contains("entries") || !j["entries"].is_array()) {
    throw SchemaError("pose library: missing entries array");
  }
  PoseLibrary lib;
  for (const json& je : j["entries"]) {
    LibraryEntry e;
    e.name = require<std::string>(je, "name");
    e.affect = require<std::string>(je, "affect");
    const std::string kind = require<std::string>(je, "kind");
    if (kind == "static") {
      e.kind = EntryKind::Static;
    } else if (kind == "motion") {
      e.kind = EntryKind::Motion;
    } else {
      throw SchemaError("pose library: unknown entry kind '" + kind + "'");
    }
    e.clip.name = e.name;
    if (!je.contains("keyframes") || !je["keyframes"].is_array() || je["keyframes"].empty()) {
      throw SchemaError("pose library: entry '" + e.name + "' has no keyframes");
    }
    double prev = -std::numeric_limits<double>::infinity();
    for (const json& jk : je["keyframes"]) {
      const double t = require<double>(jk, "time");
      if (t <= prev) throw SchemaError("pose library: keyframe times must increase");
      prev = t;
      e.clip.keyframes.emplace_back(t, pose_from_json(jk));
    }
    lib.add(std::move(e));
  }
  return lib;
}

}  // namespace handsynth
