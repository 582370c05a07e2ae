#pragma once

#include <string>
#include <utility>
#include <vector>

#include "handsynth/skeleton.hpp"

namespace handsynth {

struct PoseKeyframe {
  std::string name;
  Pose pose;
  std::string affect_label;
};

struct AnimationClip {
  std::string name;
  std::vector<std::pair<double, Pose>> keyframes;  // (time seconds, pose), strictly increasing

  double duration() const {
    return keyframes.empty() ? 0.0 : keyframes.back().first - keyframes.front().first;
  }

  // Piecewise spherical interpolation, clamped to the clip's time range.
  // Throws std::invalid_argument on an empty clip.
  Pose evaluate(double time) const;
};

enum class EntryKind { Static, Motion };

struct LibraryEntry {
  std::string name;
  std::string affect;
  EntryKind kind = EntryKind::Static;
  AnimationClip clip;  // statics hold a single keyframe at t = 0
};

// The named pose/motion set. Entries are immutable after construction.
class PoseLibrary {
 public:
  static PoseLibrary builtin();
  static PoseLibrary load(const std::string& path);
  void save(const std::string& path) const;

  bool contains(const std::string& name) const;
  const LibraryEntry& entry(const std::string& name) const;  // throws std::out_of_range
  const LibraryEntry& entry(size_t index) const { return entries_.at(index); }

  // The authored keyframe for a named entry (first keyframe for motions).
  PoseKeyframe get_pose(const std::string& name) const;

  // Entry state at normalized progress u in [0,1]: statics return their
  // pose, motions evaluate their clip at u * duration.
  Pose evaluate(const LibraryEntry& e, double u) const;

  size_t size() const { return entries_.size(); }
  size_t static_count() const;
  size_t motion_count() const;
  std::vector<std::string> names() const;

  void add(LibraryEntry e);

 private:
  std::vector<LibraryEntry> entries_;
};

// Per-joint spherical interpolation of rotations and linear interpolation of
// the wrist translation; renormalized. Throws std::invalid_argument when t
// is outside [0, 1].
Pose interpolate(const Pose& a, const Pose& b, double t);

// floor(frame_rate * duration) poses along the a->b trajectory, with motion
// entries evaluated at the same normalized progress. Endpoints included.
std::vector<Pose> sample_animation(const PoseLibrary& lib, const LibraryEntry& a,
                                   const LibraryEntry& b, double frame_rate, double duration);

}  // namespace handsynth
