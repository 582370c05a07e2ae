#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "handsynth/augment.hpp"
#include "handsynth/config.hpp"
#include "handsynth/pose_library.hpp"
#include "handsynth/renderer.hpp"

namespace handsynth {

constexpr int kManifestSchemaVersion = 1;

struct ManifestHeader {
  std::string preset = "custom";  // small | medium | large | desk | custom
  uint64_t n = 0;                 // declared record count
  uint64_t master_seed = 0;
  std::string split = "train";
  json config;  // full generation config, embedded for replay
};

struct ManifestRecord {
  uint64_t id = 0;
  std::string image;  // path relative to the manifest's directory
  Annotation annotation;
  std::optional<AugmentationPlan> plan;  // present once augmented
};

struct DatasetManifest {
  ManifestHeader header;
  std::vector<ManifestRecord> records;
};

// Named dataset sizes; throws std::invalid_argument for unknown names.
uint64_t preset_size(const std::string& preset);

// Manifest file format: JSON-lines, a header line followed by one record
// per line. Unknown schema versions are rejected.
void write_manifest(const DatasetManifest& manifest, const std::string& path);
DatasetManifest read_manifest(const std::string& path);

json header_to_json(const ManifestHeader& h);
json record_to_json(const ManifestRecord& r);
ManifestRecord record_from_json(const json& j);

struct GenerateOptions {
  uint64_t master_seed = 0;
  uint64_t n = 0;
  std::string preset = "custom";
  std::string out_dir;
  int threads = 1;
  bool resume = true;  // pick up a matching interrupted run
  std::function<void(uint64_t done, uint64_t total)> progress;
};

// Balanced generation: sample i lands in (gender, tone) cell i % (2*tones),
// so cells differ by at most one; all randomness flows from per-sample
// sub-seeds, making output independent of the thread count. Renders every
// sample, writes images plus an ordered manifest, and (optionally, per
// config.augment_inline) applies an augmentation pass inline.
DatasetManifest generate(const GenerationConfig& config, const GenerateOptions& options);

struct BalanceReport {
  uint64_t total = 0;
  std::map<std::string, uint64_t> cell_counts;  // "gender/tone_index"
  std::map<std::string, uint64_t> handedness_counts;
  std::map<std::string, uint64_t> pose_counts;  // by pose_a
  double max_cell_deviation = 0.0;              // |count - n/cells| in samples
  std::vector<std::string> flags;               // cells violating the ±1 rule

  json to_json() const;
  std::string to_text() const;
};

// Exact counts plus flags for any (gender, tone) cell whose count is not
// floor(n/cells) or ceil(n/cells) of the header's declared n.
BalanceReport audit_balance(const DatasetManifest& manifest);

// Replaces every image with its augmented version (atomic per image via
// write-to-temp + rename), logs each plan into the manifest, and rewrites
// the manifest. Deterministic in (manifest, pass_seed).
void apply_in_place_pass(const std::string& manifest_path, uint64_t pass_seed, int threads = 1);

// Masks one half of the keypoint bounding box, split through its center
// along a seeded axis; the annotation is intentionally left untouched.
// Fill is mid-gray, or the re-projected environment when config is given
// with mask_fill == "env". Throws std::invalid_argument when the bbox is
// empty or no keypoint lies in frame.
Image perturb_half(const Image& image, const Annotation& annotation, uint64_t seed,
                   const GenerationConfig* config = nullptr,
                   const PoseLibrary* library = nullptr);

// Integer pixel range [begin, end) masked by perturb_half for a given bbox
// and axis, exposed so tests can pin the exact-half rule.
void perturb_extent(const Bbox& bbox, bool vertical_split, bool first_side, int resolution,
                    int& x0, int& x1, int& y0, int& y1);

}  // namespace handsynth
