#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "handsynth/dataset.hpp"

namespace handsynth {

struct Prediction {
  uint64_t id = 0;
  std::array<Vec2, kNumJoints> keypoints;
};

struct PredictionSet {
  std::string source = "unknown";
  std::vector<Prediction> predictions;
};

// One JSON record per line: {"id": N, "keypoints": [[x, y] x 21]}, with an
// optional leading {"type": "header", "source": ...} line. Parse errors name
// the offending line number.
PredictionSet read_predictions(const std::string& path);
void write_predictions(const PredictionSet& preds, const std::string& path);

struct EvalOptions {
  double pck_threshold = 0.2;  // fraction of max(bbox_w, bbox_h)
  int auc_steps = 20;          // thresholds k/steps * auc_max, k = 1..steps
  double auc_max = 0.2;
  bool visible_only = false;   // drop keypoints whose ground truth is occluded
};

// A keypoint is correct iff ||pred - gt|| <= threshold * max(bbox_w, bbox_h)
// of its image. Mean over every keypoint of every image. Throws
// std::invalid_argument on a degenerate (w = h = 0) bbox or misaligned sizes.
double pck(const std::vector<std::array<Vec2, kNumJoints>>& preds,
           const std::vector<std::array<Vec2, kNumJoints>>& gts, const std::vector<Bbox>& bboxes,
           double threshold);

// Mean Euclidean distance in pixels over all keypoints.
double epe(const std::vector<std::array<Vec2, kNumJoints>>& preds,
           const std::vector<std::array<Vec2, kNumJoints>>& gts);

// Mean of pck over the options' evenly spaced threshold grid.
double auc(const std::vector<std::array<Vec2, kNumJoints>>& preds,
           const std::vector<std::array<Vec2, kNumJoints>>& gts, const std::vector<Bbox>& bboxes,
           const EvalOptions& options = {});

struct EvalReport {
  std::string group;  // "all", "tone:3", "gender:female"
  uint64_t n_images = 0;
  double epe = 0.0;
  double auc = 0.0;
  std::map<double, double> pck_at;   // threshold -> value (the headline one)
  std::vector<double> grid;          // AUC threshold grid, recorded for comparability
  std::string source;

  json to_json() const;
};

// One report per group; group_by is "all", "tone", or "gender". Throws
// SchemaError when predictions reference unknown ids or miss manifest
// records (the message lists the missing ids).
std::vector<EvalReport> stratified_report(const PredictionSet& preds,
                                          const DatasetManifest& manifest,
                                          const std::string& group_by,
                                          const EvalOptions& options = {});

std::string reports_to_text(const std::vector<EvalReport>& reports);
json reports_to_json(const std::vector<EvalReport>& reports);

}  // namespace handsynth
