#include "handsynth/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace handsynth {

namespace {

void check_aligned(size_t a, size_t b) {
  if (a != b) throw std::invalid_argument("prediction/ground-truth size mismatch");
}

double bbox_side(const Bbox& b) {
  const double side = std::max(b.w, b.h);
  if (side <= 0.0) throw std::invalid_argument("degenerate bbox (w = h = 0)");
  return side;
}

}  // namespace

double pck(const std::vector<std::array<Vec2, kNumJoints>>& preds,
           const std::vector<std::array<Vec2, kNumJoints>>& gts, const std::vector<Bbox>& bboxes,
           double threshold) {
  check_aligned(preds.size(), gts.size());
  check_aligned(preds.size(), bboxes.size());
  if (preds.empty()) return 0.0;
  uint64_t correct = 0, total = 0;
  for (size_t i = 0; i < preds.size(); ++i) {
    const double limit = threshold * bbox_side(bboxes[i]);
    for (int k = 0; k < kNumJoints; ++k) {
      const double err = norm(preds[i][k] - gts[i][k]);
      correct += err <= limit ? 1 : 0;
      ++total;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(total);
}

double epe(const std::vector<std::array<Vec2, kNumJoints>>& preds,
           const std::vector<std::array<Vec2, kNumJoints>>& gts) {
  check_aligned(preds.size(), gts.size());
  if (preds.empty()) return 0.0;
  double sum = 0.0;
  for (size_t i = 0; i < preds.size(); ++i) {
    for (int k = 0; k < kNumJoints; ++k) sum += norm(preds[i][k] - gts[i][k]);
  }
  return sum / static_cast<double>(preds.size() * kNumJoints);
}

double auc(const std::vector<std::array<Vec2, kNumJoints>>& preds,
           const std::vector<std::array<Vec2, kNumJoints>>& gts, const std::vector<Bbox>& bboxes,
           const EvalOptions& options) {
  if (options.auc_steps < 1) throw std::invalid_argument("auc_steps must be >= 1");
  double sum = 0.0;
  for (int k = 1; k <= options.auc_steps; ++k) {
    sum += pck(preds, gts, bboxes, options.auc_max * k / options.auc_steps);
  }
  return sum / options.auc_steps;
}

PredictionSet read_predictions(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open predictions: " + path);
  PredictionSet set;
  std::string line;
  size_t line_no = 0;
  std::set<uint64_t> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError("predictions line " + std::to_string(line_no) + ": " + e.what());
    }
    if (j.contains("type") && j["type"] == "header") {
      set.source = value_or<std::string>(j, "source", set.source);
      continue;
    }
    Prediction p;
    try {
      p.id = require<uint64_t>(j, "id");
      const json& kp = j.at("keypoints");
      if (!kp.is_array() || kp.size() != kNumJoints) {
        throw SchemaError("keypoints must be an array of 21 [x, y] pairs");
      }
      for (int k = 0; k < kNumJoints; ++k) {
        if (!kp[k].is_array() || kp[k].size() != 2) {
          throw SchemaError("keypoints must be an array of 21 [x, y] pairs");
        }
        p.keypoints[k] = {kp[k][0].get<double>(), kp[k][1].get<double>()};
      }
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError("predictions line " + std::to_string(line_no) + ": " + e.what());
    } catch (const SchemaError& e) {
      throw SchemaError("predictions line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!seen.insert(p.id).second) {
      throw SchemaError("predictions line " + std::to_string(line_no) + ": duplicate id " +
                        std::to_string(p.id));
    }
    set.predictions.push_back(p);
  }
  return set;
}

void write_predictions(const PredictionSet& preds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << json{{"type", "header"}, {"source", preds.source}}.dump() << "\n";
  for (const Prediction& p : preds.predictions) {
    json kp = json::array();
    for (const Vec2& v : p.keypoints) kp.push_back(json::array({v.x, v.y}));
    out << json{{"id", p.id}, {"keypoints", std::move(kp)}}.dump() << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<EvalReport> stratified_report(const PredictionSet& preds,
                                          const DatasetManifest& manifest,
                                          const std::string& group_by,
                                          const EvalOptions& options) {
  if (group_by != "all" && group_by != "tone" && group_by != "gender") {
    throw std::invalid_argument("group_by must be all, tone, or gender");
  }

  std::map<uint64_t, const Prediction*> by_id;
  for (const Prediction& p : preds.predictions) by_id[p.id] = &p;

  std::vector<uint64_t> missing;
  for (const ManifestRecord& r : manifest.records) {
    if (!by_id.count(r.id)) missing.push_back(r.id);
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "predictions missing for " << missing.size() << " record(s):";
    for (size_t i = 0; i < missing.size() && i < 20; ++i) msg << " " << missing[i];
    if (missing.size() > 20) msg << " ...";
    throw SchemaError(msg.str());
  }
  std::set<uint64_t> record_ids;
  for (const ManifestRecord& r : manifest.records) record_ids.insert(r.id);
  for (const Prediction& p : preds.predictions) {
    if (!record_ids.count(p.id)) {
      throw SchemaError("prediction id " + std::to_string(p.id) + " has no manifest record");
    }
  }

  // Partition records into groups.
  std::map<std::string, std::vector<const ManifestRecord*>> groups;
  for (const ManifestRecord& r : manifest.records) {
    std::string key = "all";
    if (group_by == "tone") {
      key = "tone:" + std::to_string(r.annotation.meta.tone_index);
    } else if (group_by == "gender") {
      key = std::string("gender:") + to_string(r.annotation.meta.gender);
    }
    groups[key].push_back(&r);
  }

  std::vector<double> grid;
  for (int k = 1; k <= options.auc_steps; ++k) {
    grid.push_back(options.auc_max * k / options.auc_steps);
  }

  std::vector<EvalReport> reports;
  for (const auto& [key, records] : groups) {
    // Flatten to per-keypoint errors so visible_only can truly exclude
    // occluded keypoints rather than zeroing them.
    std::vector<double> err, norm_err;
    for (const ManifestRecord* r : records) {
      const Prediction& pr = *by_id.at(r->id);
      const double side = bbox_side(r->annotation.bbox);
      for (int k = 0; k < kNumJoints; ++k) {
        if (options.visible_only && !r->annotation.visible[k]) continue;
        const double e = norm(pr.keypoints[k] - r->annotation.keypoints_2d[k]);
        err.push_back(e);
        norm_err.push_back(e / side);
      }
    }
    auto pck_at = [&norm_err](double thr) {
      if (norm_err.empty()) return 0.0;
      uint64_t ok = 0;
      for (double e : norm_err) ok += e <= thr ? 1 : 0;
      return static_cast<double>(ok) / static_cast<double>(norm_err.size());
    };

    EvalReport rep;
    rep.group = key;
    rep.n_images = records.size();
    rep.epe = err.empty() ? 0.0
                          : std::accumulate(err.begin(), err.end(), 0.0) /
                                static_cast<double>(err.size());
    double auc_sum = 0.0;
    for (double thr : grid) auc_sum += pck_at(thr);
    rep.auc = grid.empty() ? 0.0 : auc_sum / static_cast<double>(grid.size());
    rep.pck_at[options.pck_threshold] = pck_at(options.pck_threshold);
    rep.grid = grid;
    rep.source = preds.source;
    reports.push_back(std::move(rep));
  }
  return reports;
}

json EvalReport::to_json() const {
  json j;
  j["group"] = group;
  j["n_images"] = n_images;
  j["epe"] = epe;
  j["auc"] = auc;
  json pcks = json::object();
  for (const auto& [thr, v] : pck_at) {
    std::ostringstream key;
    key << std::setprecision(4) << thr;
    pcks[key.str()] = v;
  }
  j["pck"] = std::move(pcks);
  j["auc_grid"] = grid;
  j["source"] = source;
  return j;
}

json reports_to_json(const std::vector<EvalReport>& reports) {
  json j = json::array();
  for (const EvalReport& r : reports) j.push_back(r.to_json());
  return j;
}

std::string reports_to_text(const std::vector<EvalReport>& reports) {
  std::ostringstream out;
  out << std::left << std::setw(16) << "group" << std::right << std::setw(8) << "n"
      << std::setw(12) << "EPE(px)";
  if (!reports.empty()) {
    for (const auto& [thr, _] : reports.front().pck_at) {
      std::ostringstream h;
      h << "PCK@" << std::setprecision(3) << thr;
      out << std::setw(12) << h.str();
    }
  }
  out << std::setw(10) << "AUC" << "\n";
  for (const EvalReport& r : reports) {
    out << std::left << std::setw(16) << r.group << std::right << std::setw(8) << r.n_images
        << std::fixed << std::setprecision(3) << std::setw(12) << r.epe;
    for (const auto& [_, v] : r.pck_at) out << std::setw(12) << v;
    out << std::setw(10) << r.auc << "\n";
    out.unsetf(std::ios::fixed);
    out << std::setprecision(6);
  }
  return out.str();
}

}  // namespace handsynth
