#include "handsynth/dataset.hpp"

#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "handsynth/envmap.hpp"
#include "handsynth/rng.hpp"
#include "handsynth/scene.hpp"

namespace fs = std::filesystem;

namespace handsynth {

namespace {

std::string image_name(uint64_t id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "images/%08llu.ppm", static_cast<unsigned long long>(id));
  return buf;
}

// Atomic file replacement: write to a temp sibling, then rename over.
void write_ppm_atomic(const Image& img, const std::string& path) {
  const std::string tmp = path + ".tmp";
  write_ppm(img, tmp);
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed for " + path + ": " + ec.message());
}

void write_text_atomic(const std::string& text, const std::string& path) {
  const std::string tmp = path + ".tmp";
  std::ofstream out(tmp, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + tmp);
  out << text;
  out.close();
  if (!out) throw IoError("write failed: " + tmp);
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed for " + path + ": " + ec.message());
}

struct Caches {
  const GenerationConfig& config;
  const PoseLibrary& library;
  std::map<std::string, EnvMap> envs;
  std::map<int, SkinnedMesh> meshes;  // keyed by gender*2 + handedness

  explicit Caches(const GenerationConfig& cfg, const PoseLibrary& lib)
      : config(cfg), library(lib) {
    for (const std::string& id : cfg.environments) envs.emplace(id, EnvMap::open(id));
    for (int g = 0; g < 2; ++g) {
      for (int h = 0; h < 2; ++h) {
        const Gender gender = g == 0 ? Gender::Male : Gender::Female;
        const GenderScale& scale = g == 0 ? cfg.male_scale : cfg.female_scale;
        HandSkeleton skel = build_skeleton(gender, cfg.arm_length, &scale);
        if (h == 1) skel = mirror(skel);
        meshes.emplace(g * 2 + h, build_mesh(skel));
      }
    }
  }

  const SkinnedMesh& mesh_for(const SampleSpec& spec) const {
    const int g = spec.gender == Gender::Male ? 0 : 1;
    const int h = spec.handedness == Handedness::Right ? 0 : 1;
    return meshes.at(g * 2 + h);
  }
};

// Runs fn(i) for i in [begin, end) on `threads` workers and hands results to
// consume(i, result) in index order on the calling thread.
template <typename Result, typename Fn, typename Consume>
void ordered_parallel_for(uint64_t begin, uint64_t end, int threads, Fn fn, Consume consume) {
  threads = std::max(1, threads);
  if (threads == 1) {
    for (uint64_t i = begin; i < end; ++i) consume(i, fn(i));
    return;
  }
  std::mutex mu;
  std::condition_variable cv;
  std::map<uint64_t, Result> ready;
  std::atomic<uint64_t> next{begin};
  std::exception_ptr failure;
  // Bound the reorder buffer so a slow head doesn't let memory grow.
  const size_t max_buffered = static_cast<size_t>(threads) * 4;

  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const uint64_t i = next.fetch_add(1);
        if (i >= end) return;
        try {
          Result r = fn(i);
          std::unique_lock lock(mu);
          cv.wait(lock, [&] { return ready.size() < max_buffered || failure; });
          if (failure) return;
          ready.emplace(i, std::move(r));
          cv.notify_all();
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
          cv.notify_all();
          return;
        }
      }
    });
  }

  uint64_t want = begin;
  {
    std::unique_lock lock(mu);
    while (want < end) {
      cv.wait(lock, [&] { return failure || ready.count(want); });
      if (failure) break;
      Result r = std::move(ready.at(want));
      ready.erase(want);
      cv.notify_all();
      lock.unlock();
      consume(want, std::move(r));
      ++want;
      lock.lock();
    }
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

uint64_t preset_size(const std::string& preset) {
  if (preset == "small") return 10000;
  if (preset == "medium") return 100000;
  if (preset == "large") return 538643;
  if (preset == "desk") return 1000;
  throw std::invalid_argument("unknown preset: " + preset);
}

json header_to_json(const ManifestHeader& h) {
  json j;
  j["type"] = "header";
  j["schema_version"] = kManifestSchemaVersion;
  j["preset"] = h.preset;
  j["n"] = h.n;
  j["master_seed"] = h.master_seed;
  j["split"] = h.split;
  j["config"] = h.config;
  return j;
}

json record_to_json(const ManifestRecord& r) {
  json j;
  j["type"] = "record";
  j["id"] = r.id;
  j["image"] = r.image;
  j["annotation"] = to_json(r.annotation);
  j["plan"] = r.plan ? to_json(*r.plan) : json(nullptr);
  return j;
}

ManifestRecord record_from_json(const json& j) {
  ManifestRecord r;
  r.id = require<uint64_t>(j, "id");
  r.image = require<std::string>(j, "image");
  r.annotation = annotation_from_json(j.at("annotation"));
  if (j.contains("plan") && !j["plan"].is_null()) r.plan = plan_from_json(j["plan"]);
  return r;
}

void write_manifest(const DatasetManifest& manifest, const std::string& path) {
  std::ostringstream out;
  out << header_to_json(manifest.header).dump() << "\n";
  for (const ManifestRecord& r : manifest.records) out << record_to_json(r).dump() << "\n";
  write_text_atomic(out.str(), path);
}

DatasetManifest read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest: " + path);
  DatasetManifest m;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError("manifest line " + std::to_string(line_no) + ": " + e.what());
    }
    const std::string type = require<std::string>(j, "type");
    if (type == "header") {
      check_schema_version(j, kManifestSchemaVersion, "manifest");
      m.header.preset = require<std::string>(j, "preset");
      m.header.n = require<uint64_t>(j, "n");
      m.header.master_seed = require<uint64_t>(j, "master_seed");
      m.header.split = require<std::string>(j, "split");
      m.header.config = j.contains("config") ? j["config"] : json::object();
    } else if (type == "record") {
      try {
        m.records.push_back(record_from_json(j));
      } catch (const SchemaError& e) {
        throw SchemaError("manifest line " + std::to_string(line_no) + ": " + e.what());
      }
    } else {
      throw SchemaError("manifest line " + std::to_string(line_no) + ": unknown type '" + type +
                        "'");
    }
  }
  if (line_no == 0) throw SchemaError("manifest is empty: " + path);
  return m;
}

DatasetManifest generate(const GenerationConfig& config, const GenerateOptions& options) {
  config.validate();
  if (options.n < 1) throw std::invalid_argument("generate requires n >= 1");
  const fs::path out_dir(options.out_dir);
  fs::create_directories(out_dir / "images");

  PoseLibrary library = config.pose_library_path.empty()
                            ? PoseLibrary::builtin()
                            : PoseLibrary::load(config.pose_library_path);
  Caches caches(config, library);
  const int cells = 2 * static_cast<int>(config.tones.anchors.size());

  DatasetManifest manifest;
  manifest.header.preset = options.preset;
  manifest.header.n = options.n;
  manifest.header.master_seed = options.master_seed;
  manifest.header.config = to_json(config);
  const std::string header_line = header_to_json(manifest.header).dump();

  // Resumable checkpoint: a .partial manifest with a matching header lets an
  // interrupted run pick up at the next record.
  const fs::path final_path = out_dir / "manifest.jsonl";
  const fs::path partial_path = out_dir / "manifest.jsonl.partial";
  uint64_t done = 0;
  if (options.resume && fs::exists(partial_path)) {
    std::ifstream in(partial_path, std::ios::binary);
    std::string line;
    if (std::getline(in, line) && line == header_line) {
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        manifest.records.push_back(record_from_json(json::parse(line)));
        ++done;
      }
    } else {
      fs::remove(partial_path);
    }
  }

  std::ofstream out;
  if (done > 0) {
    out.open(partial_path, std::ios::binary | std::ios::app);
  } else {
    out.open(partial_path, std::ios::binary | std::ios::trunc);
    if (out) out << header_line << "\n";
  }
  if (!out) throw IoError("cannot open manifest checkpoint: " + partial_path.string());

  struct SampleOut {
    ManifestRecord record;
    Image image;
  };
  auto make_sample = [&](uint64_t i) -> SampleOut {
    const uint64_t seed = derive_seed(options.master_seed, kStreamSample, i);
    const SampleSpec spec =
        sample_spec(seed, config, library, static_cast<int>(i % cells));
    const SceneInstance scene = resolve_scene(spec, config, library);
    RenderResult r = render(spec, scene, caches.mesh_for(spec), caches.envs.at(spec.environment_id),
                            config.render);
    SampleOut s;
    s.record.id = i;
    s.record.image = image_name(i);
    if (config.augment_inline) {
      AugmentationPlan plan = sample_plan(seed, config.augment);
      apply(r.image, r.annotation, plan);
      s.record.plan = plan;
    }
    s.record.annotation = r.annotation;
    s.image = std::move(r.image);
    return s;
  };

  ordered_parallel_for<SampleOut>(
      done, options.n, options.threads, make_sample, [&](uint64_t i, SampleOut s) {
        write_ppm_atomic(s.image, (out_dir / s.record.image).string());
        out << record_to_json(s.record).dump() << "\n";
        out.flush();
        if (!out) throw IoError("manifest checkpoint write failed (disk full?)");
        manifest.records.push_back(std::move(s.record));
        if (options.progress) options.progress(i + 1, options.n);
      });

  out.close();
  std::error_code ec;
  fs::rename(partial_path, final_path, ec);
  if (ec) throw IoError("cannot finalize manifest: " + ec.message());
  return manifest;
}

BalanceReport audit_balance(const DatasetManifest& manifest) {
  BalanceReport report;
  report.total = manifest.records.size();

  int tone_count = 0;
  for (const ManifestRecord& r : manifest.records) {
    tone_count = std::max(tone_count, r.annotation.meta.tone_index + 1);
  }
  if (manifest.header.config.contains("tones")) {
    const json& anchors = manifest.header.config["tones"]["anchors"];
    if (anchors.is_array() && !anchors.empty()) {
      tone_count = static_cast<int>(anchors.size());
    }
  }
  if (tone_count == 0) throw SchemaError("manifest carries no tone metadata");

  std::map<std::string, uint64_t> cells;
  for (int g = 0; g < 2; ++g) {
    for (int t = 0; t < tone_count; ++t) {
      cells[std::string(g == 0 ? "male" : "female") + "/" + std::to_string(t)] = 0;
    }
  }
  for (const ManifestRecord& r : manifest.records) {
    const SampleSpec& meta = r.annotation.meta;
    if (meta.tone_index < 0 || meta.tone_index >= tone_count) {
      throw SchemaError("record " + std::to_string(r.id) + ": tone_index out of range");
    }
    cells[std::string(to_string(meta.gender)) + "/" + std::to_string(meta.tone_index)]++;
    report.handedness_counts[to_string(meta.handedness)]++;
    report.pose_counts[meta.pose_a]++;
  }
  report.cell_counts = cells;

  const uint64_t n = manifest.header.n > 0 ? manifest.header.n : report.total;
  const uint64_t n_cells = static_cast<uint64_t>(2 * tone_count);
  const uint64_t lo = n / n_cells, hi = (n + n_cells - 1) / n_cells;
  const double ideal = static_cast<double>(n) / static_cast<double>(n_cells);
  for (const auto& [cell, count] : cells) {
    report.max_cell_deviation =
        std::max(report.max_cell_deviation, std::fabs(static_cast<double>(count) - ideal));
    if (count != lo && count != hi) {
      report.flags.push_back(cell + ": " + std::to_string(count) + " (expected " +
                             std::to_string(lo) + (lo == hi ? "" : " or " + std::to_string(hi)) +
                             ")");
    }
  }
  return report;
}

json BalanceReport::to_json() const {
  json j;
  j["total"] = total;
  j["cells"] = cell_counts;
  j["handedness"] = handedness_counts;
  j["poses"] = pose_counts;
  j["max_cell_deviation"] = max_cell_deviation;
  j["flags"] = flags;
  return j;
}

std::string BalanceReport::to_text() const {
  std::ostringstream out;
  out << "samples: " << total << "\n";
  out << "cells (gender/tone):\n";
  for (const auto& [cell, count] : cell_counts) {
    out << "  " << cell << ": " << count << "\n";
  }
  out << "handedness:\n";
  for (const auto& [h, count] : handedness_counts) out << "  " << h << ": " << count << "\n";
  out << "max cell deviation: " << max_cell_deviation << "\n";
  if (flags.empty()) {
    out << "balance: OK\n";
  } else {
    out << "balance flags:\n";
    for (const std::string& f : flags) out << "  " << f << "\n";
  }
  return out.str();
}

void apply_in_place_pass(const std::string& manifest_path, uint64_t pass_seed, int threads) {
  DatasetManifest manifest = read_manifest(manifest_path);
  const fs::path dir = fs::path(manifest_path).parent_path();
  const AugmentParams params = config_from_json(manifest.header.config).augment;

  struct AugOut {
    Image image;
    Annotation annotation;
    AugmentationPlan plan;
  };
  ordered_parallel_for<AugOut>(
      0, manifest.records.size(), threads,
      [&](uint64_t i) {
        ManifestRecord& rec = manifest.records[i];
        AugOut a;
        a.image = read_ppm((dir / rec.image).string());
        a.annotation = rec.annotation;
        a.plan = sample_plan(derive_seed(pass_seed, kStreamAugment, rec.id), params);
        apply(a.image, a.annotation, a.plan);
        return a;
      },
      [&](uint64_t i, AugOut a) {
        ManifestRecord& rec = manifest.records[i];
        write_ppm_atomic(a.image, (dir / rec.image).string());
        rec.annotation = a.annotation;
        rec.plan = a.plan;
      });

  write_manifest(manifest, manifest_path);
}

void perturb_extent(const Bbox& bbox, bool vertical_split, bool first_side, int resolution,
                    int& x0, int& x1, int& y0, int& y1) {
  int bx0 = std::clamp(static_cast<int>(std::floor(bbox.x)), 0, resolution - 1);
  int by0 = std::clamp(static_cast<int>(std::floor(bbox.y)), 0, resolution - 1);
  int bx1 = std::clamp(static_cast<int>(std::ceil(bbox.x + bbox.w)), 0, resolution - 1);
  int by1 = std::clamp(static_cast<int>(std::ceil(bbox.y + bbox.h)), 0, resolution - 1);
  x0 = bx0;
  x1 = bx1;
  y0 = by0;
  y1 = by1;
  if (vertical_split) {
    // Split through the vertical centerline: columns [bx0, mid) | [mid, bx1].
    const int mid = bx0 + (bx1 - bx0 + 1) / 2;
    if (first_side) {
      x1 = mid - 1;
    } else {
      x0 = mid;
    }
  } else {
    const int mid = by0 + (by1 - by0 + 1) / 2;
    if (first_side) {
      y1 = mid - 1;
    } else {
      y0 = mid;
    }
  }
}

Image perturb_half(const Image& image, const Annotation& annotation, uint64_t seed,
                   const GenerationConfig* config, const PoseLibrary* library) {
  const Bbox& bb = annotation.bbox;
  bool any_in_frame = false;
  for (const Vec2& p : annotation.keypoints_2d) {
    if (p.x >= 0.0 && p.x < image.width && p.y >= 0.0 && p.y < image.height) {
      any_in_frame = true;
      break;
    }
  }
  if (!any_in_frame || (bb.w <= 0.0 && bb.h <= 0.0)) {
    throw std::invalid_argument("perturb_half needs at least one in-frame keypoint");
  }

  Rng rng(derive_seed(seed, kStreamPerturb));
  const bool vertical = rng.bernoulli(0.5);
  const bool first = rng.bernoulli(0.5);
  int x0, x1, y0, y1;
  perturb_extent(bb, vertical, first, image.width, x0, x1, y0, y1);

  Image out = image;
  const bool env_fill = config && library && config->mask_fill == "env";
  EnvMap env;
  SceneInstance scene;
  if (env_fill) {
    env = EnvMap::open(annotation.meta.environment_id);
    scene = resolve_scene(annotation.meta, *config, *library);
  }
  const ShadingEnvironment shading{&env, annotation.meta.env_rotation_z,
                                   annotation.meta.camera.exposure_ev};
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      uint8_t* p = out.at(x, y);
      if (env_fill) {
        const Vec3 c = shading.lookup(scene.camera.ray_direction(x, y));
        p[0] = quantize8(srgb_encode(c.x));
        p[1] = quantize8(srgb_encode(c.y));
        p[2] = quantize8(srgb_encode(c.z));
      } else {
        p[0] = p[1] = p[2] = 128;
      }
    }
  }
  return out;
}

}  // namespace handsynth
