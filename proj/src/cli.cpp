#include "handsynth/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "handsynth/dataset.hpp"
#include "handsynth/metrics.hpp"
#include "handsynth/rng.hpp"

namespace handsynth {
namespace {

namespace fs = std::filesystem;

struct CommonArgs {
  std::string config_path;            // empty = env var, then built-in defaults
  std::vector<std::string> overrides;  // repeated --set key=value
  uint64_t seed = 0;
  std::string out_dir;
  int threads = 0;  // 0 = logical cores
};

int effective_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Resolves the generation config: explicit --config beats HANDSYNTH_CONFIG
// beats built-in defaults; --set overrides apply on top in order.
GenerationConfig resolve_config(const CommonArgs& args, json* resolved_out = nullptr) {
  std::string path = args.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("HANDSYNTH_CONFIG")) path = env;
  }
  json tree = path.empty() ? to_json(GenerationConfig{}) : [&] {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw SchemaError("config " + path + ": " + e.what());
    }
    return j;
  }();
  for (const std::string& assignment : args.overrides) apply_override(tree, assignment);
  GenerationConfig cfg = config_from_json(tree);
  if (resolved_out) *resolved_out = to_json(cfg);
  return cfg;
}

// Every run drops a replayable record of its inputs into its output
// directory (augment, which rewrites in place, uses a distinct name so it
// never clobbers the generate run's record).
void write_run_config(const std::string& dir, const std::string& subcommand,
                      const CommonArgs& args, const json& extra) {
  json j;
  j["schema_version"] = 1;
  j["subcommand"] = subcommand;
  j["config_path"] = args.config_path;
  j["overrides"] = args.overrides;
  j["seed"] = args.seed;
  j["threads"] = args.threads;
  for (const auto& [key, value] : extra.items()) j[key] = value;
  fs::create_directories(dir);
  const std::string name =
      subcommand == "augment" ? "run_config_augment.json" : "run_config.json";
  std::ofstream out(fs::path(dir) / name);
  if (!out) throw IoError("cannot write run config in " + dir);
  out << j.dump(2) << "\n";
}

PoseLibrary load_library(const GenerationConfig& cfg) {
  return cfg.pose_library_path.empty() ? PoseLibrary::builtin()
                                       : PoseLibrary::load(cfg.pose_library_path);
}

// ---------------------------------------------------------------------------
// generate

int run_generate(const CommonArgs& args, const std::string& preset, int64_t n) {
  if (preset.empty() && n <= 0) {
    throw std::invalid_argument("generate: one of --preset or -n is required");
  }
  if (!preset.empty() && n > 0) {
    throw std::invalid_argument("generate: --preset and -n are mutually exclusive");
  }
  json resolved;
  const GenerationConfig cfg = resolve_config(args, &resolved);

  GenerateOptions opts;
  opts.master_seed = args.seed;
  opts.preset = preset.empty() ? "custom" : preset;
  opts.n = preset.empty() ? static_cast<uint64_t>(n) : preset_size(preset);
  opts.out_dir = args.out_dir;
  opts.threads = effective_threads(args.threads);

  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto last_print = start;
  opts.progress = [&](uint64_t done, uint64_t total) {
    const auto now = clock::now();
    if (done != total && now - last_print < std::chrono::milliseconds(250)) return;
    last_print = now;
    const double secs = std::chrono::duration<double>(now - start).count();
    const double rate = secs > 0 ? static_cast<double>(done) / secs : 0.0;
    std::fprintf(stderr, "\r  %llu/%llu  %.1f images/s ",
                 static_cast<unsigned long long>(done),
                 static_cast<unsigned long long>(total), rate);
    if (done == total) std::fprintf(stderr, "\n");
  };

  write_run_config(args.out_dir, "generate", args,
                   {{"preset", opts.preset}, {"n", opts.n}, {"resolved_config", resolved}});
  const DatasetManifest manifest = generate(cfg, opts);

  const double secs = std::chrono::duration<double>(clock::now() - start).count();
  std::cout << "wrote " << manifest.records.size() << " records to " << args.out_dir
            << "/manifest.jsonl in " << std::fixed << std::setprecision(1) << secs << "s ("
            << std::setprecision(1) << (secs > 0 ? manifest.records.size() / secs : 0.0)
            << " images/s)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// augment

int run_augment(const CommonArgs& args, const std::string& manifest_path) {
  write_run_config(fs::path(manifest_path).parent_path().string(), "augment", args,
                   {{"manifest", manifest_path}});
  apply_in_place_pass(manifest_path, args.seed, effective_threads(args.threads));
  std::cout << "augmented all records of " << manifest_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// perturb

int run_perturb(const CommonArgs& args, const std::string& manifest_path) {
  const DatasetManifest manifest = read_manifest(manifest_path);
  const fs::path in_dir = fs::path(manifest_path).parent_path();
  const fs::path out_dir(args.out_dir);

  // Fill behavior comes from the manifest's embedded config unless the
  // caller supplies one explicitly.
  GenerationConfig cfg = args.config_path.empty() && args.overrides.empty()
                             ? config_from_json(manifest.header.config)
                             : resolve_config(args);
  std::optional<PoseLibrary> library;
  if (cfg.mask_fill == "env") library = load_library(cfg);

  write_run_config(args.out_dir, "perturb", args, {{"manifest", manifest_path}});
  fs::create_directories(out_dir / "images");
  for (const ManifestRecord& rec : manifest.records) {
    const Image image = read_ppm((in_dir / rec.image).string());
    const Image masked =
        perturb_half(image, rec.annotation, derive_seed(args.seed, kStreamPerturb, rec.id),
                     &cfg, library ? &*library : nullptr);
    write_ppm(masked, (out_dir / rec.image).string());
  }
  // The annotations must stay bit-identical, so the manifest is copied as
  // raw bytes rather than re-serialized.
  fs::copy_file(manifest_path, out_dir / "manifest.jsonl",
                fs::copy_options::overwrite_existing);
  std::cout << "perturbed " << manifest.records.size() << " images into " << args.out_dir
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// audit

int run_audit(const std::string& manifest_path, const std::string& out_path, bool as_json) {
  const DatasetManifest manifest = read_manifest(manifest_path);
  const BalanceReport report = audit_balance(manifest);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot write " + out_path);
    out << report.to_json().dump(2) << "\n";
  }
  std::cout << (as_json ? report.to_json().dump(2) + "\n" : report.to_text());
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

int run_evaluate(const CommonArgs& args, const std::string& manifest_path,
                 const std::string& pred_path, const std::string& group_by,
                 const EvalOptions& options) {
  const DatasetManifest manifest = read_manifest(manifest_path);
  const PredictionSet preds = read_predictions(pred_path);

  // Pooled report always; stratified rows added when a grouping is chosen.
  std::vector<EvalReport> pooled = stratified_report(preds, manifest, "all", options);
  std::vector<EvalReport> grouped;
  if (group_by != "all") grouped = stratified_report(preds, manifest, group_by, options);

  std::cout << reports_to_text(pooled);
  if (!grouped.empty()) std::cout << "\n" << reports_to_text(grouped);

  if (!args.out_dir.empty()) {
    write_run_config(args.out_dir, "evaluate", args,
                     {{"manifest", manifest_path},
                      {"predictions", pred_path},
                      {"group_by", group_by}});
    auto dump = [&](const std::vector<EvalReport>& reports, const std::string& name) {
      std::ofstream out(fs::path(args.out_dir) / name);
      if (!out) throw IoError("cannot write report in " + args.out_dir);
      out << reports_to_json(reports).dump(2) << "\n";
    };
    dump(pooled, "report_all.json");
    if (!grouped.empty()) dump(grouped, "report_" + group_by + ".json");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// preview

void draw_dot(Image& img, int cx, int cy, int radius, const uint8_t rgb[3]) {
  for (int y = cy - radius; y <= cy + radius; ++y) {
    for (int x = cx - radius; x <= cx + radius; ++x) {
      if (x < 0 || y < 0 || x >= img.width || y >= img.height) continue;
      const int dx = x - cx, dy = y - cy;
      if (dx * dx + dy * dy > radius * radius) continue;
      uint8_t* p = img.at(x, y);
      p[0] = rgb[0];
      p[1] = rgb[1];
      p[2] = rgb[2];
    }
  }
}

// Hollow square, the occluded-keypoint style.
void draw_box(Image& img, int cx, int cy, int radius, const uint8_t rgb[3]) {
  for (int y = cy - radius; y <= cy + radius; ++y) {
    for (int x = cx - radius; x <= cx + radius; ++x) {
      if (x < 0 || y < 0 || x >= img.width || y >= img.height) continue;
      if (std::abs(x - cx) != radius && std::abs(y - cy) != radius) continue;
      uint8_t* p = img.at(x, y);
      p[0] = rgb[0];
      p[1] = rgb[1];
      p[2] = rgb[2];
    }
  }
}

void draw_line(Image& img, Vec2 a, Vec2 b, const uint8_t rgb[3]) {
  const double steps = std::max(std::abs(b.x - a.x), std::abs(b.y - a.y));
  const int n = std::max(1, static_cast<int>(std::ceil(steps)));
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    const int x = static_cast<int>(std::lround(a.x + (b.x - a.x) * t));
    const int y = static_cast<int>(std::lround(a.y + (b.y - a.y) * t));
    if (x < 0 || y < 0 || x >= img.width || y >= img.height) continue;
    uint8_t* p = img.at(x, y);
    p[0] = rgb[0];
    p[1] = rgb[1];
    p[2] = rgb[2];
  }
}

int run_preview(const CommonArgs& args, const std::string& manifest_path, int64_t k) {
  const DatasetManifest manifest = read_manifest(manifest_path);
  if (k < 0 || static_cast<uint64_t>(k) > manifest.records.size()) {
    throw std::invalid_argument("preview: k must be in [0, manifest size]");
  }
  const fs::path in_dir = fs::path(manifest_path).parent_path();
  write_run_config(args.out_dir, "preview", args,
                   {{"manifest", manifest_path}, {"k", k}});

  const HandSkeleton topo = build_skeleton(Gender::Female, 0.0);
  const uint8_t bone[3] = {255, 210, 40};
  const uint8_t vis[3] = {40, 230, 70};
  const uint8_t hid[3] = {240, 60, 60};

  for (int64_t i = 0; i < k; ++i) {
    const ManifestRecord& rec = manifest.records[static_cast<size_t>(i)];
    Image img = read_ppm((in_dir / rec.image).string());
    const auto& kp = rec.annotation.keypoints_2d;
    for (int j = 0; j < kNumJoints; ++j) {
      const int parent = topo.joints[j].parent;
      if (parent >= 0) draw_line(img, kp[parent], kp[j], bone);
    }
    for (int j = 0; j < kNumJoints; ++j) {
      const int cx = static_cast<int>(std::lround(kp[j].x));
      const int cy = static_cast<int>(std::lround(kp[j].y));
      if (rec.annotation.visible[j]) {
        draw_dot(img, cx, cy, 2, vis);
      } else {
        draw_box(img, cx, cy, 3, hid);
      }
    }
    char name[32];
    std::snprintf(name, sizeof(name), "preview_%08llu.ppm",
                  static_cast<unsigned long long>(rec.id));
    write_ppm(img, (fs::path(args.out_dir) / name).string());
  }
  std::cout << "wrote " << k << " previews to " << args.out_dir << "\n";
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"synthetic affective hand-pose dataset pipeline"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string manifest_path;
  std::string preset;
  int64_t n = 0;
  int64_t k = 8;
  std::string pred_path;
  std::string group_by = "all";
  std::string audit_out;
  bool audit_json = false;
  EvalOptions eval_options;

  auto add_common = [&](CLI::App* sub, bool with_config = true) {
    if (with_config) {
      sub->add_option("--config", args.config_path, "generation config JSON");
      sub->add_option("--set", args.overrides, "config override key.path=value (repeatable)");
    }
    sub->add_option("--threads", args.threads, "worker threads (default: logical cores)");
  };

  CLI::App* gen = app.add_subcommand("generate", "render a balanced dataset");
  gen->add_option("--seed", args.seed, "master seed");
  gen->add_option("--preset", preset, "small | medium | large | desk")
      ->check(CLI::IsMember({"small", "medium", "large", "desk"}));
  gen->add_option("-n", n, "record count (custom preset)");
  gen->add_option("--out", args.out_dir, "output directory")->required();
  add_common(gen);

  CLI::App* aug = app.add_subcommand("augment", "apply an augmentation pass in place");
  aug->add_option("--manifest", manifest_path, "dataset manifest")->required();
  aug->add_option("--seed", args.seed, "pass seed");
  add_common(aug, false);

  CLI::App* per = app.add_subcommand("perturb", "mask half of every hand");
  per->add_option("--manifest", manifest_path, "dataset manifest")->required();
  per->add_option("--out", args.out_dir, "output directory")->required();
  per->add_option("--seed", args.seed, "perturbation seed");
  add_common(per);

  CLI::App* aud = app.add_subcommand("audit", "balance report for a manifest");
  aud->add_option("--manifest", manifest_path, "dataset manifest")->required();
  aud->add_option("--out", audit_out, "also write the report JSON here");
  aud->add_flag("--json", audit_json, "print JSON instead of text");

  CLI::App* eva = app.add_subcommand("evaluate", "score predictions against a manifest");
  eva->add_option("--manifest", manifest_path, "dataset manifest")->required();
  eva->add_option("--predictions", pred_path, "prediction JSONL")->required();
  eva->add_option("--group-by", group_by, "all | tone | gender")
      ->check(CLI::IsMember({"all", "tone", "gender"}));
  eva->add_option("--out", args.out_dir, "directory for report files");
  eva->add_option("--pck-threshold", eval_options.pck_threshold, "headline PCK threshold");
  eva->add_option("--auc-steps", eval_options.auc_steps, "AUC grid size");
  eva->add_option("--auc-max", eval_options.auc_max, "AUC grid upper bound");
  eva->add_flag("--visible-only", eval_options.visible_only,
                "score only keypoints visible in the ground truth");

  CLI::App* pre = app.add_subcommand("preview", "skeleton overlays for inspection");
  pre->add_option("--manifest", manifest_path, "dataset manifest")->required();
  pre->add_option("--out", args.out_dir, "output directory")->required();
  pre->add_option("-k", k, "number of records to draw");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exits 0
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (gen->parsed()) return run_generate(args, preset, n);
    if (aug->parsed()) return run_augment(args, manifest_path);
    if (per->parsed()) return run_perturb(args, manifest_path);
    if (aud->parsed()) return run_audit(manifest_path, audit_out, audit_json);
    if (eva->parsed()) return run_evaluate(args, manifest_path, pred_path, group_by, eval_options);
    if (pre->parsed()) return run_preview(args, manifest_path, k);
    return 1;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace handsynth
