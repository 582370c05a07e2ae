#include "handsynth/config.hpp"

#include <fstream>

#include "handsynth/errors.hpp"

namespace handsynth {

namespace {
constexpr int kConfigSchemaVersion = 1;

void check_prob(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw SchemaError(std::string(name) + " must lie in [0, 1]");
  }
}

void check_range(double lo, double hi, const char* name) {
  if (!(lo <= hi)) throw SchemaError(std::string(name) + ": min exceeds max");
}
}  // namespace

void GenerationConfig::validate() const {
  if (!(camera.radius_min > 0.0)) throw SchemaError("camera.radius_min must be positive");
  check_range(camera.radius_min, camera.radius_max, "camera.radius");
  if (!(camera.elevation_max_deg >= 0.0 && camera.elevation_max_deg <= 89.0)) {
    throw SchemaError("camera.elevation_max_deg must lie in [0, 89]");
  }
  if (!(camera.fov_min_deg > 0.0 && camera.fov_max_deg < 180.0)) {
    throw SchemaError("camera fov must lie in (0, 180) degrees");
  }
  check_range(camera.fov_min_deg, camera.fov_max_deg, "camera.fov");
  check_range(camera.exposure_min_ev, camera.exposure_max_ev, "camera.exposure");
  if (sampler.max_attempts < 1) throw SchemaError("sampler.max_attempts must be >= 1");
  check_prob(sampler.min_framing, "sampler.min_framing");
  if (render.resolution < 8) throw SchemaError("render.resolution too small");
  if (!(render.visibility_epsilon >= 0.0)) throw SchemaError("render.visibility_epsilon < 0");
  check_prob(augment.p_geometric, "augment.p_geometric");
  check_prob(augment.p_color, "augment.p_color");
  check_prob(augment.p_blur, "augment.p_blur");
  check_prob(augment.p_vflip, "augment.p_vflip");
  check_prob(augment.p_hflip, "augment.p_hflip");
  check_prob(augment.p_erase, "augment.p_erase");
  if (!(augment.scale_min > 0.0)) throw SchemaError("augment.scale_min must be positive");
  check_range(augment.scale_min, augment.scale_max, "augment.scale");
  if (!(augment.stretch_min > 0.0)) throw SchemaError("augment.stretch_min must be positive");
  check_range(augment.stretch_min, augment.stretch_max, "augment.stretch");
  check_range(augment.blur_sigma_min, augment.blur_sigma_max, "augment.blur_sigma");
  check_range(augment.erase_min_frac, augment.erase_max_frac, "augment.erase_frac");
  if (!(augment.downscale_min > 0.0 && augment.downscale_max <= 1.0)) {
    throw SchemaError("augment.downscale factors must lie in (0, 1]");
  }
  check_range(augment.downscale_min, augment.downscale_max, "augment.downscale");
  if (tones.anchors.empty()) throw SchemaError("tones.anchors must not be empty");
  for (size_t i = 1; i < tones.anchors.size(); ++i) {
    if (!(tones.anchors[i - 1].ita < tones.anchors[i].ita)) {
      throw SchemaError("tones.anchors must be sorted by ascending ita");
    }
  }
  if (arm_length < 0.0) throw SchemaError("arm_length must be >= 0");
  if (environments.empty()) throw SchemaError("environments list must not be empty");
  if (mask_fill != "gray" && mask_fill != "env") {
    throw SchemaError("mask_fill must be 'gray' or 'env'");
  }
}

json to_json(const GenerationConfig& cfg) {
  json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["camera"] = {{"radius_min", cfg.camera.radius_min},
                 {"radius_max", cfg.camera.radius_max},
                 {"elevation_max_deg", cfg.camera.elevation_max_deg},
                 {"jitter_max_deg", cfg.camera.jitter_max_deg},
                 {"fov_min_deg", cfg.camera.fov_min_deg},
                 {"fov_max_deg", cfg.camera.fov_max_deg},
                 {"exposure_min_ev", cfg.camera.exposure_min_ev},
                 {"exposure_max_ev", cfg.camera.exposure_max_ev}};
  j["sampler"] = {{"max_attempts", cfg.sampler.max_attempts},
                  {"min_framing", cfg.sampler.min_framing}};
  j["render"] = {{"resolution", cfg.render.resolution},
                 {"visibility_epsilon", cfg.render.visibility_epsilon},
                 {"supersample", cfg.render.supersample},
                 {"ambient_strength", cfg.render.ambient_strength},
                 {"key_strength", cfg.render.key_strength},
                 {"wrap", cfg.render.wrap}};
  j["augment"] = {{"p_geometric", cfg.augment.p_geometric},
                  {"p_color", cfg.augment.p_color},
                  {"p_blur", cfg.augment.p_blur},
                  {"p_vflip", cfg.augment.p_vflip},
                  {"p_hflip", cfg.augment.p_hflip},
                  {"p_erase", cfg.augment.p_erase},
                  {"scale_min", cfg.augment.scale_min},
                  {"scale_max", cfg.augment.scale_max},
                  {"stretch_min", cfg.augment.stretch_min},
                  {"stretch_max", cfg.augment.stretch_max},
                  {"translate_frac", cfg.augment.translate_frac},
                  {"blur_sigma_min", cfg.augment.blur_sigma_min},
                  {"blur_sigma_max", cfg.augment.blur_sigma_max},
                  {"erase_min_frac", cfg.augment.erase_min_frac},
                  {"erase_max_frac", cfg.augment.erase_max_frac},
                  {"downscale_min", cfg.augment.downscale_min},
                  {"downscale_max", cfg.augment.downscale_max}};
  json anchors = json::array();
  for (const ToneAnchor& a : cfg.tones.anchors) {
    anchors.push_back({{"ita", a.ita}, {"b", a.b}});
  }
  j["tones"] = {{"anchors", std::move(anchors)}, {"a_star", cfg.tones.a_star}};
  auto scale_json = [](const GenderScale& s) {
    return json{{"overall", s.overall},
                {"finger_length", s.finger_length},
                {"finger_width", s.finger_width}};
  };
  j["male_scale"] = scale_json(cfg.male_scale);
  j["female_scale"] = scale_json(cfg.female_scale);
  j["arm_length"] = cfg.arm_length;
  j["environments"] = cfg.environments;
  j["pose_library_path"] = cfg.pose_library_path;
  j["augment_inline"] = cfg.augment_inline;
  j["mask_fill"] = cfg.mask_fill;
  return j;
}

GenerationConfig config_from_json(const json& j) {
  check_schema_version(j, kConfigSchemaVersion, "config");
  GenerationConfig cfg;
  if (j.contains("camera")) {
    const json& c = j["camera"];
    cfg.camera.radius_min = value_or(c, "radius_min", cfg.camera.radius_min);
    cfg.camera.radius_max = value_or(c, "radius_max", cfg.camera.radius_max);
    cfg.camera.elevation_max_deg = value_or(c, "elevation_max_deg", cfg.camera.elevation_max_deg);
    cfg.camera.jitter_max_deg = value_or(c, "jitter_max_deg", cfg.camera.jitter_max_deg);
    cfg.camera.fov_min_deg = value_or(c, "fov_min_deg", cfg.camera.fov_min_deg);
    cfg.camera.fov_max_deg = value_or(c, "fov_max_deg", cfg.camera.fov_max_deg);
    cfg.camera.exposure_min_ev = value_or(c, "exposure_min_ev", cfg.camera.exposure_min_ev);
    cfg.camera.exposure_max_ev = value_or(c, "exposure_max_ev", cfg.camera.exposure_max_ev);
  }
  if (j.contains("sampler")) {
    const json& s = j["sampler"];
    cfg.sampler.max_attempts = value_or(s, "max_attempts", cfg.sampler.max_attempts);
    cfg.sampler.min_framing = value_or(s, "min_framing", cfg.sampler.min_framing);
  }
  if (j.contains("render")) {
    const json& r = j["render"];
    cfg.render.resolution = value_or(r, "resolution", cfg.render.resolution);
    cfg.render.visibility_epsilon =
        value_or(r, "visibility_epsilon", cfg.render.visibility_epsilon);
    cfg.render.supersample = value_or(r, "supersample", cfg.render.supersample);
    cfg.render.ambient_strength = value_or(r, "ambient_strength", cfg.render.ambient_strength);
    cfg.render.key_strength = value_or(r, "key_strength", cfg.render.key_strength);
    cfg.render.wrap = value_or(r, "wrap", cfg.render.wrap);
  }
  if (j.contains("augment")) {
    const json& a = j["augment"];
    cfg.augment.p_geometric = value_or(a, "p_geometric", cfg.augment.p_geometric);
    cfg.augment.p_color = value_or(a, "p_color", cfg.augment.p_color);
    cfg.augment.p_blur = value_or(a, "p_blur", cfg.augment.p_blur);
    cfg.augment.p_vflip = value_or(a, "p_vflip", cfg.augment.p_vflip);
    cfg.augment.p_hflip = value_or(a, "p_hflip", cfg.augment.p_hflip);
    cfg.augment.p_erase = value_or(a, "p_erase", cfg.augment.p_erase);
    cfg.augment.scale_min = value_or(a, "scale_min", cfg.augment.scale_min);
    cfg.augment.scale_max = value_or(a, "scale_max", cfg.augment.scale_max);
    cfg.augment.stretch_min = value_or(a, "stretch_min", cfg.augment.stretch_min);
    cfg.augment.stretch_max = value_or(a, "stretch_max", cfg.augment.stretch_max);
    cfg.augment.translate_frac = value_or(a, "translate_frac", cfg.augment.translate_frac);
    cfg.augment.blur_sigma_min = value_or(a, "blur_sigma_min", cfg.augment.blur_sigma_min);
    cfg.augment.blur_sigma_max = value_or(a, "blur_sigma_max", cfg.augment.blur_sigma_max);
    cfg.augment.erase_min_frac = value_or(a, "erase_min_frac", cfg.augment.erase_min_frac);
    cfg.augment.erase_max_frac = value_or(a, "erase_max_frac", cfg.augment.erase_max_frac);
    cfg.augment.downscale_min = value_or(a, "downscale_min", cfg.augment.downscale_min);
    cfg.augment.downscale_max = value_or(a, "downscale_max", cfg.augment.downscale_max);
  }
  if (j.contains("tones")) {
    const json& t = j["tones"];
    if (t.contains("anchors")) {
      cfg.tones.anchors.clear();
      for (const json& ja : t["anchors"]) {
        cfg.tones.anchors.push_back({require<double>(ja, "ita"), require<double>(ja, "b")});
      }
    }
    cfg.tones.a_star = value_or(t, "a_star", cfg.tones.a_star);
  }
  auto scale_from = [](const json& js, GenderScale s) {
    s.overall = value_or(js, "overall", s.overall);
    s.finger_length = value_or(js, "finger_length", s.finger_length);
    s.finger_width = value_or(js, "finger_width", s.finger_width);
    return s;
  };
  if (j.contains("male_scale")) cfg.male_scale = scale_from(j["male_scale"], cfg.male_scale);
  if (j.contains("female_scale")) {
    cfg.female_scale = scale_from(j["female_scale"], cfg.female_scale);
  }
  cfg.arm_length = value_or(j, "arm_length", cfg.arm_length);
  cfg.environments = value_or(j, "environments", cfg.environments);
  cfg.pose_library_path = value_or(j, "pose_library_path", cfg.pose_library_path);
  cfg.augment_inline = value_or(j, "augment_inline", cfg.augment_inline);
  cfg.mask_fill = value_or(j, "mask_fill", cfg.mask_fill);
  cfg.validate();
  return cfg;
}

GenerationConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config: " + path);
  json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("config parse error: ") + e.what());
  }
  return config_from_json(j);
}

void save_config(const GenerationConfig& cfg, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << to_json(cfg).dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

void apply_override(json& tree, const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw SchemaError("override must have the form key.path=value: " + assignment);
  }
  const std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  json* node = &tree;
  size_t start = 0;
  std::vector<std::string> keys;
  while (true) {
    const size_t dot = path.find('.', start);
    keys.push_back(path.substr(start, dot == std::string::npos ? dot : dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  for (size_t i = 0; i + 1 < keys.size(); ++i) {
    if (!node->contains(keys[i]) || !(*node)[keys[i]].is_object()) {
      throw SchemaError("unknown config section: " + keys[i]);
    }
    node = &(*node)[keys[i]];
  }
  const std::string& leaf = keys.back();
  if (!node->contains(leaf)) throw SchemaError("unknown config key: " + path);

  json parsed = json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value;  // plain string
  (*node)[leaf] = std::move(parsed);
}

}  // namespace handsynth
