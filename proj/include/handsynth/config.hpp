#pragma once

#include <string>
#include <vector>

#include "handsynth/json_util.hpp"
#include "handsynth/skeleton.hpp"
#include "handsynth/skin_tone.hpp"

namespace handsynth {

struct CameraRanges {
  double radius_min = 0.25;       // meters
  double radius_max = 1.2;
  double elevation_max_deg = 75.0;  // symmetric about the horizon
  double jitter_max_deg = 8.0;      // per-axis small-angle jitter
  double fov_min_deg = 35.0;
  double fov_max_deg = 60.0;
  double exposure_min_ev = -2.0;
  double exposure_max_ev = 2.0;
};

struct SamplerParams {
  int max_attempts = 64;      // camera retries before giving up on a seed
  double min_framing = 0.75;  // fraction of keypoints required in-frame
};

struct RenderParams {
  int resolution = 640;            // square output
  double visibility_epsilon = 0.012;  // meters of z-buffer slack; markers sit inside the mesh
  bool supersample = false;        // 2x2 ordered grid
  double ambient_strength = 0.75;  // scales the environment-mean term
  double key_strength = 0.18;      // scales the brightest-direction term
  double wrap = 0.4;               // wrap-diffuse softness, 0 = pure Lambert
};

struct AugmentParams {
  double p_geometric = 0.30;  // split evenly over 4 variants
  double p_color = 0.30;      // split evenly over 9 ops
  double p_blur = 0.50;
  double p_vflip = 0.50;
  double p_hflip = 0.50;
  double p_erase = 0.15;
  double scale_min = 0.7;
  double scale_max = 1.3;
  double stretch_min = 0.75;   // aspect factor applied to one axis
  double stretch_max = 1.33;
  double translate_frac = 0.15;  // max |shift| as fraction of width
  double blur_sigma_min = 0.5;   // pixels
  double blur_sigma_max = 2.0;
  double erase_min_frac = 0.05;  // of hand-bbox area
  double erase_max_frac = 0.25;
  double downscale_min = 0.25;   // resample factor for downscale-upscale
  double downscale_max = 0.75;
};

struct GenerationConfig {
  CameraRanges camera;
  SamplerParams sampler;
  RenderParams render;
  AugmentParams augment;
  ToneTable tones = ToneTable::defaults();
  GenderScale male_scale = gender_scale_defaults(Gender::Male);
  GenderScale female_scale = gender_scale_defaults(Gender::Female);
  double arm_length = 0.22;  // meters; 0 renders a bare hand
  std::vector<std::string> environments = {"proc:studio", "proc:dusk", "proc:noon",
                                           "proc:overcast"};
  std::string pose_library_path;  // empty = built-in library
  bool augment_inline = false;    // run the augment pass during generate
  std::string mask_fill = "gray";  // perturbation fill: "gray" or "env"

  void validate() const;  // throws SchemaError on out-of-range settings
};

json to_json(const GenerationConfig& cfg);
GenerationConfig config_from_json(const json& j);

GenerationConfig load_config(const std::string& path);
void save_config(const GenerationConfig& cfg, const std::string& path);

// Apply one "dotted.path=value" override onto a config JSON tree. Values
// parse as JSON when possible (numbers, booleans, arrays) and fall back to
// strings. Unknown paths are rejected.
void apply_override(json& tree, const std::string& assignment);

}  // namespace handsynth
