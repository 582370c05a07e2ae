#include "handsynth/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace handsynth {

namespace {

Vec3 mul(const Vec3& a, const Vec3& b) { return {a.x * b.x, a.y * b.y, a.z * b.z}; }

struct ScreenVertex {
  double x, y;   // raster-grid index coordinates
  double z;      // camera-space depth
  Vec3 normal;   // world space, unnormalized per-vertex
};

}  // namespace

bool keypoint_visible(const Vec2& px, double depth, const FloatImage& zbuffer, double epsilon) {
  const int xi = static_cast<int>(std::lround(px.x));
  const int yi = static_cast<int>(std::lround(px.y));
  if (xi < 0 || xi >= zbuffer.width || yi < 0 || yi >= zbuffer.height) return false;
  return depth <= static_cast<double>(zbuffer.at(xi, yi)[0]) + epsilon;
}

RenderResult render(const SampleSpec& spec, const SceneInstance& scene, const SkinnedMesh& mesh,
                    const EnvMap& env, const RenderParams& params) {
  const int res = params.resolution;
  const int ss = params.supersample ? 2 : 1;
  const int big = res * ss;
  // Raster sample u (big grid) sits at base index coordinate (u - off) / ss.
  const double off = 0.5 * (ss - 1);

  const Camera& cam = scene.camera;
  const ShadingEnvironment shading{&env, spec.env_rotation_z, spec.camera.exposure_ev};

  // Skin the mesh and take everything to camera/raster space.
  const auto bone_transforms = skinning_transforms(mesh, scene.fk);
  const PosedMesh posed = skin_mesh(mesh, bone_transforms);
  const std::vector<Vec3>& world_pos = posed.vertices;
  const std::vector<Vec3>& world_nrm = posed.normals;

  const size_t nv = world_pos.size();
  std::vector<ScreenVertex> sv(nv);
  for (size_t i = 0; i < nv; ++i) {
    const Vec3 c = cam.to_camera(world_pos[i]);
    ScreenVertex& v = sv[i];
    v.z = c.z;
    if (c.z > 1e-6) {
      const Vec2 p = project(c, cam.vertical_fov, res);
      v.x = p.x * ss + off;
      v.y = p.y * ss + off;
    } else {
      v.x = v.y = -1e9;  // flagged; triangles touching it are skipped
    }
    v.normal = world_nrm[i];
  }

  std::vector<double> depth(static_cast<size_t>(big) * big,
                            std::numeric_limits<double>::infinity());
  std::vector<Vec3> linear(static_cast<size_t>(big) * big);

  // Background first: environment sampled along per-pixel camera rays.
  for (int y = 0; y < big; ++y) {
    for (int x = 0; x < big; ++x) {
      const Vec3 dir = cam.ray_direction((x - off) / ss, (y - off) / ss);
      linear[static_cast<size_t>(y) * big + x] = shading.lookup(dir);
    }
  }

  const Vec3 albedo{scene.tone.albedo[0], scene.tone.albedo[1], scene.tone.albedo[2]};
  const Vec3 ambient = shading.ambient() * params.ambient_strength;
  const Vec3 key = shading.key_radiance() * params.key_strength;
  const Vec3 key_dir = shading.key_direction();

  for (const auto& tri : mesh.triangles) {
    const ScreenVertex& a = sv[tri[0]];
    const ScreenVertex& b = sv[tri[1]];
    const ScreenVertex& c = sv[tri[2]];
    if (a.z <= 1e-6 || b.z <= 1e-6 || c.z <= 1e-6) continue;

    const double area = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    if (std::fabs(area) < 1e-12) continue;
    const double inv_area = 1.0 / area;

    int x0 = static_cast<int>(std::ceil(std::min({a.x, b.x, c.x})));
    int x1 = static_cast<int>(std::floor(std::max({a.x, b.x, c.x})));
    int y0 = static_cast<int>(std::ceil(std::min({a.y, b.y, c.y})));
    int y1 = static_cast<int>(std::floor(std::max({a.y, b.y, c.y})));
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, big - 1);
    y1 = std::min(y1, big - 1);

    const double iza = 1.0 / a.z, izb = 1.0 / b.z, izc = 1.0 / c.z;
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double e0 = ((c.x - b.x) * (y - b.y) - (c.y - b.y) * (x - b.x)) * inv_area;
        const double e1 = ((a.x - c.x) * (y - c.y) - (a.y - c.y) * (x - c.x)) * inv_area;
        const double e2 = 1.0 - e0 - e1;
        if (e0 < 0.0 || e1 < 0.0 || e2 < 0.0) continue;

        const double inv_z = e0 * iza + e1 * izb + e2 * izc;
        const double z = 1.0 / inv_z;
        const size_t idx = static_cast<size_t>(y) * big + x;
        if (z >= depth[idx]) continue;
        depth[idx] = z;

        // Perspective-correct normal interpolation.
        const Vec3 n = normalized(a.normal * (e0 * iza * z) + b.normal * (e1 * izb * z) +
                                  c.normal * (e2 * izc * z));
        const double facing = std::fabs(dot(n, key_dir));
        const double w = params.wrap;
        const double diffuse =
            std::clamp((dot(n, key_dir) + w) / (1.0 + w), 0.0, 1.0) * 0.7 + 0.3 * facing;
        linear[idx] = mul(albedo, ambient + key * diffuse);
      }
    }
  }

  RenderResult out;
  out.image = Image(res, res);
  out.zbuffer = FloatImage(res, res, std::numeric_limits<float>::infinity());
  const double inv_ss2 = 1.0 / (ss * ss);
  for (int y = 0; y < res; ++y) {
    for (int x = 0; x < res; ++x) {
      Vec3 acc{};
      double zmin = std::numeric_limits<double>::infinity();
      for (int sy = 0; sy < ss; ++sy) {
        for (int sx = 0; sx < ss; ++sx) {
          const size_t idx = static_cast<size_t>(y * ss + sy) * big + (x * ss + sx);
          acc += linear[idx];
          zmin = std::min(zmin, depth[idx]);
        }
      }
      acc = acc * inv_ss2;
      uint8_t* px = out.image.at(x, y);
      px[0] = quantize8(srgb_encode(acc.x));
      px[1] = quantize8(srgb_encode(acc.y));
      px[2] = quantize8(srgb_encode(acc.z));
      float* zb = out.zbuffer.at(x, y);
      zb[0] = zb[1] = zb[2] = static_cast<float>(zmin);
    }
  }

  Annotation& ann = out.annotation;
  ann.meta = spec;
  double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
  double max_x = -min_x, max_y = -min_y;
  for (int i = 0; i < kNumJoints; ++i) {
    const Vec3 c = cam.to_camera(scene.fk.positions[i]);
    ann.keypoints_3d[i] = c;
    ann.keypoints_2d[i] = project_clamped(c, cam.vertical_fov, res);
    const Vec2& p = ann.keypoints_2d[i];
    const bool in_frame = p.x >= 0.0 && p.x < res && p.y >= 0.0 && p.y < res;
    ann.visible[i] =
        in_frame && c.z > 0.0 && keypoint_visible(p, c.z, out.zbuffer, params.visibility_epsilon);
    const double cx = std::clamp(p.x, 0.0, static_cast<double>(res - 1));
    const double cy = std::clamp(p.y, 0.0, static_cast<double>(res - 1));
    min_x = std::min(min_x, cx);
    max_x = std::max(max_x, cx);
    min_y = std::min(min_y, cy);
    max_y = std::max(max_y, cy);
  }
  ann.bbox = {min_x, min_y, max_x - min_x, max_y - min_y};
  return out;
}

RenderResult render_sample(const SampleSpec& spec, const GenerationConfig& config,
                           const PoseLibrary& library) {
  const SceneInstance scene = resolve_scene(spec, config, library);
  const SkinnedMesh mesh = build_mesh(scene.skeleton);
  const EnvMap env = EnvMap::open(spec.environment_id);
  return render(spec, scene, mesh, env, config.render);
}

json to_json(const Annotation& a) {
  json j;
  json k2 = json::array(), vis = json::array(), k3 = json::array();
  for (int i = 0; i < kNumJoints; ++i) {
    k2.push_back(json::array({a.keypoints_2d[i].x, a.keypoints_2d[i].y}));
    vis.push_back(a.visible[i]);
    k3.push_back(a.keypoints_3d[i]);
  }
  j["keypoints_2d"] = std::move(k2);
  j["visible"] = std::move(vis);
  j["keypoints_3d"] = std::move(k3);
  j["bbox"] = {{"x", a.bbox.x}, {"y", a.bbox.y}, {"w", a.bbox.w}, {"h", a.bbox.h}};
  j["meta"] = to_json(a.meta);
  return j;
}

Annotation annotation_from_json(const json& j) {
  Annotation a;
  const json& k2 = j.at("keypoints_2d");
  const json& vis = j.at("visible");
  const json& k3 = j.at("keypoints_3d");
  if (!k2.is_array() || k2.size() != kNumJoints || !vis.is_array() || vis.size() != kNumJoints ||
      !k3.is_array() || k3.size() != kNumJoints) {
    throw SchemaError("annotation must carry 21 keypoints, visibilities, and 3D points");
  }
  for (int i = 0; i < kNumJoints; ++i) {
    a.keypoints_2d[i] = {k2[i].at(0).get<double>(), k2[i].at(1).get<double>()};
    a.visible[i] = vis[i].get<bool>();
    a.keypoints_3d[i] = k3[i].get<Vec3>();
  }
  const json& bb = j.at("bbox");
  a.bbox = {require<double>(bb, "x"), require<double>(bb, "y"), require<double>(bb, "w"),
            require<double>(bb, "h")};
  a.meta = spec_from_json(j.at("meta"));
  return a;
}

}  // namespace handsynth
