#include "handsynth/camera.hpp"

#include <cmath>
#include <stdexcept>

namespace handsynth {

Camera make_camera(const CameraConfig& cfg, const Vec3& target) {
  const double ce = std::cos(cfg.elevation), se = std::sin(cfg.elevation);
  const Vec3 offset{cfg.radius * ce * std::cos(cfg.azimuth),
                    cfg.radius * ce * std::sin(cfg.azimuth), cfg.radius * se};
  const Vec3 position = target + offset;

  const Vec3 forward = normalized(target - position);
  // Elevation is capped well below the poles, so forward never parallels +Z.
  const Vec3 right = normalized(cross(forward, Vec3{0.0, 0.0, 1.0}));
  const Vec3 down = cross(forward, right);

  Quat r = quat_from_rows(right, down, forward);
  const Quat jit = Quat::from_axis_angle({0, 0, 1}, cfg.jitter.z) *
                   Quat::from_axis_angle({0, 1, 0}, cfg.jitter.y) *
                   Quat::from_axis_angle({1, 0, 0}, cfg.jitter.x);
  r = (jit * r).normalized();

  Camera cam;
  cam.world_to_camera = {r, -r.rotate(position)};
  cam.vertical_fov = cfg.vertical_fov;
  cam.resolution = cfg.resolution;
  return cam;
}

Vec3 Camera::ray_direction(double px, double py) const {
  const double half = resolution * 0.5;
  const double fl = half / std::tan(vertical_fov * 0.5);
  const Vec3 dir_cam{(px - half) / fl, (py - half) / fl, 1.0};
  return normalized(world_to_camera.r.conjugate().rotate(dir_cam));
}

Vec2 project(const Vec3& p, double vertical_fov, int resolution) {
  if (p.z <= 0.0) throw std::domain_error("projection of a point behind the camera");
  const double half = resolution * 0.5;
  const double fl = half / std::tan(vertical_fov * 0.5);
  return {half + fl * (p.x / p.z), half + fl * (p.y / p.z)};
}

Vec2 project_clamped(const Vec3& p, double vertical_fov, int resolution) {
  constexpr double kNear = 1e-6;
  Vec3 q = p;
  if (q.z < kNear) q.z = kNear;
  return project(q, vertical_fov, resolution);
}

}  // namespace handsynth
