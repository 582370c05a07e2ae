#pragma once

#include "handsynth/geometry.hpp"

namespace handsynth {

// Sampled camera parameters: an orbit position around the look target plus
// small per-axis angular jitter, a vertical field of view, and exposure.
struct CameraConfig {
  double radius = 0.6;      // meters from the target
  double azimuth = 0.0;     // radians, about world +Z
  double elevation = 0.0;   // radians above the horizon
  Vec3 jitter{0, 0, 0};     // small-angle radians about camera x/y/z
  double vertical_fov = deg_to_rad(50.0);
  double exposure_ev = 0.0;
  int resolution = 640;     // square images
};

// Camera space: x right, y down, z forward (into the scene).
struct Camera {
  RigidTransform world_to_camera;
  double vertical_fov = deg_to_rad(50.0);
  int resolution = 640;

  Vec3 to_camera(const Vec3& world) const { return world_to_camera.apply(world); }

  // The world-space ray direction through pixel center (px, py).
  Vec3 ray_direction(double px, double py) const;

  Vec3 position() const { return world_to_camera.inverse().t; }
};

// Places the camera on its orbit looking at `target` (world Z-up), then
// applies the jitter rotations about the camera's own axes (x, then y,
// then z).
Camera make_camera(const CameraConfig& cfg, const Vec3& target);

// Pinhole projection of a camera-space point to pixel coordinates;
// principal point at the image center, square pixels. Throws
// std::domain_error when z <= 0 (behind the camera).
Vec2 project(const Vec3& camera_space, double vertical_fov, int resolution);

// Lenient variant for annotation plumbing: points at or behind the camera
// plane project through a tiny positive depth instead of throwing, keeping
// coordinates finite (and far out of frame).
Vec2 project_clamped(const Vec3& camera_space, double vertical_fov, int resolution);

}  // namespace handsynth
