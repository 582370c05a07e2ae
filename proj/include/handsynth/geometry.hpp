#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace handsynth {

constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

struct Vec2 {
  double x = 0.0, y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
};

inline double norm(const Vec2& v) { return std::sqrt(v.x * v.x + v.y * v.y); }

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalized(const Vec3& v) {
  double n = norm(v);
  return n > 0.0 ? v / n : Vec3{0.0, 0.0, 0.0};
}

// Unit quaternion, scalar-first.
struct Quat {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  static Quat identity() { return {1.0, 0.0, 0.0, 0.0}; }

  static Quat from_axis_angle(const Vec3& axis, double angle_rad) {
    double n = std::sqrt(dot(axis, axis));
    Vec3 a = n > 0.0 ? axis / n : Vec3{0.0, 0.0, 0.0};
    double h = 0.5 * angle_rad;
    double s = std::sin(h);
    return {std::cos(h), a.x * s, a.y * s, a.z * s};
  }

  Quat operator*(const Quat& o) const {
    return {w * o.w - x * o.x - y * o.y - z * o.z,
            w * o.x + x * o.w + y * o.z - z * o.y,
            w * o.y - x * o.z + y * o.w + z * o.x,
            w * o.z + x * o.y - y * o.x + z * o.w};
  }

  Quat conjugate() const { return {w, -x, -y, -z}; }

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

  Quat normalized() const {
    double n = norm();
    return {w / n, x / n, y / n, z / n};
  }

  Vec3 rotate(const Vec3& v) const {
    // v' = v + 2*q_vec x (q_vec x v + w*v)
    Vec3 qv{x, y, z};
    Vec3 t = cross(qv, v) * 2.0;
    return v + t * w + cross(qv, t);
  }
};

inline double quat_dot(const Quat& a, const Quat& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

// Quaternion for the rotation matrix whose ROWS are r0, r1, r2 (i.e. the
// map v -> (dot(r0,v), dot(r1,v), dot(r2,v))). Rows must be orthonormal.
inline Quat quat_from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
  const double m00 = r0.x, m01 = r0.y, m02 = r0.z;
  const double m10 = r1.x, m11 = r1.y, m12 = r1.z;
  const double m20 = r2.x, m21 = r2.y, m22 = r2.z;
  const double trace = m00 + m11 + m22;
  Quat q;
  if (trace > 0.0) {
    double s = std::sqrt(trace + 1.0) * 2.0;
    q = {0.25 * s, (m21 - m12) / s, (m02 - m20) / s, (m10 - m01) / s};
  } else if (m00 > m11 && m00 > m22) {
    double s = std::sqrt(1.0 + m00 - m11 - m22) * 2.0;
    q = {(m21 - m12) / s, 0.25 * s, (m01 + m10) / s, (m02 + m20) / s};
  } else if (m11 > m22) {
    double s = std::sqrt(1.0 + m11 - m00 - m22) * 2.0;
    q = {(m02 - m20) / s, (m01 + m10) / s, 0.25 * s, (m12 + m21) / s};
  } else {
    double s = std::sqrt(1.0 + m22 - m00 - m11) * 2.0;
    q = {(m10 - m01) / s, (m02 + m20) / s, (m12 + m21) / s, 0.25 * s};
  }
  return q.normalized();
}

// Geodesic angle between two rotations, in [0, pi].
inline double rotation_angle_between(const Quat& a, const Quat& b) {
  double d = std::fabs(quat_dot(a, b));
  if (d > 1.0) d = 1.0;
  return 2.0 * std::acos(d);
}

// Shortest-arc spherical interpolation; flips sign so the pair stays on
// the same hemisphere (dot >= 0).
inline Quat slerp(const Quat& a, const Quat& bin, double t) {
  Quat b = bin;
  double d = quat_dot(a, b);
  if (d < 0.0) {
    b = {-b.w, -b.x, -b.y, -b.z};
    d = -d;
  }
  if (d > 1.0 - 1e-12) {
    Quat r{a.w + (b.w - a.w) * t, a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t,
           a.z + (b.z - a.z) * t};
    return r.normalized();
  }
  double theta = std::acos(d);
  double s = std::sin(theta);
  double fa = std::sin((1.0 - t) * theta) / s;
  double fb = std::sin(t * theta) / s;
  return Quat{a.w * fa + b.w * fb, a.x * fa + b.x * fb, a.y * fa + b.y * fb,
              a.z * fa + b.z * fb}
      .normalized();
}

// Intrinsic X-Y-Z factorization: q == Rx(rx) * Ry(ry) * Rz(rz).
struct EulerXYZ {
  double rx = 0.0, ry = 0.0, rz = 0.0;
};

inline EulerXYZ to_euler_xyz(const Quat& q) {
  // Rotation matrix rows from the quaternion.
  double r00 = 1.0 - 2.0 * (q.y * q.y + q.z * q.z);
  double r01 = 2.0 * (q.x * q.y - q.z * q.w);
  double r02 = 2.0 * (q.x * q.z + q.y * q.w);
  double r12 = 2.0 * (q.y * q.z - q.x * q.w);
  double r22 = 1.0 - 2.0 * (q.x * q.x + q.y * q.y);
  EulerXYZ e;
  double sy = r02;
  if (sy > 1.0) sy = 1.0;
  if (sy < -1.0) sy = -1.0;
  e.ry = std::asin(sy);
  if (std::fabs(sy) < 1.0 - 1e-9) {
    e.rx = std::atan2(-r12, r22);
    e.rz = std::atan2(-r01, r00);
  } else {
    // Gimbal pole: put all remaining rotation on X.
    double r10 = 2.0 * (q.x * q.y + q.z * q.w);
    double r11 = 1.0 - 2.0 * (q.x * q.x + q.z * q.z);
    e.rx = std::atan2(r10, r11);
    e.rz = 0.0;
  }
  return e;
}

inline Quat from_euler_xyz(const EulerXYZ& e) {
  return Quat::from_axis_angle({1, 0, 0}, e.rx) * Quat::from_axis_angle({0, 1, 0}, e.ry) *
         Quat::from_axis_angle({0, 0, 1}, e.rz);
}

// Rigid motion: p' = r * p + t.
struct RigidTransform {
  Quat r = Quat::identity();
  Vec3 t{0.0, 0.0, 0.0};

  static RigidTransform identity() { return {}; }

  Vec3 apply(const Vec3& p) const { return r.rotate(p) + t; }

  RigidTransform compose(const RigidTransform& o) const {
    // this ∘ o: apply o first, then this.
    return {(r * o.r).normalized(), r.rotate(o.t) + t};
  }

  RigidTransform inverse() const {
    Quat ri = r.conjugate();
    return {ri, ri.rotate(-t)};
  }
};

// Mirror across the YZ plane (x-negation). Conjugating a rotation by the
// reflection negates the y and z quaternion components.
inline Vec3 mirror_x(const Vec3& v) { return {-v.x, v.y, v.z}; }
inline Quat mirror_x(const Quat& q) { return {q.w, q.x, -q.y, -q.z}; }

}  // namespace handsynth
