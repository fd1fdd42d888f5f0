#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace motioncone {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Wraps an angle to (-pi, pi].
double wrap_angle(double theta);

inline double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Rotation about +Y acting on (x, z) coordinates of the grasp plane.
/// x' = x cos + z sin, z' = -x sin + z cos.
Eigen::Matrix2d rotation_y(double theta);

// Planar twist [vx, vz, wy] of the object, body frame.
struct Twist {
  double vx = 0.0;
  double vz = 0.0;
  double wy = 0.0;

  Vec3 vec() const { return {vx, vz, wy}; }
  static Twist from(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
  bool operator==(const Twist&) const = default;
};

// Planar wrench [fx, fz, my]; my in N*mm.
struct Wrench {
  double fx = 0.0;
  double fz = 0.0;
  double my = 0.0;

  Vec3 vec() const { return {fx, fz, my}; }
  static Wrench from(const Vec3& w) { return {w.x(), w.y(), w.z()}; }
  bool operator==(const Wrench&) const = default;
};

/// Object configuration in the gripper frame. Lengths in mm, theta in rad.
struct PlanarPose {
  double x = 0.0;
  double z = 0.0;
  double theta = 0.0;

  PlanarPose() = default;
  PlanarPose(double x_, double z_, double theta_)
      : x(x_), z(z_), theta(wrap_angle(theta_)) {}

  static PlanarPose identity() { return {}; }

  Vec2 translation() const { return {x, z}; }

  /// Maps a point given in this pose's frame into the parent frame.
  Vec2 transform_point(const Vec2& p) const;
  /// Maps a parent-frame point into this pose's frame.
  Vec2 inverse_transform_point(const Vec2& p) const;
};

PlanarPose compose(const PlanarPose& a, const PlanarPose& b);
PlanarPose inverse(const PlanarPose& p);

/// Body-frame first-order integration: q composed with the displacement
/// (step * t) read as a pose increment.
PlanarPose apply_twist(const PlanarPose& q, const Twist& t, double step);

/// Body-frame displacement taking `from` onto `to`, i.e. inverse(from) * to,
/// returned as a twist over a unit step.
Twist displacement(const PlanarPose& from, const PlanarPose& to);

// Contact frame expressed in the object frame. `normal` points into the
// object for pusher contacts; for the grasp it is the second in-plane axis.
struct ContactFrame {
  Vec2 origin = Vec2::Zero();
  Vec2 tangent = Vec2::UnitX();
  Vec2 normal = Vec2::UnitY();

  /// Frame with the given normal and tangent = normal rotated by -90 deg.
  static ContactFrame from_normal(const Vec2& origin, const Vec2& normal);
  /// Frame with axes rotated by `theta` about +Y relative to the object axes.
  static ContactFrame from_angle(const Vec2& origin, double theta);

  bool valid(double tol = 1e-12) const;
};

/// Weighted norm on twists: |(vx, vz, length_scale * wy)|.
class TwistMetric {
 public:
  explicit TwistMetric(double length_scale = 25.0);

  double length_scale() const { return length_scale_; }

  /// Euclidean image of a twist under the metric.
  Vec3 scaled(const Twist& t) const { return {t.vx, t.vz, length_scale_ * t.wy}; }
  Twist unscaled(const Vec3& s) const {
    return {s.x(), s.y(), s.z() / length_scale_};
  }

  double norm(const Twist& t) const { return scaled(t).norm(); }
  Twist normalize(const Twist& t) const;
  double cosine(const Twist& a, const Twist& b) const;
  /// Angle between two twists, radians.
  double angle(const Twist& a, const Twist& b) const;

  /// Distance between two poses: weighted norm of the relative displacement
  /// with the angle wrapped.
  double distance(const PlanarPose& a, const PlanarPose& b) const;

 private:
  double length_scale_;
};

/// J_c: maps an object-frame twist to the contact frame. The angular rate is
/// unchanged; linear rates pick up the w x r lever term and are rotated into
/// the (tangent, normal) axes.
Mat3 twist_jacobian(const ContactFrame& frame);

/// J_c^T: maps a contact-frame wrench to the object frame.
Mat3 wrench_transform(const ContactFrame& frame);

/// Object-frame moment about +Y of a force f applied at r: z*fx - x*fz.
inline double moment_y(const Vec2& r, const Vec2& f) {
  return r.y() * f.x() - r.x() * f.y();
}

}  // namespace motioncone
