#include "motioncone/types.hpp"

#include <algorithm>
#include <stdexcept>

namespace motioncone {

double wrap_angle(double theta) {
  constexpr double pi = std::numbers::pi;
  if (theta > -pi && theta <= pi) return theta;
  double w = std::remainder(theta, 2.0 * pi);  // in [-pi, pi]
  if (w <= -pi) w += 2.0 * pi;
  return w;
}

Eigen::Matrix2d rotation_y(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix2d r;
  r << c, s, -s, c;
  return r;
}

Vec2 PlanarPose::transform_point(const Vec2& p) const {
  return rotation_y(theta) * p + translation();
}

Vec2 PlanarPose::inverse_transform_point(const Vec2& p) const {
  return rotation_y(theta).transpose() * (p - translation());
}

PlanarPose compose(const PlanarPose& a, const PlanarPose& b) {
  const Vec2 t = a.transform_point(b.translation());
  return {t.x(), t.y(), a.theta + b.theta};
}

PlanarPose inverse(const PlanarPose& p) {
  const Vec2 t = -(rotation_y(p.theta).transpose() * p.translation());
  return {t.x(), t.y(), -p.theta};
}

PlanarPose apply_twist(const PlanarPose& q, const Twist& t, double step) {
  if (step < 0.0) throw std::invalid_argument("apply_twist: negative step");
  if (step == 0.0) return q;
  return compose(q, PlanarPose{step * t.vx, step * t.vz, step * t.wy});
}

Twist displacement(const PlanarPose& from, const PlanarPose& to) {
  const PlanarPose d = compose(inverse(from), to);
  return {d.x, d.z, d.theta};
}

ContactFrame ContactFrame::from_normal(const Vec2& origin, const Vec2& normal) {
  const Vec2 n = normal.normalized();
  return {origin, Vec2(n.y(), -n.x()), n};
}

ContactFrame ContactFrame::from_angle(const Vec2& origin, double theta) {
  const Eigen::Matrix2d r = rotation_y(theta);
  return {origin, r.col(0), r.col(1)};
}

bool ContactFrame::valid(double tol) const {
  return std::abs(tangent.norm() - 1.0) <= tol && std::abs(normal.norm() - 1.0) <= tol &&
         std::abs(tangent.dot(normal)) <= tol;
}

TwistMetric::TwistMetric(double length_scale) : length_scale_(length_scale) {
  if (!(length_scale > 0.0)) throw std::invalid_argument("TwistMetric: length_scale must be > 0");
}

Twist TwistMetric::normalize(const Twist& t) const {
  const double n = norm(t);
  if (n == 0.0) throw std::invalid_argument("TwistMetric::normalize: zero twist");
  return {t.vx / n, t.vz / n, t.wy / n};
}

double TwistMetric::cosine(const Twist& a, const Twist& b) const {
  const Vec3 sa = scaled(a), sb = scaled(b);
  const double d = sa.norm() * sb.norm();
  if (d == 0.0) return 0.0;
  return std::clamp(sa.dot(sb) / d, -1.0, 1.0);
}

double TwistMetric::angle(const Twist& a, const Twist& b) const {
  const Vec3 sa = scaled(a).normalized(), sb = scaled(b).normalized();
  // atan2 form keeps precision near 0 and pi.
  return std::atan2(sa.cross(sb).norm(), sa.dot(sb));
}

double TwistMetric::distance(const PlanarPose& a, const PlanarPose& b) const {
  return norm(displacement(a, b));
}

Mat3 twist_jacobian(const ContactFrame& frame) {
  Eigen::Matrix2d r;
  r.col(0) = frame.tangent;
  r.col(1) = frame.normal;
  // Velocity of the frame origin per unit wy: wy * (z, -x).
  const Vec2 lever(frame.origin.y(), -frame.origin.x());
  Mat3 j = Mat3::Zero();
  j.topLeftCorner<2, 2>() = r.transpose();
  j.topRightCorner<2, 1>() = r.transpose() * lever;
  j(2, 2) = 1.0;
  return j;
}

Mat3 wrench_transform(const ContactFrame& frame) {
  return twist_jacobian(frame).transpose();
}

}  // namespace motioncone
