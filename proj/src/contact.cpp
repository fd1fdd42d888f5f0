#include "motioncone/contact.hpp"

#include <cmath>
#include <stdexcept>

#include "motioncone/errors.hpp"

namespace motioncone {

LimitSurfaceModel::LimitSurfaceModel(double f_max, double tau_max)
    : f_max_(f_max), tau_max_(tau_max) {
  if (!(f_max > 0.0) || !(tau_max > 0.0) || !std::isfinite(f_max) || !std::isfinite(tau_max))
    throw std::invalid_argument("LimitSurfaceModel: f_max and tau_max must be finite and > 0");
}

LimitSurfaceModel LimitSurfaceModel::from_grasp(double mu_c, double grasp_force, int n_fingers,
                                                double patch_radius, double pressure_constant) {
  const double f_max = n_fingers * mu_c * grasp_force;
  return {f_max, patch_radius * pressure_constant * f_max};
}

Mat3 LimitSurfaceModel::A() const {
  return Vec3(1.0 / (f_max_ * f_max_), 1.0 / (f_max_ * f_max_), 1.0 / (tau_max_ * tau_max_))
      .asDiagonal();
}

Mat3 LimitSurfaceModel::B() const {
  const double r = rc();
  return Vec3(1.0, 1.0, 1.0 / (r * r)).asDiagonal();
}

double LimitSurfaceModel::unit_residual(const Wrench& unit) const {
  const double r = rc();
  return unit.fx * unit.fx + unit.fz * unit.fz + unit.my * unit.my / (r * r) - 1.0;
}

LimitSurfaceWrench ls_wrench_from_twist(const LimitSurfaceModel& ls, const Twist& v_contact) {
  const Vec3 v = v_contact.vec();
  if (v.squaredNorm() == 0.0 || !v.allFinite())
    throw LimitSurfaceError("ls_wrench_from_twist: zero or non-finite twist");
  const Vec3 a_inv(ls.f_max() * ls.f_max(), ls.f_max() * ls.f_max(), ls.tau_max() * ls.tau_max());
  const Vec3 av = a_inv.cwiseProduct(v);
  const Vec3 full = -av / std::sqrt(v.dot(av));
  return {Wrench::from(full / ls.f_max()), Wrench::from(full)};
}

Twist ls_twist_from_wrench(const LimitSurfaceModel& ls, const Wrench& unit,
                           const ContactFrame& frame, const TwistMetric& metric) {
  const double res = ls.unit_residual(unit);
  if (!(std::abs(res) < 1e-8))
    throw LimitSurfaceError("ls_twist_from_wrench: wrench off the limit surface (residual " +
                            std::to_string(res) + ")");
  const Vec3 v_contact = -(ls.B() * unit.vec());
  const Vec3 v_obj = twist_jacobian(frame).inverse() * v_contact;
  return metric.normalize(Twist::from(v_obj));
}

bool PusherContact::valid() const {
  if (points.empty() || points.size() > 2 || !(mu >= 0.0)) return false;
  for (const auto& p : points)
    if (std::abs(p.normal.norm() - 1.0) > 1e-9) return false;
  return true;
}

std::array<Vec2, 2> friction_cone_edges(const Vec2& normal, double mu) {
  const Vec2 n = normal.normalized();
  const Vec2 t(n.y(), -n.x());
  return {(n + mu * t).normalized(), (n - mu * t).normalized()};
}

WrenchCone generalized_friction_cone(const PusherContact& pusher) {
  if (!pusher.valid()) throw std::invalid_argument("generalized_friction_cone: invalid pusher '" + pusher.label + "'");
  WrenchCone cone;
  for (const auto& pt : pusher.points) {
    const ContactFrame frame = ContactFrame::from_normal(pt.position, pt.normal);
    const Mat3 jt = wrench_transform(frame);
    for (const Vec2& e : friction_cone_edges(pt.normal, pusher.mu)) {
      const Vec3 local(e.dot(frame.tangent), e.dot(frame.normal), 0.0);
      const Vec3 w = (jt * local).normalized();
      bool duplicate = false;
      for (const auto& g : cone.generators)
        if ((g.vec() - w).norm() < 1e-9) duplicate = true;
      if (!duplicate) cone.generators.push_back(Wrench::from(w));
    }
  }
  return cone;
}

}  // namespace motioncone
