#pragma once

#include <array>
#include <string>
#include <vector>

#include "motioncone/types.hpp"

namespace motioncone {

/// Ellipsoidal limit surface of the grasp contact, isotropic in force.
///
/// The surface is w^T A w = 1 with A = Diag(f_max^-2, f_max^-2, tau_max^-2).
/// Unit wrenches (the full wrench divided by f_max) live on
/// fx^2 + fz^2 + my^2 / rc^2 = 1, with rc = tau_max / f_max in mm.
class LimitSurfaceModel {
 public:
  LimitSurfaceModel(double f_max, double tau_max);

  /// Composite grasp surface: f_max = n_fingers * mu_c * N, tau_max = r * c * f_max.
  static LimitSurfaceModel from_grasp(double mu_c, double grasp_force, int n_fingers,
                                      double patch_radius, double pressure_constant);

  double f_max() const { return f_max_; }
  double tau_max() const { return tau_max_; }
  double rc() const { return tau_max_ / f_max_; }

  Mat3 A() const;
  /// Diag(1, 1, rc^-2): the unit-wrench metric of the surface.
  Mat3 B() const;

  /// fx^2 + fz^2 + my^2/rc^2 - 1 for a unit wrench.
  double unit_residual(const Wrench& unit) const;

 private:
  double f_max_;
  double tau_max_;
};

struct LimitSurfaceWrench {
  Wrench unit;  // on the unit surface
  Wrench full;  // f_max * unit
};

/// Friction wrench ON the object FROM the grasp for a contact-frame twist;
/// opposes the motion (maximal dissipation).
LimitSurfaceWrench ls_wrench_from_twist(const LimitSurfaceModel& ls, const Twist& v_contact);

/// Object-frame twist direction produced by a unit friction wrench on the
/// surface, inverse of ls_wrench_from_twist. Normalized under `metric`.
Twist ls_twist_from_wrench(const LimitSurfaceModel& ls, const Wrench& unit,
                           const ContactFrame& frame, const TwistMetric& metric);

struct PusherPoint {
  Vec2 position = Vec2::Zero();  // object frame, mm
  Vec2 normal = Vec2::UnitY();   // unit, into the object
};

// A point pusher (one point) or a line pusher (its two endpoints).
struct PusherContact {
  std::string label;
  std::vector<PusherPoint> points;
  double mu = 0.0;

  bool valid() const;
};

struct WrenchCone {
  std::vector<Wrench> generators;  // unit norm, object frame
};

/// Edges of the Coulomb cone as unit forces: normalize(n + mu t), normalize(n - mu t),
/// with t the normal rotated by -90 deg.
std::array<Vec2, 2> friction_cone_edges(const Vec2& normal, double mu);

/// Generalized friction cone of a pusher in the object frame; generators of
/// all constituent contacts, normalized, duplicates removed.
WrenchCone generalized_friction_cone(const PusherContact& pusher);

}  // namespace motioncone
