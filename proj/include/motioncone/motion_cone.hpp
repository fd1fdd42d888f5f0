#pragma once

#include <optional>
#include <vector>

#include "motioncone/contact.hpp"
#include "motioncone/polyhedral_cone.hpp"
#include "motioncone/scene.hpp"
#include "motioncone/types.hpp"

namespace motioncone {

/// Grasp parameters that enter the limit surface.
struct GraspModel {
  Vec2 finger_center = Vec2::Zero();  // gripper frame, mm
  double patch_radius = 5.0;          // mm
  double pressure_constant = 0.6;
  int n_fingers = 1;
  double force = 45.0;                // N
  double mu = 0.5;

  LimitSurfaceModel limit_surface() const;
  LimitSurfaceModel limit_surface(double grasp_force) const;
};

/// One grasp-pusher configuration at object pose q.
///
/// The object frame sits at the center of gravity; pushers and gravity are fixed
/// in it, while the finger patch is fixed in the gripper frame and moves in the
/// object frame with q.
struct PushConfig {
  PlanarPose q;
  PusherContact pusher;
  GraspModel grasp;
  double mass_kg = 0.0;
  Vec2 gravity = Vec2(0.0, -9.81);  // m/s^2, object frame
  TwistMetric metric;

  static PushConfig from_scene(const Scene& scene, const PlanarPose& q, std::size_t pusher_index);

  ContactFrame grasp_frame() const;
  LimitSurfaceModel limit_surface() const { return grasp.limit_surface(); }
  /// m*g through the center of gravity: zero torque.
  Wrench gravity_wrench() const;
  WrenchCone pusher_cone() const { return generalized_friction_cone(pusher); }
};

struct GraspWrenchSolution {
  Wrench unit;    // w_c on the unit limit surface, contact frame
  double k = 0.0; // pusher wrench magnitude along the unit pusher wrench
  double alpha = 0.0;
  int admissible_roots = 0;
};

/// Force balance with a fixed pusher wrench direction: solves
/// J_c^T w_c = -(k w_p + m g) / (mu_c N) jointly with the unit limit surface,
/// reducing it to a scalar quadratic in alpha = -k / (mu_c N).
GraspWrenchSolution solve_grasp_wrench(const PushConfig& cfg, const Wrench& pusher_unit);

/// |f_max J_c^T w_c + k w_p + m g| for a solution.
double force_balance_residual(const PushConfig& cfg, const Wrench& pusher_unit,
                              const GraspWrenchSolution& sol);

struct MotionCone {
  std::vector<Twist> generators;         // unit under the metric, canonical order
  std::vector<Wrench> grasp_wrenches;    // per generator, contact frame
  std::vector<Wrench> pusher_wrenches;   // source pusher generator, object frame
  std::vector<double> pusher_magnitude;  // k per generator (gravity-free: 0)
  std::vector<ConeFacet> facets;         // normals in metric-scaled twist space
  bool is_polyhedral_approx = false;
  bool degenerate = true;
  PushConfig source;
  PolyhedralCone geometry;               // metric-scaled coordinates

  const TwistMetric& metric() const { return source.metric; }
};

/// Motion cone without gravity: the limit-surface image of -W_pusher, exact.
MotionCone gravity_free_cone(const PushConfig& cfg);

/// Polyhedral approximation at the configured grasp force: one edge per pusher
/// cone generator. Throws NoPositiveRoot / AmbiguousRoot tagged with the generator.
MotionCone polyhedral_cone(const PushConfig& cfg);

inline constexpr double kMembershipEps = 1e-9;
inline constexpr double kBoundaryBandDeg = 2.0;

bool contains(const MotionCone& cone, const Twist& t, double eps = kMembershipEps);
/// Unit twist of the cone with the largest metric cosine to t.
Twist project(const MotionCone& cone, const Twist& t);
/// Metric angle from t to the cone boundary; negative inside.
double signed_boundary_angle(const MotionCone& cone, const Twist& t);

struct StablePushCheck {
  bool stable = false;
  Wrench grasp_unit;       // w_c from the twist, contact frame
  Wrench required;         // -mu_c N J_c^T w_c - m g, object frame
  double residual = 0.0;   // distance of `required` from W_pusher
  std::vector<double> pusher_weights;
  double dissipation = 0.0;  // full grasp wrench . contact twist (<= 0)
};

/// Net wrench the pusher must supply for object twist t at grasp force N.
Wrench required_pusher_wrench(const PushConfig& cfg, const Twist& t, double grasp_force);

/// Exact (curved-cone) stable-push test: maps t to the grasp friction wrench
/// and checks the required pusher wrench against W_pusher.
StablePushCheck check_stable_push(const PushConfig& cfg, const Twist& t);
bool is_stable_push(const PushConfig& cfg, const Twist& t);
bool is_stable_push_at(const PushConfig& cfg, const Twist& t, double grasp_force);

struct MinGraspForceOptions {
  double n_max = 1000.0;
  double abs_tol = 1e-6;  // fraction of n_max
  double rel_tol = 1e-9;  // fraction of the bracket's upper end
};

/// Least grasp force making t a stable push; nullopt if n_max is not enough.
/// Throws HypothesisViolated when t is outside the gravity-free cone.
std::optional<double> min_grasp_force(const PushConfig& cfg, const Twist& t,
                                      const MinGraspForceOptions& opts = {});

}  // namespace motioncone
