#pragma once

#include <random>

#include "motioncone/motion_cone.hpp"
#include "oracles.hpp"

namespace fixture {

using namespace motioncone;

// Rectangular prism, left line pusher, 45 N grasp.
inline PushConfig rect_left(const PlanarPose& q = {}) {
  const Scene s = oracle::load("rect_prism");
  return PushConfig::from_scene(s, q, *s.pusher_index("left"));
}

// Random single-face pusher, grasp and gravity. The pusher face sits on one
// side of a box around the center of gravity.
inline PushConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto in = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
  PushConfig cfg;
  cfg.q = PlanarPose(in(-5, 5), in(-5, 5), in(-0.3, 0.3));
  const double hx = in(20, 50), hz = in(10, 25);
  const int side = static_cast<int>(u(rng) * 3);
  PusherContact p;
  p.label = "p";
  p.mu = in(0.05, 0.6);
  if (side == 0) {  // left face, pushing +x
    p.points = {{{-hx, in(0.2, 0.9) * hz}, Vec2::UnitX()}, {{-hx, -in(0.2, 0.9) * hz}, Vec2::UnitX()}};
  } else if (side == 1) {  // right face, pushing -x
    p.points = {{{hx, in(0.2, 0.9) * hz}, -Vec2::UnitX()}, {{hx, -in(0.2, 0.9) * hz}, -Vec2::UnitX()}};
  } else {  // bottom face, pushing +z
    p.points = {{{in(0.2, 0.9) * hx, -hz}, Vec2::UnitY()}, {{-in(0.2, 0.9) * hx, -hz}, Vec2::UnitY()}};
  }
  if (u(rng) < 0.3) p.points.pop_back();
  cfg.pusher = p;
  cfg.grasp.finger_center = {in(-10, 10), in(-5, 5)};
  cfg.grasp.patch_radius = in(4, 15);
  cfg.grasp.pressure_constant = 0.6;
  cfg.grasp.n_fingers = u(rng) < 0.5 ? 1 : 2;
  cfg.grasp.force = in(20, 100);
  cfg.grasp.mu = in(0.3, 0.9);
  cfg.mass_kg = in(0.02, 0.3);
  cfg.gravity = Vec2(0.0, -9.81);
  cfg.metric = TwistMetric(25.0);
  return cfg;
}

inline PushConfig zero_gravity(PushConfig cfg) {
  cfg.gravity = Vec2::Zero();
  return cfg;
}

inline std::vector<Vec3> scaled_generators(const MotionCone& c) {
  std::vector<Vec3> g;
  for (const auto& t : c.generators) g.push_back(c.metric().scaled(t));
  return g;
}

inline std::vector<Vec3> pusher_generators(const PushConfig& cfg) {
  std::vector<Vec3> g;
  for (const auto& w : cfg.pusher_cone().generators) g.push_back(w.vec());
  return g;
}

}  // namespace fixture

namespace fixture {

// Stable-push test rebuilt from the contact mechanics: grasp friction at the
// finger patch from maximal dissipation, force balance, and NNLS membership
// in the pusher friction cones built from raw point forces.
struct OracleVerdict {
  bool stable = false;
  Vec3 required = Vec3::Zero();
  double residual = 0.0;
};

inline OracleVerdict oracle_stable_push(const PushConfig& cfg, const Twist& t, double force = -1.0) {
  if (force < 0.0) force = cfg.grasp.force;
  const double c = std::cos(cfg.q.theta), s = std::sin(cfg.q.theta);
  // Finger patch (gripper frame) seen from the object: undo the pose.
  const Vec2 d = cfg.grasp.finger_center - Vec2(cfg.q.x, cfg.q.z);
  const Vec2 origin(c * d.x() - s * d.y(), s * d.x() + c * d.y());
  // Gripper axes in the object frame.
  const Vec2 ex(c, s), ez(-s, c);
  const Vec3 v = oracle::contact_twist(t.vec(), origin, ex, ez);
  const double f_max = cfg.grasp.n_fingers * cfg.grasp.mu * force;
  const double rc = cfg.grasp.patch_radius * cfg.grasp.pressure_constant;
  const Vec3 ainv_v(v.x(), v.y(), rc * rc * v.z());
  const Vec3 unit = -ainv_v / std::sqrt(v.dot(ainv_v));
  const Vec2 f = unit.x() * ex + unit.y() * ez;
  Vec3 grasp = oracle::point_wrench(origin, f);
  grasp.z() += unit.z();
  const Vec3 required = -f_max * grasp - cfg.mass_kg * Vec3(cfg.gravity.x(), cfg.gravity.y(), 0.0);
  std::vector<Vec3> gens;
  for (const auto& p : cfg.pusher.points) {
    const Vec2 n = p.normal.normalized();
    const Vec2 tg(n.y(), -n.x());
    for (double sgn : {1.0, -1.0})
      gens.push_back(oracle::point_wrench(p.position, n + sgn * cfg.pusher.mu * tg));
  }
  const auto sol = oracle::nnls(gens, required);
  return {sol.residual <= 1e-9 * required.norm(), required, sol.residual};
}

}  // namespace fixture
