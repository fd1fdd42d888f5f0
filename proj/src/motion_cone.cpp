#include "motioncone/motion_cone.hpp"

#include <cmath>
#include <string>

#include "motioncone/errors.hpp"

namespace motioncone {

LimitSurfaceModel GraspModel::limit_surface() const { return limit_surface(force); }

LimitSurfaceModel GraspModel::limit_surface(double grasp_force) const {
  return LimitSurfaceModel::from_grasp(mu, grasp_force, n_fingers, patch_radius,
                                       pressure_constant);
}

PushConfig PushConfig::from_scene(const Scene& scene, const PlanarPose& q,
                                  std::size_t pusher_index) {
  PushConfig cfg;
  cfg.q = q;
  cfg.pusher = scene.pusher_contact(pusher_index);
  cfg.grasp.finger_center = scene.grasp.finger_center_mm;
  cfg.grasp.patch_radius = scene.grasp.patch_radius_mm;
  cfg.grasp.pressure_constant = scene.grasp.pressure_constant;
  cfg.grasp.n_fingers = scene.grasp.n_fingers;
  cfg.grasp.force = scene.grasp.force_N;
  cfg.grasp.mu = scene.grasp.mu;
  cfg.mass_kg = scene.mass_kg();
  cfg.gravity = scene.in_plane_gravity();
  cfg.metric = TwistMetric(scene.planner.length_scale);
  return cfg;
}

ContactFrame PushConfig::grasp_frame() const {
  return ContactFrame::from_angle(q.inverse_transform_point(grasp.finger_center), -q.theta);
}

Wrench PushConfig::gravity_wrench() const {
  return {mass_kg * gravity.x(), mass_kg * gravity.y(), 0.0};
}

namespace {

struct Balance {
  Mat3 jt;       // J_c^T
  Mat3 jt_inv;   // J_c^-T
  Mat3 b;        // unit-surface metric
  double f_max;
  Vec3 gravity;  // m g
};

Balance make_balance(const PushConfig& cfg) {
  const LimitSurfaceModel ls = cfg.limit_surface();
  const Mat3 jt = wrench_transform(cfg.grasp_frame());
  return {jt, jt.inverse(), ls.B(), ls.f_max(), cfg.gravity_wrench().vec()};
}

GraspWrenchSolution solve_balance(const Balance& bal, const Vec3& w_p, int generator) {
  const Vec3 a = bal.jt_inv * w_p;
  const Vec3 b = -(bal.jt_inv * bal.gravity) / bal.f_max;
  const double qa = a.dot(bal.b * a);
  const double qb = a.dot(bal.b * b);
  const double qc = b.dot(bal.b * b) - 1.0;
  const double disc = qb * qb - qa * qc;
  const std::string tag = " (pusher generator " + std::to_string(generator) + ")";
  if (disc < 0.0 || qa <= 0.0)
    throw NoPositiveRoot("solve_grasp_wrench: no real root" + tag, generator);

  // Numerically stable pair of roots of qa x^2 + 2 qb x + qc = 0.
  const double s = std::sqrt(disc);
  const double q = -(qb + std::copysign(s, qb));
  double roots[2];
  int nroots = 0;
  if (q != 0.0) {
    roots[nroots++] = q / qa;
    roots[nroots++] = qc / q;
  } else {
    roots[nroots++] = 0.0;
  }
  int admissible = 0;
  double alpha = 0.0;
  for (int i = 0; i < nroots; ++i)
    if (roots[i] < 0.0) {
      ++admissible;
      alpha = roots[i];
    }
  if (admissible == 2 && roots[0] == roots[1]) admissible = 1;
  if (admissible == 0)
    throw NoPositiveRoot("solve_grasp_wrench: gravity exceeds grasp friction capacity" + tag,
                         generator);
  if (admissible == 2)
    throw AmbiguousRoot("solve_grasp_wrench: two roots give positive pusher force" + tag,
                        generator);

  GraspWrenchSolution sol;
  sol.alpha = alpha;
  sol.k = -bal.f_max * alpha;
  sol.unit = Wrench::from(alpha * a + b);
  sol.admissible_roots = admissible;
  return sol;
}

MotionCone assemble(const PushConfig& cfg, std::vector<Twist> twists, std::vector<Wrench> grasp,
                    std::vector<Wrench> pusher, std::vector<double> k, bool approx) {
  const TwistMetric& m = cfg.metric;
  std::vector<Vec3> scaled;
  for (const auto& t : twists) scaled.push_back(m.scaled(t));
  MotionCone cone;
  cone.source = cfg;
  cone.is_polyhedral_approx = approx;
  cone.geometry = PolyhedralCone(scaled);
  for (std::size_t i = 0; i < cone.geometry.generators().size(); ++i) {
    const int src = cone.geometry.source_index()[i];
    cone.generators.push_back(m.normalize(m.unscaled(cone.geometry.generators()[i])));
    cone.grasp_wrenches.push_back(grasp[src]);
    cone.pusher_wrenches.push_back(pusher[src]);
    cone.pusher_magnitude.push_back(k[src]);
  }
  cone.facets = cone.geometry.facets();
  cone.degenerate = cone.geometry.degenerate();
  return cone;
}

std::vector<Vec3> pusher_generators(const PushConfig& cfg) {
  std::vector<Vec3> out;
  for (const auto& g : cfg.pusher_cone().generators) out.push_back(g.vec());
  return out;
}

}  // namespace

GraspWrenchSolution solve_grasp_wrench(const PushConfig& cfg, const Wrench& pusher_unit) {
  return solve_balance(make_balance(cfg), pusher_unit.vec(), -1);
}

double force_balance_residual(const PushConfig& cfg, const Wrench& pusher_unit,
                              const GraspWrenchSolution& sol) {
  const Balance bal = make_balance(cfg);
  return (bal.f_max * (bal.jt * sol.unit.vec()) + sol.k * pusher_unit.vec() + bal.gravity).norm();
}

MotionCone gravity_free_cone(const PushConfig& cfg) {
  const LimitSurfaceModel ls = cfg.limit_surface();
  const ContactFrame frame = cfg.grasp_frame();
  const Mat3 jt_inv = wrench_transform(frame).inverse();
  const Mat3 b = ls.B();
  std::vector<Twist> twists;
  std::vector<Wrench> grasp, pusher;
  std::vector<double> k;
  for (const Vec3& wp : pusher_generators(cfg)) {
    const Vec3 a = jt_inv * wp;
    const Vec3 wc = -a / std::sqrt(a.dot(b * a));
    twists.push_back(ls_twist_from_wrench(ls, Wrench::from(wc), frame, cfg.metric));
    grasp.push_back(Wrench::from(wc));
    pusher.push_back(Wrench::from(wp));
    k.push_back(0.0);
  }
  return assemble(cfg, std::move(twists), std::move(grasp), std::move(pusher), std::move(k),
                  false);
}

MotionCone polyhedral_cone(const PushConfig& cfg) {
  const Balance bal = make_balance(cfg);
  const LimitSurfaceModel ls = cfg.limit_surface();
  const ContactFrame frame = cfg.grasp_frame();
  std::vector<Twist> twists;
  std::vector<Wrench> grasp, pusher;
  std::vector<double> k;
  const auto gens = pusher_generators(cfg);
  for (int i = 0; i < static_cast<int>(gens.size()); ++i) {
    const GraspWrenchSolution sol = solve_balance(bal, gens[i], i);
    twists.push_back(ls_twist_from_wrench(ls, sol.unit, frame, cfg.metric));
    grasp.push_back(sol.unit);
    pusher.push_back(Wrench::from(gens[i]));
    k.push_back(sol.k);
  }
  return assemble(cfg, std::move(twists), std::move(grasp), std::move(pusher), std::move(k),
                  bal.gravity.squaredNorm() > 0.0);
}

bool contains(const MotionCone& cone, const Twist& t, double eps) {
  return cone.geometry.contains(cone.metric().scaled(t), eps);
}

Twist project(const MotionCone& cone, const Twist& t) {
  const TwistMetric& m = cone.metric();
  return m.normalize(m.unscaled(cone.geometry.project(m.scaled(t))));
}

double signed_boundary_angle(const MotionCone& cone, const Twist& t) {
  return cone.geometry.signed_boundary_angle(cone.metric().scaled(t));
}

namespace {

struct RequiredWrench {
  Wrench grasp_unit;
  Vec3 required;
  double dissipation;
};

RequiredWrench required_at(const PushConfig& cfg, const Twist& t, double grasp_force) {
  const ContactFrame frame = cfg.grasp_frame();
  const Vec3 v_c = twist_jacobian(frame) * t.vec();
  // The unit wrench depends on rc only, so any positive force gives it.
  const LimitSurfaceModel ls = cfg.grasp.limit_surface(1.0);
  const LimitSurfaceWrench w = ls_wrench_from_twist(ls, Twist::from(v_c));
  const double f_max = cfg.grasp.n_fingers * cfg.grasp.mu * grasp_force;
  const Vec3 req = -f_max * (wrench_transform(frame) * w.unit.vec()) - cfg.gravity_wrench().vec();
  return {w.unit, req, f_max * w.unit.vec().dot(v_c)};
}

}  // namespace

Wrench required_pusher_wrench(const PushConfig& cfg, const Twist& t, double grasp_force) {
  return Wrench::from(required_at(cfg, t, grasp_force).required);
}

StablePushCheck check_stable_push(const PushConfig& cfg, const Twist& t) {
  const RequiredWrench r = required_at(cfg, t, cfg.grasp.force);
  const auto gens = pusher_generators(cfg);
  const ConicProjection proj = project_onto_conic_hull(gens, r.required);
  StablePushCheck out;
  out.grasp_unit = r.grasp_unit;
  out.required = Wrench::from(r.required);
  out.residual = proj.residual;
  out.pusher_weights = proj.weights;
  out.dissipation = r.dissipation;
  const double scale = r.required.norm();
  out.stable = scale == 0.0 || proj.residual <= kMembershipEps * scale;
  return out;
}

bool is_stable_push(const PushConfig& cfg, const Twist& t) {
  return check_stable_push(cfg, t).stable;
}

bool is_stable_push_at(const PushConfig& cfg, const Twist& t, double grasp_force) {
  const Vec3 req = required_at(cfg, t, grasp_force).required;
  return in_conic_hull(pusher_generators(cfg), req, kMembershipEps);
}

std::optional<double> min_grasp_force(const PushConfig& cfg, const Twist& t,
                                      const MinGraspForceOptions& opts) {
  PushConfig no_gravity = cfg;
  no_gravity.gravity = Vec2::Zero();
  if (!is_stable_push_at(no_gravity, t, 1.0))
    throw HypothesisViolated("min_grasp_force: twist is outside the gravity-free motion cone");
  if (is_stable_push_at(cfg, t, 0.0)) return 0.0;
  if (!is_stable_push_at(cfg, t, opts.n_max)) return std::nullopt;

  double lo = 0.0, hi = opts.n_max;
  const double abs_tol = opts.abs_tol * opts.n_max;
  for (int it = 0; it < 200; ++it) {
    const double tol = std::max(1e-15 * opts.n_max, std::min(abs_tol, opts.rel_tol * hi));
    if (hi - lo <= tol) break;
    const double mid = 0.5 * (lo + hi);
    if (is_stable_push_at(cfg, t, mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace motioncone
