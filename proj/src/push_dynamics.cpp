#include "motioncone/push_dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "motioncone/errors.hpp"
#include "motioncone/rng.hpp"

namespace motioncone {

const char* to_string(PushMode mode) { return mode == PushMode::stick ? "stick" : "projected"; }

const char* to_string(PushClass cls) {
  switch (cls) {
    case PushClass::stick: return "stick";
    case PushClass::slip: return "slip";
    case PushClass::boundary: return "boundary";
  }
  return "?";
}

namespace {

bool certified(const MotionCone& cone, const Twist& t) {
  return contains(cone, t) && is_stable_push(cone.source, t);
}

}  // namespace

Twist certified_twist(const MotionCone& cone, const Twist& t) {
  const TwistMetric& m = cone.metric();
  const Twist p = project(cone, t);
  if (certified(cone, p)) return p;
  const Vec3 u = m.scaled(p);
  const Vec3 axis = cone.geometry.axis();
  if (axis.squaredNorm() > 0.0)
    for (double eps = 1e-7; eps <= 1.0; eps *= 2.0) {
      const Vec3 c = (1.0 - eps) * u + eps * axis;
      if (c.norm() < 1e-12) continue;
      const Twist cand = m.normalize(m.unscaled(c));
      if (certified(cone, cand)) return cand;
    }
  for (const auto& g : cone.generators)
    if (certified(cone, g)) return g;
  throw ConeUnavailable("no twist of the motion cone passes the stable-push test");
}

PushOutcome propagate(const MotionCone& cone, const Twist& target, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("propagate: step must be > 0");
  const TwistMetric& m = cone.metric();
  const Twist goal = m.normalize(target);
  PushOutcome out;
  out.executed_twist = certified_twist(cone, goal);
  out.q_new = apply_twist(cone.source.q, out.executed_twist, step);
  out.mode = m.cosine(out.executed_twist, goal) >= 1.0 - 1e-9 ? PushMode::stick
                                                              : PushMode::projected;
  out.pusher = cone.source.pusher.label;
  return out;
}

PushOutcome propagate(const PushConfig& cfg, const Twist& target, double step) {
  MotionCone cone;
  try {
    cone = polyhedral_cone(cfg);
  } catch (const NoPositiveRoot& e) {
    throw ConeUnavailable(std::string("propagate: ") + e.what());
  } catch (const AmbiguousRoot& e) {
    throw ConeUnavailable(std::string("propagate: ") + e.what());
  }
  return propagate(cone, target, step);
}

PushClass classify_push(const MotionCone& cone, const Vec3& d) {
  const Twist t = Twist::from(d);
  if (std::abs(signed_boundary_angle(cone, t)) < deg2rad(kBoundaryBandDeg))
    return PushClass::boundary;
  return contains(cone, t) ? PushClass::stick : PushClass::slip;
}

PushClass classify_push(const PushConfig& cfg, const Vec3& d) {
  return classify_push(polyhedral_cone(cfg), d);
}

ValidationReport validate_displacements(const PushConfig& cfg, const std::vector<Vec3>& ds) {
  const MotionCone cone = polyhedral_cone(cfg);
  ValidationReport rep;
  rep.pusher = cfg.pusher.label;
  rep.n_samples = static_cast<int>(ds.size());
  rep.samples.resize(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    ValidationSample& s = rep.samples[i];
    const Twist t = Twist::from(ds[i]);
    s.idx = static_cast<int>(i);
    s.displacement = ds[i];
    s.predicted_stick = contains(cone, t);
    s.oracle_stick = is_stable_push(cfg, t);
    s.boundary = std::abs(signed_boundary_angle(cone, t)) < deg2rad(kBoundaryBandDeg);
  }
  for (const auto& s : rep.samples) {
    ++rep.confusion[s.predicted_stick ? 0 : 1][s.oracle_stick ? 0 : 1];
    if (s.boundary) {
      ++rep.n_boundary;
      continue;
    }
    ++rep.n_outside_band;
    if (s.predicted_stick == s.oracle_stick) ++rep.n_agree_outside_band;
  }
  return rep;
}

ValidationReport monte_carlo_validation(const Scene& scene, std::size_t pusher, int n,
                                        const ValidationRanges& r, std::uint64_t seed,
                                        const PlanarPose& q) {
  if (n < 1) throw std::invalid_argument("monte_carlo_validation: n must be >= 1");
  if (!(r.x_mm[0] <= r.x_mm[1] && r.z_mm[0] <= r.z_mm[1] && r.theta_deg[0] <= r.theta_deg[1]))
    throw std::invalid_argument("monte_carlo_validation: ranges must be well ordered");
  Rng rng(seed);
  std::vector<Vec3> ds;
  ds.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double dx = rng.uniform(r.x_mm[0], r.x_mm[1]);
    const double dz = rng.uniform(r.z_mm[0], r.z_mm[1]);
    const double dt = rng.uniform(r.theta_deg[0], r.theta_deg[1]);
    ds.emplace_back(dx, dz, deg2rad(dt));
  }
  ValidationReport rep = validate_displacements(PushConfig::from_scene(scene, q, pusher), ds);
  rep.seed = seed;
  rep.ranges = r;
  return rep;
}

namespace {

void weight_grid(int dims, int total, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == dims - 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int w = total; w >= 0; --w) {
    cur.push_back(w);
    weight_grid(dims, total - w, cur, out);
    cur.pop_back();
  }
}

}  // namespace

ConeOracleCloud brute_force_cone_oracle(const PushConfig& cfg, int resolution) {
  if (resolution < 8) throw std::invalid_argument("brute_force_cone_oracle: resolution >= 8");
  const WrenchCone wc = cfg.pusher_cone();
  std::vector<Vec3> gens;
  for (const auto& g : wc.generators) gens.push_back(g.vec());
  const PolyhedralCone w_pusher(gens);
  const MotionCone poly = polyhedral_cone(cfg);
  const LimitSurfaceModel ls = cfg.limit_surface();
  const ContactFrame frame = cfg.grasp_frame();

  std::vector<std::vector<int>> grid;
  std::vector<int> cur;
  weight_grid(static_cast<int>(gens.size()), resolution, cur, grid);

  ConeOracleCloud cloud;
  for (const auto& w : grid) {
    Vec3 wp = Vec3::Zero();
    for (std::size_t i = 0; i < gens.size(); ++i) wp += w[i] * gens[i];
    if (wp.norm() < 1e-12) continue;
    wp.normalize();
    GraspWrenchSolution sol;
    try {
      sol = solve_grasp_wrench(cfg, Wrench::from(wp));
    } catch (const Error&) {
      ++cloud.n_unsolvable;
      continue;
    }
    const Twist t = ls_twist_from_wrench(ls, sol.unit, frame, cfg.metric);
    bool on_facet = w_pusher.degenerate();
    for (const auto& f : w_pusher.facets())
      if (std::abs(f.normal.dot(wp)) < 1e-9) on_facet = true;
    const double ang = signed_boundary_angle(poly, t);
    cloud.twists.push_back(t);
    cloud.weights.push_back(w);
    cloud.on_pusher_boundary.push_back(on_facet);
    cloud.boundary_angle.push_back(ang);
    cloud.max_outside_angle = std::max(cloud.max_outside_angle, ang);
    if (on_facet)
      cloud.max_boundary_deviation = std::max(cloud.max_boundary_deviation, std::abs(ang));
  }
  return cloud;
}

}  // namespace motioncone
