#include "motioncone/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>


#include "log.hpp"
#include "motioncone/errors.hpp"

namespace motioncone {

PlannerParams PlannerParams::from_scene(const Scene& scene, std::uint64_t seed) {
  const ScenePlanner& s = scene.planner;
  PlannerParams p;
  p.step = s.step;
  p.goal_tolerance = s.goal_tolerance;
  p.cost_threshold = s.cost_threshold;
  p.same_pusher_cost = s.same_pusher_cost;
  p.switch_pusher_cost = s.switch_pusher_cost;
  p.length_scale = s.length_scale;
  p.t_init = s.t_init;
  p.max_fail = s.max_fail;
  p.rewire_radius = s.rewire_radius;
  p.goal_bias = s.goal_bias;
  p.max_iterations = s.max_iterations;
  p.bounds_x = s.bounds_x;
  p.bounds_z = s.bounds_z;
  p.bounds_theta_deg = s.bounds_theta_deg;
  p.seed = seed;
  return p;
}

bool PlannerParams::in_bounds(const PlanarPose& q) const {
  const double th = rad2deg(q.theta);
  return q.x >= bounds_x[0] && q.x <= bounds_x[1] && q.z >= bounds_z[0] && q.z <= bounds_z[1] &&
         th >= bounds_theta_deg[0] && th <= bounds_theta_deg[1];
}

bool PlannerParams::within_goal(const PlanarPose& q, const PlanarPose& goal) const {
  return std::abs(q.x - goal.x) <= goal_tolerance[0] &&
         std::abs(q.z - goal.z) <= goal_tolerance[1] &&
         std::abs(rad2deg(wrap_angle(q.theta - goal.theta))) <= goal_tolerance[2];
}

bool TreeNode::has_cone() const {
  return std::any_of(cones.begin(), cones.end(), [](const auto& c) { return c.has_value(); });
}

bool SearchTree::is_ancestor(int ancestor, int node) const {
  for (int n = node; n >= 0; n = nodes[n].parent)
    if (n == ancestor) return true;
  return false;
}

std::vector<int> SearchTree::path_to(int node) const {
  std::vector<int> path;
  for (int n = node; n >= 0; n = nodes[n].parent) path.push_back(n);
  std::reverse(path.begin(), path.end());
  return path;
}

bool transition_test(double c_parent, double c_child, TransitionState& s, Rng& rng,
                     int max_fail) {
  const double k = s.k();
  s.cost_sum += c_child;
  ++s.cost_count;
  if (c_child <= c_parent) return true;
  const double p = std::exp(-(c_child - c_parent) / (k * s.temperature));
  if (rng.uniform() < p) {
    s.temperature /= 2.0;
    s.fails = 0;
    return true;
  }
  ++s.fails;
  s.temperature *= std::pow(2.0, static_cast<double>(s.fails) / max_fail);
  return false;
}

std::vector<std::optional<MotionCone>> generate_motion_cones(const Scene& scene,
                                                             const PlanarPose& q,
                                                             const TwistMetric& metric) {
  std::vector<std::optional<MotionCone>> out;
  for (std::size_t i = 0; i < scene.pushers.size(); ++i) {
    PushConfig cfg = PushConfig::from_scene(scene, q, i);
    cfg.metric = metric;
    try {
      out.emplace_back(polyhedral_cone(cfg));
    } catch (const NoPositiveRoot&) {
      out.emplace_back(std::nullopt);
    } catch (const AmbiguousRoot&) {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

PushStep motion_cone_push(const TreeNode& parent, const PlanarPose& q_sample,
                          const PlannerParams& params, const std::vector<char>* allowed) {
  const TwistMetric m = params.metric();
  const Twist d = displacement(parent.q, q_sample);
  const double len = std::min(params.step, m.norm(d));
  const Twist desired = m.normalize(d);

  PushStep best;
  best.cosine = -2.0;
  constexpr double tie = 1e-12;
  for (int k = 0; k < static_cast<int>(parent.cones.size()); ++k) {
    if (!parent.cones[k] || (allowed && !(*allowed)[k])) continue;
    const Twist t = project(*parent.cones[k], desired);
    const double c = m.cosine(t, desired);
    const bool better = c > best.cosine + tie;
    const bool tied = std::abs(c - best.cosine) <= tie;
    const bool prefer = tied && k == parent.arriving_pusher && best.pusher != parent.arriving_pusher;
    if (better || prefer) {
      best.pusher = k;
      best.cosine = c;
      best.twist = t;
    }
  }
  if (best.pusher < 0) throw ConeUnavailable("motion_cone_push: parent has no motion cone");
  const MotionCone& cone = *parent.cones[best.pusher];
  best.twist = certified_twist(cone, best.twist);
  best.cosine = m.cosine(best.twist, desired);
  best.mode = best.cosine >= 1.0 - 1e-9 ? PushMode::stick : PushMode::projected;
  best.q_new = apply_twist(parent.q, best.twist, len);
  return best;
}

double edge_cost(int parent_pusher, int pusher, const PlannerParams& params) {
  return parent_pusher < 0 || parent_pusher == pusher ? params.same_pusher_cost
                                                      : params.switch_pusher_cost;
}

bool reaches(const TreeNode& from, const PlanarPose& to, int pusher, const PlannerParams& params) {
  if (pusher < 0 || pusher >= static_cast<int>(from.cones.size()) || !from.cones[pusher])
    return false;
  const TwistMetric m = params.metric();
  const Twist d = displacement(from.q, to);
  const double len = m.norm(d);
  if (!(len > 0.0) || len > params.step * (1.0 + 1e-9)) return false;
  const Twist u = m.normalize(d);
  const MotionCone& cone = *from.cones[pusher];
  return contains(cone, u) && is_stable_push(cone.source, u);
}

int reaching_pusher(const TreeNode& from, const PlanarPose& to, const PlannerParams& params,
                    int preferred) {
  if (reaches(from, to, preferred, params)) return preferred;
  for (int k = 0; k < static_cast<int>(from.cones.size()); ++k)
    if (k != preferred && reaches(from, to, k, params)) return k;
  return -1;
}

namespace {

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  const double s = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + s * ab)).norm();
}

bool inside_polygon(const Vec2& p, const std::vector<Vec2>& poly) {
  bool in = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y() > p.y()) != (b.y() > p.y()) &&
        p.x() < (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x())
      in = !in;
  }
  return in;
}

double distance_to_outline(const Vec2& p, const std::vector<Vec2>& poly) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i)
    best = std::min(best, point_segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
  return best;
}

}  // namespace

bool grasp_maintained(const Scene& scene, const PlanarPose& q, double margin) {
  const auto poly = scene.object_polygon();
  if (margin < 0.0) margin = scene.grasp.patch_radius_mm;
  const Vec2 f = q.inverse_transform_point(scene.grasp.finger_center_mm);
  if (!inside_polygon(f, poly) || distance_to_outline(f, poly) < margin) return false;
  // Pushers are rigid with the object frame, so their contacts stay on the faces
  // they were placed on.
  for (std::size_t i = 0; i < scene.pushers.size(); ++i)
    for (const auto& pt : scene.pusher_contact(i).points)
      if (distance_to_outline(pt.position, poly) > 1e-6) return false;
  return true;
}

Trajectory extract_trajectory(const Scene& scene, const SearchTree& tree, int node) {
  Trajectory traj;
  const auto path = tree.path_to(node);
  for (std::size_t i = 1; i < path.size(); ++i) {
    const TreeNode& n = tree.nodes[path[i]];
    const std::string& label = scene.pushers.at(n.arriving_pusher).label;
    if (traj.segments.empty() || traj.segments.back().pusher != label) {
      if (!traj.segments.empty()) ++traj.switches;
      traj.segments.push_back({label, {tree.nodes[path[i - 1]].q}});
    }
    traj.segments.back().waypoints.push_back(n.q);
  }
  traj.cost = tree.nodes[node].node_cost;
  return traj;
}

namespace {

constexpr double kCoincident = 1e-6;

class Planner {
 public:
  Planner(const Scene& scene, const PlanarPose& goal, const PlannerParams& params)
      : scene_(scene), goal_(goal), p_(params), m_(params.metric()), rng_(params.seed) {
    state_.temperature = p_.t_init;
    goal_radius_ = m_.norm({p_.goal_tolerance[0], p_.goal_tolerance[1], deg2rad(p_.goal_tolerance[2])});
  }

  PlanResult run(const PlanarPose& q_init);

 private:
  double config_cost(const PlanarPose& q) const { return m_.distance(q, goal_); }
  bool hopeless(double cost, const PlanarPose& q) const;
  bool hopeless(int node) const {
    return hopeless(res_.tree.nodes[node].node_cost, res_.tree.nodes[node].q);
  }
  PlanarPose sample(bool& toward_goal);
  int nearest(const PlanarPose& q, double& dist, bool skip_coincident,
              bool skip_goal_done = false, bool skip_hopeless = true) const;
  std::vector<int> near(const PlanarPose& q) const;
  void shift_costs(int node, double delta);
  void reparent(int node, int parent);
  bool try_reparent(int node, int parent);
  void rewire(int node);
  void log(int it, const char* event);
  bool check_goal(int it);

  const Scene& scene_;
  PlanarPose goal_;
  PlannerParams p_;
  TwistMetric m_;
  Rng rng_;
  TransitionState state_;
  PlanResult res_;
  std::vector<int> goal_nodes_;
  // Nodes whose push toward the goal is known to be useless; the push is
  // deterministic, so retrying them only repeats the failure.
  std::vector<char> goal_done_;
  double goal_radius_ = 0.0;  // metric radius of the goal tolerance box
};

// A node cannot lead under the cost threshold when even a switch-free chain of
// unit steps into the goal box would exceed it.
bool Planner::hopeless(double cost, const PlanarPose& q) const {
  if (p_.cost_threshold < 0.0) return false;
  const double reach = std::max(0.0, config_cost(q) - goal_radius_);
  const double steps = std::ceil(reach / p_.step - 1e-9);
  const double cheapest = std::min(p_.same_pusher_cost, p_.switch_pusher_cost);
  return cost + cheapest * steps > p_.cost_threshold + 1e-12;
}

PlanarPose Planner::sample(bool& toward_goal) {
  toward_goal = rng_.uniform() < p_.goal_bias;
  if (toward_goal) return goal_;
  const double x = rng_.uniform(p_.bounds_x[0], p_.bounds_x[1]);
  const double z = rng_.uniform(p_.bounds_z[0], p_.bounds_z[1]);
  const double t = rng_.uniform(p_.bounds_theta_deg[0], p_.bounds_theta_deg[1]);
  return {x, z, deg2rad(t)};
}

int Planner::nearest(const PlanarPose& q, double& dist, bool skip_coincident,
                     bool skip_goal_done, bool skip_hopeless) const {
  int best = -1;
  dist = std::numeric_limits<double>::infinity();
  const auto& nodes = res_.tree.nodes;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    if (!nodes[i].has_cone()) continue;
    const double d = m_.distance(nodes[i].q, q);
    if (skip_coincident && d < kCoincident) continue;
    if (skip_goal_done && goal_done_[i]) continue;
    if (skip_hopeless && hopeless(i)) continue;
    if (d < dist) {
      dist = d;
      best = i;
    }
  }
  return best;
}

std::vector<int> Planner::near(const PlanarPose& q) const {
  std::vector<int> out;
  const auto& nodes = res_.tree.nodes;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
    if (m_.distance(nodes[i].q, q) <= p_.rewire_radius) out.push_back(i);
  return out;
}

void Planner::shift_costs(int node, double delta) {
  std::vector<int> stack{node};
  while (!stack.empty()) {
    const int n = stack.back();
    stack.pop_back();
    res_.tree.nodes[n].node_cost += delta;
    for (int c : res_.tree.nodes[n].children) stack.push_back(c);
  }
}

void Planner::reparent(int node, int parent) {
  auto& nodes = res_.tree.nodes;
  const int old = nodes[node].parent;
  auto& siblings = nodes[old].children;
  siblings.erase(std::find(siblings.begin(), siblings.end(), node));
  nodes[node].parent = parent;
  nodes[parent].children.push_back(node);
}

// Re-parents `node` under `parent` when some pusher reaches it from there at a
// lower cost without raising the cost of any child.
bool Planner::try_reparent(int node, int parent) {
  auto& nodes = res_.tree.nodes;
  if (node == 0 || node == parent || nodes[node].parent == parent ||
      res_.tree.is_ancestor(node, parent))
    return false;
  const TreeNode& from = nodes[parent];
  int best_k = -1;
  double best_cost = nodes[node].node_cost - 1e-12;
  for (int k = 0; k < static_cast<int>(from.cones.size()); ++k) {
    const double cost = from.node_cost + edge_cost(from.arriving_pusher, k, p_);
    if (!(cost < best_cost)) continue;
    bool children_ok = true;
    for (int c : nodes[node].children)
      if (cost + edge_cost(k, nodes[c].arriving_pusher, p_) > nodes[c].node_cost + 1e-12)
        children_ok = false;
    if (!children_ok || !reaches(from, nodes[node].q, k, p_)) continue;
    best_k = k;
    best_cost = cost;
  }
  if (best_k < 0) return false;
  reparent(node, parent);
  nodes[node].arriving_pusher = best_k;
  nodes[node].node_cost = best_cost;
  for (int c : nodes[node].children)
    shift_costs(c, best_cost + edge_cost(best_k, nodes[c].arriving_pusher, p_) - nodes[c].node_cost);
  return true;
}

void Planner::rewire(int node) {
  for (int n : near(res_.tree.nodes[node].q)) try_reparent(n, node);
}

void Planner::log(int it, const char* event) {
  double best = -1.0;
  for (int g : goal_nodes_)
    if (best < 0.0 || res_.tree.nodes[g].node_cost < best) best = res_.tree.nodes[g].node_cost;
  res_.log.push_back({it, event, static_cast<int>(res_.tree.nodes.size()), state_.temperature, best});
}

bool Planner::check_goal(int) {
  const auto& nodes = res_.tree.nodes;
  int best = -1;
  for (int g : goal_nodes_)
    if (best < 0 || nodes[g].node_cost < nodes[best].node_cost) best = g;
  if (best < 0) return false;
  if (p_.cost_threshold >= 0.0 && nodes[best].node_cost > p_.cost_threshold + 1e-12) return false;
  res_.found = true;
  res_.goal_node = best;
  return true;
}

PlanResult Planner::run(const PlanarPose& q_init) {
  if (!p_.in_bounds(q_init)) throw std::invalid_argument("plan: q_init outside the sampling bounds");
  if (!p_.in_bounds(goal_)) throw std::invalid_argument("plan: q_goal outside the sampling bounds");
  if (!(p_.step > 0.0)) throw std::invalid_argument("plan: step must be > 0");

  TreeNode root;
  root.q = q_init;
  root.cones = generate_motion_cones(scene_, q_init, m_);
  if (!root.has_cone()) throw InfeasibleStart("plan: no pusher yields a motion cone at q_init");
  res_.tree.nodes.push_back(std::move(root));
  goal_done_.assign(1, 0);
  if (p_.within_goal(q_init, goal_)) {
    res_.found = true;
    res_.goal_node = 0;
    res_.trajectory = extract_trajectory(scene_, res_.tree, 0);
    res_.trajectory.seed = p_.seed;
    return res_;
  }

  auto& nodes = res_.tree.nodes;
  int it = 1;
  for (; it <= p_.max_iterations; ++it) {
    bool toward_goal = false;
    const PlanarPose q_rand = sample(toward_goal);
    double d = 0.0;
    const int parent = nearest(q_rand, d, true, toward_goal);
    const auto give_up = [&] {
      if (toward_goal) goal_done_[parent] = 1;
    };
    if (parent < 0) {
      log(it, "duplicate_sample");
      continue;
    }
    const PlanarPose q_sample =
        d <= p_.step ? q_rand
                     : apply_twist(nodes[parent].q, m_.normalize(displacement(nodes[parent].q, q_rand)),
                                   p_.step);
    const double c_parent = config_cost(nodes[parent].q);
    if (!transition_test(c_parent, config_cost(q_sample), state_, rng_, p_.max_fail)) {
      log(it, "reject_transition_sample");
      continue;
    }
    // Pushers whose step could only produce a hopeless node are masked out.
    PushStep push;
    std::vector<char> allowed(nodes[parent].cones.size(), 1);
    bool pushed = false;
    while (!pushed) {
      try {
        push = motion_cone_push(nodes[parent], q_sample, p_, &allowed);
      } catch (const ConeUnavailable&) {
        break;
      }
      const double c = nodes[parent].node_cost + edge_cost(nodes[parent].arriving_pusher, push.pusher, p_);
      if (!hopeless(c, push.q_new)) {
        pushed = true;
      } else {
        allowed[push.pusher] = 0;
      }
    }
    if (!pushed) {
      give_up();
      log(it, "no_certified_push");
      continue;
    }
    if (!p_.in_bounds(push.q_new)) {
      give_up();
      log(it, "out_of_bounds");
      continue;
    }
    double dn = 0.0;
    const int twin = nearest(push.q_new, dn, false, false, false);
    if (dn < kCoincident) {
      // The push lands on an existing node: offer it as a cheaper edge.
      give_up();
      log(it, try_reparent(twin, parent) ? "improved_node" : "duplicate_node");
      if (check_goal(it)) break;
      continue;
    }
    if (!transition_test(c_parent, config_cost(push.q_new), state_, rng_, p_.max_fail)) {
      log(it, "reject_transition_new");
      continue;
    }
    if (!grasp_maintained(scene_, push.q_new)) {
      give_up();
      log(it, "grasp_lost");
      continue;
    }

    // Cheapest parent among near nodes that reach q_new exactly.
    int best_parent = parent;
    int best_pusher = push.pusher;
    double best_cost = nodes[parent].node_cost + edge_cost(nodes[parent].arriving_pusher, push.pusher, p_);
    for (int n : near(push.q_new)) {
      if (n == parent || !nodes[n].has_cone()) continue;
      const int k = reaching_pusher(nodes[n], push.q_new, p_, nodes[n].arriving_pusher);
      if (k < 0) continue;
      const double c = nodes[n].node_cost + edge_cost(nodes[n].arriving_pusher, k, p_);
      if (c < best_cost - 1e-12) {
        best_cost = c;
        best_parent = n;
        best_pusher = k;
      }
    }

    TreeNode node;
    node.q = push.q_new;
    node.parent = best_parent;
    node.arriving_pusher = best_pusher;
    node.node_cost = best_cost;
    node.cones = generate_motion_cones(scene_, node.q, m_);
    const int id = static_cast<int>(nodes.size());
    nodes.push_back(std::move(node));
    goal_done_.push_back(0);
    nodes[best_parent].children.push_back(id);
    rewire(id);

    if (p_.within_goal(nodes[id].q, goal_)) goal_nodes_.push_back(id);
    log(it, "added");
    if (check_goal(it)) break;
  }
  const int iterations = std::min(it, p_.max_iterations);
  if (res_.found) {
    res_.trajectory = extract_trajectory(scene_, res_.tree, res_.goal_node);
    detail::logger()->info("plan: goal reached after {} iterations, {} nodes, cost {:.3f}", iterations,
                 nodes.size(), res_.trajectory.cost);
  } else {
    detail::logger()->info("plan: no plan after {} iterations ({} nodes)", iterations, nodes.size());
  }
  res_.trajectory.seed = p_.seed;
  res_.trajectory.iterations = iterations;
  return res_;
}

}  // namespace

PlanResult plan(const Scene& scene, const PlanarPose& q_init, const PlanarPose& q_goal,
                const PlannerParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  Planner planner(scene, q_goal, params);
  PlanResult res = planner.run(q_init);
  res.trajectory.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

Trajectory plan_trajectory(const Scene& scene, const PlanarPose& q_init, const PlanarPose& q_goal,
                           const PlannerParams& params) {
  PlanResult res = plan(scene, q_init, q_goal, params);
  if (!res.found)
    throw NoPlanFound("plan: no trajectory within " + std::to_string(params.max_iterations) +
                      " iterations");
  return res.trajectory;
}

}  // namespace motioncone
