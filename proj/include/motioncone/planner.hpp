#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "motioncone/motion_cone.hpp"
#include "motioncone/push_dynamics.hpp"
#include "motioncone/rng.hpp"
#include "motioncone/scene.hpp"

namespace motioncone {

struct PlannerParams {
  double step = 1.0;
  std::array<double, 3> goal_tolerance{1.0, 1.0, 1.0};  // mm, mm, deg
  double cost_threshold = -1.0;                          // < 0: first goal node wins
  double same_pusher_cost = 0.1;
  double switch_pusher_cost = 1.0;
  double length_scale = 25.0;
  double t_init = 1e-4;
  int max_fail = 10;
  double rewire_radius = 3.0;
  double goal_bias = 0.1;
  int max_iterations = 20000;
  std::array<double, 2> bounds_x{-50.0, 50.0};
  std::array<double, 2> bounds_z{-50.0, 50.0};
  std::array<double, 2> bounds_theta_deg{-90.0, 90.0};
  std::uint64_t seed = 0;

  static PlannerParams from_scene(const Scene& scene, std::uint64_t seed);
  TwistMetric metric() const { return TwistMetric(length_scale); }
  bool in_bounds(const PlanarPose& q) const;
  bool within_goal(const PlanarPose& q, const PlanarPose& goal) const;
};

struct TreeNode {
  PlanarPose q;
  int parent = -1;
  int arriving_pusher = -1;  // -1 at the root
  double node_cost = 0.0;
  std::vector<std::optional<MotionCone>> cones;  // per pusher; empty when no root
  std::vector<int> children;

  bool has_cone() const;
};

struct SearchTree {
  std::vector<TreeNode> nodes;

  bool is_ancestor(int ancestor, int node) const;
  std::vector<int> path_to(int node) const;
};

struct TrajectorySegment {
  std::string pusher;
  std::vector<PlanarPose> waypoints;
};

struct Trajectory {
  std::vector<TrajectorySegment> segments;
  double cost = 0.0;
  int switches = 0;
  std::uint64_t seed = 0;
  int iterations = 0;
  double wall_time_s = 0.0;
};

struct IterationRecord {
  int iteration = 0;
  std::string event;
  int tree_size = 0;
  double temperature = 0.0;
  double best_goal_cost = -1.0;
};

struct PlanResult {
  bool found = false;
  int goal_node = -1;
  Trajectory trajectory;
  SearchTree tree;
  std::vector<IterationRecord> log;
};

struct TransitionState {
  double temperature = 1e-4;
  int fails = 0;
  double cost_sum = 0.0;
  long cost_count = 0;

  /// Normalizing constant: mean configuration cost seen so far (1 before any).
  double k() const { return cost_count ? cost_sum / cost_count : 1.0; }
};

/// T-RRT transition test on configuration costs. Downhill and flat moves pass;
/// uphill moves pass with probability exp(-dc / (K T)). The n-th consecutive
/// rejection multiplies T by 2^(n/max_fail); an accepted uphill move halves T.
bool transition_test(double c_parent, double c_child, TransitionState& state, Rng& rng,
                     int max_fail);

/// Motion cones for every pusher of the scene at q (nullopt where the force
/// balance has no admissible root).
std::vector<std::optional<MotionCone>> generate_motion_cones(const Scene& scene,
                                                             const PlanarPose& q,
                                                             const TwistMetric& metric);

struct PushStep {
  PlanarPose q_new;
  int pusher = -1;
  Twist twist;
  PushMode mode = PushMode::stick;
  double cosine = 0.0;
};

/// Best-cosine push from the parent's cones toward q_sample over one unit
/// step (or less when q_sample is closer). Ties prefer the parent's pusher,
/// then the lowest index. `allowed`, when given, masks pushers out.
PushStep motion_cone_push(const TreeNode& parent, const PlanarPose& q_sample,
                          const PlannerParams& params,
                          const std::vector<char>* allowed = nullptr);

/// Edge cost of arriving at a node with `pusher` from a node that arrived with
/// `parent_pusher`.
double edge_cost(int parent_pusher, int pusher, const PlannerParams& params);

/// True when `pusher`'s cone at `from` contains the one-step twist to `to`
/// (polyhedral membership and the exact stable-push test).
bool reaches(const TreeNode& from, const PlanarPose& to, int pusher, const PlannerParams& params);

/// Pusher of `from` whose cone reaches `to` exactly in one step, or -1.
/// Prefers `preferred` when it qualifies, else the lowest index.
int reaching_pusher(const TreeNode& from, const PlanarPose& to, const PlannerParams& params,
                    int preferred = -1);

/// Finger patch inside the outline with `margin` (patch radius when negative)
/// and every pusher point on an object edge.
bool grasp_maintained(const Scene& scene, const PlanarPose& q, double margin = -1.0);

PlanResult plan(const Scene& scene, const PlanarPose& q_init, const PlanarPose& q_goal,
                const PlannerParams& params);

/// plan() that throws NoPlanFound on failure.
Trajectory plan_trajectory(const Scene& scene, const PlanarPose& q_init,
                           const PlanarPose& q_goal, const PlannerParams& params);

Trajectory extract_trajectory(const Scene& scene, const SearchTree& tree, int node);

}  // namespace motioncone
