#pragma once

#include <string>
#include <vector>

#include "motioncone/motion_cone.hpp"
#include "motioncone/planner.hpp"
#include "motioncone/push_dynamics.hpp"

namespace motioncone {

/// Trajectory JSON; angles in degrees. `with_wall_time = false` drops the
/// only non-deterministic field.
std::string trajectory_to_json(const Trajectory& traj, bool with_wall_time = true);
/// Throws SceneError-style diagnostics (as Error) on malformed input.
Trajectory trajectory_from_json(const std::string& text);

std::string iteration_log_csv(const std::vector<IterationRecord>& log);

/// Plot-ready dump of the pusher wrench cone, the grasp wrench cone and the
/// motion cone: one row per generator, tagged by panel.
std::string cone_csv(const MotionCone& cone);

std::string validation_csv(const ValidationReport& rep);
std::string validation_summary_json(const ValidationReport& rep);

struct SimulationStep {
  int segment = 0;
  int step = 0;
  std::string pusher;
  PlanarPose from;
  PlanarPose to;
  double length = 0.0;
  bool stable = false;
  double residual = 0.0;      // N, distance of the required wrench from W_pusher
  double dissipation = 0.0;   // N*mm/step, <= 0 when physical
  bool grasp_ok = false;
  std::string mode;           // propagate outcome for the same command
  double replay_error = 0.0;  // metric distance of propagate's pose from `to`
  bool pass = false;
  std::string issue;
};

struct SimulationReport {
  std::vector<SimulationStep> steps;
  int n_pass = 0;
  int first_failure = -1;
  bool pass() const { return first_failure < 0; }
};

/// Replays a trajectory at unit step `step`: each waypoint pair is checked for
/// stable-push membership, dissipation and grasp maintenance, and re-run
/// through propagate.
SimulationReport simulate_trajectory(const Scene& scene, const Trajectory& traj, double step);
std::string simulation_json(const SimulationReport& rep);

}  // namespace motioncone
