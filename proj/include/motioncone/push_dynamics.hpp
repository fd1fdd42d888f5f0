#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "motioncone/motion_cone.hpp"
#include "motioncone/scene.hpp"

namespace motioncone {

enum class PushMode { stick, projected };
enum class PushClass { stick, slip, boundary };

const char* to_string(PushMode mode);
const char* to_string(PushClass cls);

struct PushOutcome {
  PlanarPose q_new;
  Twist executed_twist;  // unit under the cone metric
  PushMode mode = PushMode::stick;
  std::string pusher;
};

/// Twist of the cone closest to `t` that also passes the exact stable-push
/// test of the cone's configuration. Twists on or beyond a facet are pulled
/// toward the axis by the smallest amount that clears both tests.
/// Throws ConeUnavailable when no such twist exists.
Twist certified_twist(const MotionCone& cone, const Twist& t);

/// Quasi-static step: the executed twist is the certified projection of the
/// target onto the motion cone, applied over `step` metric units.
PushOutcome propagate(const MotionCone& cone, const Twist& target, double step);
/// Same, building the cone first; NoPositiveRoot becomes ConeUnavailable.
PushOutcome propagate(const PushConfig& cfg, const Twist& target, double step);

/// Displacement [dx mm, dz mm, dtheta rad] read as a twist direction.
PushClass classify_push(const MotionCone& cone, const Vec3& displacement);
PushClass classify_push(const PushConfig& cfg, const Vec3& displacement);

struct ValidationRanges {
  std::array<double, 2> x_mm{0.0, 10.0};
  std::array<double, 2> z_mm{-5.0, 5.0};
  std::array<double, 2> theta_deg{-35.0, 35.0};
};

struct ValidationSample {
  int idx = 0;
  Vec3 displacement = Vec3::Zero();  // mm, mm, rad
  bool predicted_stick = false;
  bool oracle_stick = false;
  bool boundary = false;
};

struct ValidationReport {
  int n_samples = 0;
  std::uint64_t seed = 0;
  ValidationRanges ranges;
  std::string pusher;
  std::vector<ValidationSample> samples;
  // Confusion counts over all samples, [predicted][oracle] with 0 = stick.
  std::array<std::array<int, 2>, 2> confusion{};
  int n_boundary = 0;
  int n_agree_outside_band = 0;
  int n_outside_band = 0;

  double agreement_rate() const {
    return n_outside_band ? static_cast<double>(n_agree_outside_band) / n_outside_band : 1.0;
  }
};

/// Classifies a list of displacements against the polyhedral cone and the
/// exact oracle.
ValidationReport validate_displacements(const PushConfig& cfg,
                                        const std::vector<Vec3>& displacements);

/// Uniform i.i.d. displacements over `ranges` at pose q, classified by the
/// polyhedral cone and by is_stable_push.
ValidationReport monte_carlo_validation(const Scene& scene, std::size_t pusher, int n,
                                        const ValidationRanges& ranges, std::uint64_t seed,
                                        const PlanarPose& q = {});

struct ConeOracleCloud {
  std::vector<Twist> twists;                  // unit under the metric
  std::vector<std::vector<int>> weights;      // integer barycentric weights
  std::vector<bool> on_pusher_boundary;       // sample lies on a W_pusher facet
  std::vector<double> boundary_angle;         // signed, vs. the polyhedral cone
  int n_unsolvable = 0;                       // grid points without a root
  double max_boundary_deviation = 0.0;        // rad, over boundary samples
  double max_outside_angle = 0.0;             // rad, over all samples
};

/// Dense sampling of the true motion cone: every nonnegative integer weight
/// vector over the pusher generators summing to `resolution`, pushed through
/// the force balance and the limit surface.
ConeOracleCloud brute_force_cone_oracle(const PushConfig& cfg, int resolution);

}  // namespace motioncone
