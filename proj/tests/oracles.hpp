#pragma once

// Reference computations used by the tests. They are written from first
// principles and share no code with the library beyond the value types.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "motioncone/scene.hpp"
#include "motioncone/types.hpp"

#ifndef MOTIONCONE_SCENE_DIR
#define MOTIONCONE_SCENE_DIR "scenes"
#endif

namespace oracle {

using motioncone::Vec2;
using motioncone::Vec3;

inline std::string scene_path(const std::string& name) {
  return std::string(MOTIONCONE_SCENE_DIR) + "/" + name + ".scene";
}

inline motioncone::Scene load(const std::string& name) {
  return motioncone::parse_scene(scene_path(name));
}

// Lawson-Hanson active-set NNLS: min |G w - q| subject to w >= 0.
struct Nnls {
  Eigen::VectorXd w;
  double residual = 0.0;
};

inline Nnls nnls(const std::vector<Vec3>& gens, const Vec3& q) {
  const int n = static_cast<int>(gens.size());
  Eigen::MatrixXd G(3, n);
  for (int i = 0; i < n; ++i) G.col(i) = gens[i];
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  for (int outer = 0; outer < 10 * n + 10; ++outer) {
    const Eigen::VectorXd grad = G.transpose() * (q - G * w);
    int best = -1;
    double best_g = 1e-13 * std::max(1.0, q.norm());
    for (int i = 0; i < n; ++i)
      if (!passive[i] && grad[i] > best_g) {
        best_g = grad[i];
        best = i;
      }
    if (best < 0) break;
    passive[best] = true;
    for (int inner = 0; inner < 10 * n + 10; ++inner) {
      std::vector<int> idx;
      for (int i = 0; i < n; ++i)
        if (passive[i]) idx.push_back(i);
      Eigen::MatrixXd Gp(3, idx.size());
      for (std::size_t j = 0; j < idx.size(); ++j) Gp.col(j) = G.col(idx[j]);
      const Eigen::VectorXd z = Gp.completeOrthogonalDecomposition().solve(q);
      bool feasible = true;
      for (std::size_t j = 0; j < idx.size(); ++j)
        if (z[j] <= 0.0) feasible = false;
      if (feasible) {
        w.setZero();
        for (std::size_t j = 0; j < idx.size(); ++j) w[idx[j]] = z[j];
        break;
      }
      double step = 1.0;
      for (std::size_t j = 0; j < idx.size(); ++j)
        if (z[j] <= 0.0) step = std::min(step, w[idx[j]] / (w[idx[j]] - z[j]));
      for (std::size_t j = 0; j < idx.size(); ++j) {
        w[idx[j]] += step * (z[j] - w[idx[j]]);
        if (w[idx[j]] <= 1e-15) {
          w[idx[j]] = 0.0;
          passive[idx[j]] = false;
        }
      }
    }
  }
  return {w, (G * w - q).norm()};
}

inline bool in_cone(const std::vector<Vec3>& gens, const Vec3& q, double rel = 1e-8) {
  return nnls(gens, q).residual <= rel * std::max(q.norm(), 1e-300);
}

// Velocity of the material point at r for body twist (vx, vz, wy) with the
// rotation about +Y: omega x r = (wy * z, -wy * x).
inline Vec2 point_velocity(const Vec3& twist, const Vec2& r) {
  return {twist.x() + twist.z() * r.y(), twist.y() - twist.z() * r.x()};
}

// Contact-frame twist: point velocity projected on (tangent, normal).
inline Vec3 contact_twist(const Vec3& twist, const Vec2& origin, const Vec2& tangent,
                          const Vec2& normal) {
  const Vec2 v = point_velocity(twist, origin);
  return {v.dot(tangent), v.dot(normal), twist.z()};
}

// Object wrench of force f at r: (fx, fz, z fx - x fz).
inline Vec3 point_wrench(const Vec2& r, const Vec2& f) {
  return {f.x(), f.y(), r.y() * f.x() - r.x() * f.y()};
}

// Scalar bisection for a sign change of f on [lo, hi].
template <class F>
double bisect(F f, double lo, double hi, int iters = 200) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v(n(rng), n(rng), n(rng));
  return v.normalized();
}

}  // namespace oracle
