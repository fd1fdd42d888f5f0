#include "motioncone/polyhedral_cone.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace motioncone {

namespace {

double angle_between_units(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace

ConicProjection project_onto_conic_hull(std::span<const Vec3> gens, const Vec3& query) {
  const int n = static_cast<int>(gens.size());
  ConicProjection best;
  best.weights.assign(n, 0.0);
  best.residual = query.norm();

  auto consider = [&](const std::vector<int>& idx, const Eigen::VectorXd& x) {
    for (int k = 0; k < x.size(); ++k)
      if (!(x[k] >= 0.0)) return;
    Vec3 p = Vec3::Zero();
    for (int k = 0; k < x.size(); ++k) p += x[k] * gens[idx[k]];
    const double r = (query - p).norm();
    if (r < best.residual) {
      best.residual = r;
      best.point = p;
      std::fill(best.weights.begin(), best.weights.end(), 0.0);
      for (int k = 0; k < x.size(); ++k) best.weights[idx[k]] = x[k];
    }
  };

  for (int i = 0; i < n; ++i) {
    const double gg = gens[i].squaredNorm();
    if (gg == 0.0) continue;
    Eigen::VectorXd x(1);
    x[0] = gens[i].dot(query) / gg;
    consider({i}, x);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Eigen::Matrix<double, 3, 2> g;
      g << gens[i], gens[j];
      const Eigen::Matrix2d gtg = g.transpose() * g;
      if (std::abs(gtg.determinant()) <= 1e-14 * gtg.trace() * gtg.trace()) continue;
      consider({i, j}, gtg.ldlt().solve(g.transpose() * query));
    }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Mat3 g;
        g << gens[i], gens[j], gens[k];
        const double scale = gens[i].norm() * gens[j].norm() * gens[k].norm();
        if (std::abs(g.determinant()) <= 1e-12 * scale) continue;
        consider({i, j, k}, g.partialPivLu().solve(query));
      }
  return best;
}

bool in_conic_hull(std::span<const Vec3> gens, const Vec3& query, double rel_tol) {
  const double qn = query.norm();
  if (qn == 0.0) return true;
  return project_onto_conic_hull(gens, query).residual <= rel_tol * qn;
}

PolyhedralCone::PolyhedralCone(std::span<const Vec3> input) {
  std::vector<Vec3> units;
  std::vector<int> src;
  for (int i = 0; i < static_cast<int>(input.size()); ++i) {
    const double nrm = input[i].norm();
    if (!(nrm > 0.0) || !input[i].allFinite()) continue;
    const Vec3 u = input[i] / nrm;
    bool dup = false;
    for (const auto& v : units)
      if ((v - u).norm() < 1e-9) dup = true;
    if (!dup) {
      units.push_back(u);
      src.push_back(i);
    }
  }
  if (units.empty()) return;

  Vec3 sum = Vec3::Zero();
  for (const auto& u : units) sum += u;
  axis_ = sum.norm() > 1e-12 ? Vec3(sum.normalized()) : Vec3::Zero();

  // Canonical order: angle about the axis in a fixed reference basis.
  std::vector<int> order(units.size());
  std::iota(order.begin(), order.end(), 0);
  if (axis_.squaredNorm() > 0.0 && units.size() > 1) {
    int least = 0;
    axis_.cwiseAbs().minCoeff(&least);
    const Vec3 ref = Vec3::Unit(least);
    const Vec3 e1 = axis_.cross(ref).normalized();
    const Vec3 e2 = axis_.cross(e1);
    std::vector<double> ang(units.size());
    for (std::size_t i = 0; i < units.size(); ++i)
      ang[i] = std::atan2(units[i].dot(e2), units[i].dot(e1));
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return ang[a] < ang[b]; });
  }
  for (int k : order) {
    generators_.push_back(units[k]);
    source_index_.push_back(src[k]);
  }

  const int n = static_cast<int>(generators_.size());
  Eigen::MatrixXd g(3, n);
  for (int i = 0; i < n; ++i) g.col(i) = generators_[i];
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
  const auto sv = svd.singularValues();
  const bool full_rank = sv.size() >= 3 && sv[2] > 1e-9 * sv[0];

  if (full_rank && axis_.squaredNorm() > 0.0) {
    constexpr double eps = 1e-10;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Vec3 nrm = generators_[i].cross(generators_[j]);
        if (nrm.norm() < 1e-12) continue;
        nrm.normalize();
        bool pos = false, neg = false;
        for (int k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          const double d = nrm.dot(generators_[k]);
          if (d > eps) pos = true;
          if (d < -eps) neg = true;
        }
        if (pos && neg) continue;
        if (!pos && !neg) continue;  // all coplanar: rank would be < 3
        facets_.push_back({pos ? Vec3(-nrm) : nrm, i, j});
      }
  }
  degenerate_ = facets_.empty();
}

double PolyhedralCone::max_violation(const Vec3& unit) const {
  if (degenerate_) {
    const double qn = unit.norm();
    if (qn == 0.0) return 0.0;
    return project_onto_conic_hull(generators_, unit).residual / qn;
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& f : facets_) worst = std::max(worst, f.normal.dot(unit));
  return worst;
}

bool PolyhedralCone::contains(const Vec3& t, double eps) const {
  const double tn = t.norm();
  if (tn == 0.0 || generators_.empty()) return false;
  return max_violation(t / tn) <= eps;
}

Vec3 PolyhedralCone::best_boundary_direction(const Vec3& u) const {
  // Candidates: every generator ray and the in-wedge projection onto every
  // generator-pair plane. All candidates are members of the cone and the
  // maximizer of the cosine lies among them.
  Vec3 best = generators_.front();
  double best_cos = best.dot(u);
  const int n = static_cast<int>(generators_.size());
  for (int i = 1; i < n; ++i) {
    const double c = generators_[i].dot(u);
    if (c > best_cos) {
      best_cos = c;
      best = generators_[i];
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Vec3& gi = generators_[i];
      const Vec3& gj = generators_[j];
      Vec3 nrm = gi.cross(gj);
      const double nn = nrm.norm();
      if (nn < 1e-12) continue;
      nrm /= nn;
      const Vec3 tp = u - u.dot(nrm) * nrm;
      const double tpn = tp.norm();
      if (tpn < 1e-15) continue;
      const double den = gi.cross(gj).dot(nrm);
      const double a = tp.cross(gj).dot(nrm) / den;
      const double b = gi.cross(tp).dot(nrm) / den;
      if (a < 0.0 || b < 0.0) continue;
      const Vec3 cand = tp / tpn;
      const double c = cand.dot(u);
      if (c > best_cos) {
        best_cos = c;
        best = cand;
      }
    }
  return best;
}

Vec3 PolyhedralCone::project(const Vec3& t) const {
  const Vec3 u = t.normalized();
  if (contains(u)) return u;
  return best_boundary_direction(u);
}

double PolyhedralCone::signed_boundary_angle(const Vec3& t) const {
  const Vec3 u = t.normalized();
  if (degenerate_) {
    if (contains(u)) return 0.0;
    return angle_between_units(u, best_boundary_direction(u));
  }
  const double worst = max_violation(u);
  if (worst <= 0.0) {
    double nearest = std::numbers::pi;
    for (const auto& f : facets_)
      nearest = std::min(nearest, std::asin(std::clamp(-f.normal.dot(u), 0.0, 1.0)));
    return -nearest;
  }
  return angle_between_units(u, best_boundary_direction(u));
}

}  // namespace motioncone
