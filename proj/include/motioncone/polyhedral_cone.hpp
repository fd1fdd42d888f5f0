#pragma once

#include <span>
#include <vector>

#include "motioncone/types.hpp"

namespace motioncone {

/// Closest point of a finitely generated cone to a query vector.
struct ConicProjection {
  Vec3 point = Vec3::Zero();
  std::vector<double> weights;  // one per generator, all >= 0
  double residual = 0.0;        // |query - point|
};

/// Exact Euclidean projection onto cone(generators) by active-set
/// enumeration: the optimum is supported on at most three linearly
/// independent generators, so every such subset is solved in closed form and
/// the best sign-feasible candidate kept. Intended for small generator sets.
ConicProjection project_onto_conic_hull(std::span<const Vec3> generators, const Vec3& query);

/// Conic feasibility: query is a nonnegative combination of the generators up
/// to a relative residual of `rel_tol`.
bool in_conic_hull(std::span<const Vec3> generators, const Vec3& query, double rel_tol = 1e-9);

struct ConeFacet {
  Vec3 normal;  // unit, outward: normal . g <= 0 for every generator
  int first;
  int second;
};

/// Finitely generated convex cone in R^3 with facet representation.
///
/// Generators are normalized, de-duplicated and ordered by angle about the
/// cone axis (normalized generator sum) so the layout is deterministic.
/// Cones of rank < 3, or without a supporting facet, are flagged degenerate;
/// their membership queries go through the conic projection instead of facets.
class PolyhedralCone {
 public:
  PolyhedralCone() = default;
  explicit PolyhedralCone(std::span<const Vec3> generators);

  const std::vector<Vec3>& generators() const { return generators_; }
  const std::vector<ConeFacet>& facets() const { return facets_; }
  /// Maps canonical generator index to the index in the constructor input.
  const std::vector<int>& source_index() const { return source_index_; }
  const Vec3& axis() const { return axis_; }
  bool degenerate() const { return degenerate_; }
  bool empty() const { return generators_.empty(); }

  /// Largest n . t over facets for unit t (<= 0 inside). Degenerate cones
  /// report the relative conic residual instead.
  double max_violation(const Vec3& unit) const;

  bool contains(const Vec3& t, double eps = 1e-9) const;

  /// Unit vector of the cone with the largest cosine to t (t itself, normalized,
  /// when already inside).
  Vec3 project(const Vec3& t) const;

  /// Angle from t to the cone boundary, radians; negative inside, positive
  /// outside. Inside a degenerate cone this is 0.
  double signed_boundary_angle(const Vec3& t) const;

 private:
  Vec3 best_boundary_direction(const Vec3& unit) const;

  std::vector<Vec3> generators_;
  std::vector<int> source_index_;
  std::vector<ConeFacet> facets_;
  Vec3 axis_ = Vec3::Zero();
  bool degenerate_ = true;
};

}  // namespace motioncone
