#pragma once

#include <optional>
#include <variant>

#include "carpa/errors.hpp"
#include "carpa/numerics.hpp"
#include "carpa/types.hpp"

namespace carpa {

/// {x : A x = b} with A full row rank. The Gram factorization of A A^T is
/// computed once here; projections reuse it.
class AffineSet {
public:
  AffineSet(Matrix a, Vector b);

  Index dim() const { return a_.cols(); }
  const Matrix& constraint_matrix() const { return a_; }
  const Vector& rhs() const { return b_; }

  Vector project(const Vector& w) const;

private:
  Matrix a_;
  Vector b_;
  SpdFactorization gram_;
  Matrix pinv_; // A^T (A A^T)^{-1}, applied on every projection
};

/// Linear subspace given by an orthonormal basis Q (n x p).
class LinearSubspace {
public:
  explicit LinearSubspace(Matrix q);

  /// Orthonormalizes an arbitrary full-column-rank basis first.
  static LinearSubspace from_basis(const Matrix& m);

  Index dim() const { return q_.rows(); }
  Index subspace_dim() const { return q_.cols(); }
  const Matrix& basis() const { return q_; }

  Vector project(const Vector& w) const;
  Vector complement_project(const Vector& w) const;

private:
  Matrix q_;
};

class EuclideanBall {
public:
  EuclideanBall(Vector center, double radius);

  Index dim() const { return center_.size(); }
  const Vector& center() const { return center_; }
  double radius() const { return radius_; }

  Vector project(const Vector& w) const;

private:
  Vector center_;
  double radius_;
};

/// {x : ||x||_1 <= c}. Dimension-generic: the ambient dimension is carried by
/// the vector being projected.
class L1Ball {
public:
  explicit L1Ball(double radius);

  double radius() const { return radius_; }

  Vector project(const Vector& w) const;

private:
  double radius_;
};

using ConvexSet = std::variant<AffineSet, LinearSubspace, EuclideanBall, L1Ball>;

/// Ambient dimension when the set pins one (L1Ball does not).
std::optional<Index> ambient_dimension(const ConvexSet& s);

bool is_subspace(const ConvexSet& s);

/// Nearest point of s to w.
Vector project(const ConvexSet& s, const Vector& w);

/// (1+r) P_S(w) - r w for r in [-1, 1]; r = 1 is the reflection.
Vector relaxed_project(const ConvexSet& s, const Vector& w, double r);

/// 2 P_S(w) - w.
Vector reflect(const ConvexSet& s, const Vector& w);

/// w - Q Q^T w; defined for linear subspaces only.
Vector complement_project(const ConvexSet& s, const Vector& w);

namespace l1 {

/// Threshold tau > 0 with sum_i max(u_i - tau, 0) = c for u >= 0 with
/// ||u||_1 > c. Scanning scheme, no sort.
double simplex_threshold_scan(const Vector& u, double c);

/// Same threshold by the classical sort-then-scan route; kept as an
/// independent fallback and test oracle for the scan.
double simplex_threshold_sorted(const Vector& u, double c);

/// Projection onto the l1 ball through the sorted route.
Vector project_sorted(const Vector& w, double c);

} // namespace l1

} // namespace carpa
