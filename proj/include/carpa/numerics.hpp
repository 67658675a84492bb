#pragma once

#include <Eigen/Cholesky>

#include "carpa/errors.hpp"
#include "carpa/types.hpp"

namespace carpa {

/// Orthonormalizes the columns of m (modified Gram-Schmidt with one
/// reorthogonalization pass). The result spans the same column space and the
/// implicit triangular factor has a nonnegative diagonal, which pins the sign
/// convention across platforms.
///
/// Throws RankDeficient when a column collapses below 1e-10 after
/// orthogonalization against the previous ones.
Matrix orthonormal_basis(const Matrix& m);

/// Cached Cholesky factorization of a symmetric positive definite matrix.
/// Construction throws NotPositiveDefinite when a pivot fails.
class SpdFactorization {
public:
  explicit SpdFactorization(const Matrix& g);

  Vector solve(const Vector& r) const;
  Index dim() const { return llt_.matrixLLT().rows(); }

private:
  Eigen::LLT<Matrix> llt_;
};

/// Solves G s = r for symmetric positive definite G.
Vector spd_solve(const Matrix& g, const Vector& r);

/// Singular values of m, nonincreasing, length min(rows, cols).
Vector singular_values(const Matrix& m);

} // namespace carpa
