#include "carpa/numerics.hpp"

#include <Eigen/SVD>

namespace carpa {

namespace {
constexpr double kRankTol = 1e-10;
constexpr double kSymmetryTol = 1e-12;
} // namespace

Matrix orthonormal_basis(const Matrix& m) {
  const Index rows = m.rows();
  const Index cols = m.cols();
  if (cols > rows) {
    throw RankDeficient("orthonormal_basis: more columns than rows");
  }
  Matrix q = m;
  for (Index j = 0; j < cols; ++j) {
    // Two projection sweeps keep Q^T Q at working precision.
    for (int sweep = 0; sweep < 2; ++sweep) {
      for (Index i = 0; i < j; ++i) {
        q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
      }
    }
    const double norm = q.col(j).norm();
    if (norm < kRankTol) {
      throw RankDeficient("orthonormal_basis: column " + std::to_string(j) +
                          " is numerically dependent");
    }
    q.col(j) /= norm;
  }
  return q;
}

SpdFactorization::SpdFactorization(const Matrix& g) {
  if (g.rows() != g.cols()) {
    throw NotPositiveDefinite("spd factorization: matrix is not square");
  }
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale) {
    throw NotPositiveDefinite("spd factorization: matrix is not symmetric");
  }
  llt_.compute(g);
  if (llt_.info() != Eigen::Success) {
    throw NotPositiveDefinite("spd factorization: non-positive pivot");
  }
}

Vector SpdFactorization::solve(const Vector& r) const {
  if (r.size() != dim()) {
    throw DimensionMismatch("spd solve: rhs dimension mismatch");
  }
  return llt_.solve(r);
}

Vector spd_solve(const Matrix& g, const Vector& r) {
  return SpdFactorization(g).solve(r);
}

Vector singular_values(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();
}

} // namespace carpa
