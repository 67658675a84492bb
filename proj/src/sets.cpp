#include "carpa/sets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace carpa {

namespace {

constexpr double kOrthonormalTol = 1e-12;

void require_dim(Index expected, const Vector& w, const char* where) {
  if (w.size() != expected) {
    throw DimensionMismatch(std::string(where) + ": vector dimension " +
                            std::to_string(w.size()) + ", set dimension " +
                            std::to_string(expected));
  }
}

} // namespace

// ---------------------------------------------------------------------------
// AffineSet
// ---------------------------------------------------------------------------

AffineSet::AffineSet(Matrix a, Vector b)
    : a_(std::move(a)), b_(std::move(b)), gram_([this] {
        try {
          return SpdFactorization(a_ * a_.transpose());
        } catch (const NotPositiveDefinite&) {
          throw RankDeficient("AffineSet: A does not have full row rank");
        }
      }()) {
  if (b_.size() != a_.rows()) {
    throw DimensionMismatch("AffineSet: rows(A) != dim(b)");
  }
  Matrix solved(a_.rows(), a_.rows());
  for (Index j = 0; j < a_.rows(); ++j) {
    solved.col(j) = gram_.solve(Vector(Matrix::Identity(a_.rows(), a_.rows()).col(j)));
  }
  pinv_.noalias() = a_.transpose() * solved;
}

Vector AffineSet::project(const Vector& w) const {
  require_dim(dim(), w, "AffineSet::project");
  if (a_.rows() == 1) {
    // hyperplane: one dot product and one axpy
    const double residual = a_.row(0).dot(w) - b_[0];
    Vector out = w;
    out -= residual * pinv_.col(0);
    return out;
  }
  Vector residual = a_ * w;
  residual -= b_;
  Vector out = w;
  out.noalias() -= pinv_ * residual;
  return out;
}

// ---------------------------------------------------------------------------
// LinearSubspace
// ---------------------------------------------------------------------------

LinearSubspace::LinearSubspace(Matrix q) : q_(std::move(q)) {
  const Matrix gram = q_.transpose() * q_;
  const Matrix eye = Matrix::Identity(q_.cols(), q_.cols());
  if ((gram - eye).cwiseAbs().maxCoeff() > kOrthonormalTol) {
    throw NotOrthonormal("LinearSubspace: basis is not orthonormal");
  }
}

LinearSubspace LinearSubspace::from_basis(const Matrix& m) {
  return LinearSubspace(orthonormal_basis(m));
}

Vector LinearSubspace::project(const Vector& w) const {
  require_dim(dim(), w, "LinearSubspace::project");
  return q_ * (q_.transpose() * w);
}

Vector LinearSubspace::complement_project(const Vector& w) const {
  require_dim(dim(), w, "LinearSubspace::complement_project");
  return w - q_ * (q_.transpose() * w);
}

// ---------------------------------------------------------------------------
// EuclideanBall
// ---------------------------------------------------------------------------

EuclideanBall::EuclideanBall(Vector center, double radius)
    : center_(std::move(center)), radius_(radius) {
  if (!(radius_ >= 0.0)) {
    throw ParameterOutOfRange("EuclideanBall: radius must be nonnegative");
  }
}

Vector EuclideanBall::project(const Vector& w) const {
  require_dim(dim(), w, "EuclideanBall::project");
  Vector d = w - center_;
  const double dist = d.norm();
  if (dist <= radius_) return w;
  d *= radius_ / dist;
  d += center_;
  return d;
}

// ---------------------------------------------------------------------------
// L1Ball
// ---------------------------------------------------------------------------

L1Ball::L1Ball(double radius) : radius_(radius) {
  if (!(radius_ >= 0.0)) {
    throw ParameterOutOfRange("L1Ball: radius must be nonnegative");
  }
}

namespace l1 {

double simplex_threshold_scan(const Vector& u, double c) {
  const Index n = u.size();
  // Active candidates and their running mean excess rho = (sum(v) - c)/|v|.
  std::vector<double> v;
  std::vector<double> backlog;
  v.reserve(static_cast<size_t>(n));
  v.push_back(u[0]);
  double rho = u[0] - c;
  for (Index i = 1; i < n; ++i) {
    const double y = u[i];
    if (y > rho) {
      rho += (y - rho) / static_cast<double>(v.size() + 1);
      if (rho > y - c) {
        v.push_back(y);
      } else {
        backlog.insert(backlog.end(), v.begin(), v.end());
        v.assign(1, y);
        rho = y - c;
      }
    }
  }
  for (double y : backlog) {
    if (y > rho) {
      v.push_back(y);
      rho += (y - rho) / static_cast<double>(v.size());
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < v.size();) {
      if (v[i] <= rho) {
        const double y = v[i];
        v[i] = v.back();
        v.pop_back();
        rho += (rho - y) / static_cast<double>(v.size());
        changed = true;
      } else {
        ++i;
      }
    }
  }
  // Recompute the mean excess over the settled active set; the incremental
  // updates above can carry a few ulps of drift.
  double sum = std::accumulate(v.begin(), v.end(), 0.0);
  return (sum - c) / static_cast<double>(v.size());
}

double simplex_threshold_sorted(const Vector& u, double c) {
  std::vector<double> sorted(u.data(), u.data() + u.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (size_t k = 0; k < sorted.size(); ++k) {
    cumsum += sorted[k];
    const double candidate = (cumsum - c) / static_cast<double>(k + 1);
    if (sorted[k] > candidate) {
      tau = candidate;
    } else {
      break;
    }
  }
  return tau;
}

namespace {

Vector soft_threshold(const Vector& w, double tau) {
  Vector out(w.size());
  for (Index i = 0; i < w.size(); ++i) {
    const double mag = std::abs(w[i]) - tau;
    out[i] = mag > 0.0 ? std::copysign(mag, w[i]) : 0.0;
  }
  return out;
}

} // namespace

Vector project_sorted(const Vector& w, double c) {
  if (w.lpNorm<1>() <= c) return w;
  if (c == 0.0) return Vector::Zero(w.size());
  return soft_threshold(w, simplex_threshold_sorted(w.cwiseAbs(), c));
}

} // namespace l1

Vector L1Ball::project(const Vector& w) const {
  if (w.lpNorm<1>() <= radius_) return w;
  if (radius_ == 0.0) return Vector::Zero(w.size());
  const double tau = l1::simplex_threshold_scan(w.cwiseAbs(), radius_);
  Vector out(w.size());
  for (Index i = 0; i < w.size(); ++i) {
    const double mag = std::abs(w[i]) - tau;
    out[i] = mag > 0.0 ? std::copysign(mag, w[i]) : 0.0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Free functions over the variant
// ---------------------------------------------------------------------------

std::optional<Index> ambient_dimension(const ConvexSet& s) {
  return std::visit(
      [](const auto& set) -> std::optional<Index> {
        if constexpr (std::is_same_v<std::decay_t<decltype(set)>, L1Ball>) {
          return std::nullopt;
        } else {
          return set.dim();
        }
      },
      s);
}

bool is_subspace(const ConvexSet& s) {
  return std::holds_alternative<LinearSubspace>(s);
}

Vector project(const ConvexSet& s, const Vector& w) {
  return std::visit([&](const auto& set) { return set.project(w); }, s);
}

Vector relaxed_project(const ConvexSet& s, const Vector& w, double r) {
  if (r < -1.0 || r > 1.0) {
    throw ParameterOutOfRange("relaxed_project: r must lie in [-1, 1]");
  }
  return (1.0 + r) * project(s, w) - r * w;
}

Vector reflect(const ConvexSet& s, const Vector& w) {
  return 2.0 * project(s, w) - w;
}

Vector complement_project(const ConvexSet& s, const Vector& w) {
  const auto* subspace = std::get_if<LinearSubspace>(&s);
  if (subspace == nullptr) {
    throw UnsupportedSet("complement_project: set is not a linear subspace");
  }
  return subspace->complement_project(w);
}

} // namespace carpa
