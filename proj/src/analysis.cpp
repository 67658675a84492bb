#include "carpa/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace carpa {

namespace {

constexpr double kZeroAngleSigmaTol = 1e-12; // on 1 - sigma
constexpr double kOrthonormalCheckTol = 1e-8;

void check_orthonormal(const Matrix& q, const char* which) {
  const Matrix gram = q.transpose() * q;
  const Matrix eye = Matrix::Identity(q.cols(), q.cols());
  if ((gram - eye).cwiseAbs().maxCoeff() > kOrthonormalCheckTol) {
    throw NotOrthonormal(std::string("principal_angles: ") + which +
                         " does not have orthonormal columns");
  }
}

} // namespace

PrincipalAngles principal_angles_from_cosines(const Vector& sigma) {
  PrincipalAngles pa;
  pa.angles.reserve(static_cast<size_t>(sigma.size()));
  // Singular values arrive nonincreasing, so arccos comes out nondecreasing.
  for (Index i = 0; i < sigma.size(); ++i) {
    const double clamped = std::clamp(sigma[i], 0.0, 1.0);
    pa.angles.push_back(std::acos(clamped));
    if (1.0 - clamped <= kZeroAngleSigmaTol) ++pa.intersection_dim;
  }
  if (!pa.angles.empty()) {
    pa.theta_p = pa.angles.back();
    if (pa.intersection_dim < static_cast<Index>(pa.angles.size())) {
      pa.theta_f = pa.angles[static_cast<size_t>(pa.intersection_dim)];
    }
  }
  return pa;
}

PrincipalAngles principal_angles(const Matrix& qx, const Matrix& qy) {
  if (qx.rows() != qy.rows()) {
    throw DimensionMismatch("principal_angles: bases live in different spaces");
  }
  check_orthonormal(qx, "Q_X");
  check_orthonormal(qy, "Q_Y");
  const Matrix& narrow = qx.cols() <= qy.cols() ? qx : qy;
  const Matrix& wide = qx.cols() <= qy.cols() ? qy : qx;
  return principal_angles_from_cosines(singular_values(narrow.transpose() * wide));
}

PrincipalAngles principal_angles(const LinearSubspace& x, const LinearSubspace& y) {
  return principal_angles(x.basis(), y.basis());
}

double friedrichs_angle(const PrincipalAngles& pa) {
  if (!pa.theta_f) {
    throw NoFriedrichsAngle(
        "friedrichs_angle: every principal angle is zero (nested subspaces)");
  }
  return *pa.theta_f;
}

RatePrediction optimal_rate(Method tag, double theta_f, double theta_p,
                            long carpa_grid) {
  if (theta_f == 0.0) {
    throw DegenerateAngle("optimal_rate: theta_F must be positive");
  }
  if (!(theta_f > 0.0) || !(theta_f <= theta_p) || !(theta_p <= M_PI_2 + 1e-15)) {
    throw ParameterOutOfRange("optimal_rate: need 0 < theta_F <= theta_p <= pi/2");
  }
  const double sf = std::sin(theta_f);
  const double cf = std::cos(theta_f);
  const double sp = std::sin(theta_p);

  RatePrediction out;
  out.method = tag;
  switch (tag) {
    case Method::Sp:
      out.rate = (1.0 + cf) / 2.0;
      break;
    case Method::Rap:
      out.rate = (1.0 - sf * sf) / (1.0 + sf * sf);
      break;
    case Method::Prap:
      out.rate = (sp * sp - sf * sf) / (sp * sp + sf * sf);
      break;
    case Method::Grap:
    case Method::Aamr:
      out.rate = (1.0 - sf) / (1.0 + sf);
      break;
    case Method::Raar:
      out.rate = cf / std::sqrt(1.0 + 2.0 * cf * sf);
      break;
    case Method::Drap:
      out.rate = 1.0 - sf;
      break;
    case Method::Map:
      out.rate = cf * cf;
      break;
    case Method::Dr:
      out.rate = cf;
      break;
    case Method::Carpa: {
      const CarpaOptimal opt = carpa_optimal(theta_f, theta_p, carpa_grid);
      out.rate = opt.rate;
      out.params = CARPA{opt.gamma_star, 1.0};
      return out;
    }
    case Method::NsDr:
    case Method::NsCarpa:
      throw ParameterOutOfRange(
          "optimal_rate: non-stationary methods have no single linear rate");
  }
  out.params = optimal_params(tag, theta_f, theta_p);
  return out;
}

double empirical_rate(const std::vector<double>& errors, FitWindow window) {
  double sum_k = 0.0, sum_v = 0.0, sum_kk = 0.0, sum_kv = 0.0;
  long count = 0;
  for (size_t k = 0; k < errors.size(); ++k) {
    const double e = errors[k];
    if (!(e >= window.lo) || !(e <= window.hi)) continue;
    const double v = std::log(e);
    const double x = static_cast<double>(k);
    sum_k += x;
    sum_v += v;
    sum_kk += x * x;
    sum_kv += x * v;
    ++count;
  }
  if (count < 2) {
    throw InsufficientData("empirical_rate: fewer than two errors in the fit window");
  }
  const double denom = static_cast<double>(count) * sum_kk - sum_k * sum_k;
  const double slope = (static_cast<double>(count) * sum_kv - sum_k * sum_v) / denom;
  return std::exp(slope);
}

std::vector<Index> support(const Vector& v, double rel_cutoff) {
  std::vector<Index> idx;
  const double floor = rel_cutoff * v.cwiseAbs().maxCoeff();
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > floor) idx.push_back(i);
  }
  return idx;
}

Index support_size(const Vector& v, double rel_cutoff) {
  return static_cast<Index>(support(v, rel_cutoff).size());
}

} // namespace carpa
