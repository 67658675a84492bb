#include "carpa/problems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "carpa/rng.hpp"

namespace carpa {

namespace {

std::vector<Index> sample_distinct(Rng& rng, Index count, Index bound) {
  std::vector<Index> pool(static_cast<size_t>(bound));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < count; ++i) {
    const Index j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(bound - i)));
    std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
  }
  std::vector<Index> picked(pool.begin(), pool.begin() + count);
  std::sort(picked.begin(), picked.end());
  return picked;
}

} // namespace

ProblemInstance gen_two_subspaces(Index n, Index p, Index q,
                                  const std::vector<double>& angles,
                                  std::uint64_t seed) {
  if (!(1 <= p && p <= q && p + q <= n)) {
    throw ParameterOutOfRange("gen_two_subspaces: need 1 <= p <= q, p + q <= n");
  }
  if (static_cast<Index>(angles.size()) != p) {
    throw ParameterOutOfRange("gen_two_subspaces: angle list length must equal p");
  }
  for (size_t i = 0; i < angles.size(); ++i) {
    if (!(angles[i] >= 0.0) || angles[i] > M_PI_2 + 1e-15) {
      throw ParameterOutOfRange("gen_two_subspaces: angles must lie in [0, pi/2]");
    }
    if (i > 0 && angles[i] < angles[i - 1]) {
      throw ParameterOutOfRange("gen_two_subspaces: angles must be nondecreasing");
    }
  }

  Rng rng(seed);
  const Matrix frame = orthonormal_basis(rng.normal_matrix(n, n));

  const Matrix qx = frame.leftCols(p);
  Matrix qy(n, q);
  for (Index i = 0; i < p; ++i) {
    qy.col(i) = std::cos(angles[static_cast<size_t>(i)]) * frame.col(i) +
                std::sin(angles[static_cast<size_t>(i)]) * frame.col(p + i);
  }
  for (Index j = 0; j < q - p; ++j) {
    qy.col(p + j) = frame.col(2 * p + j);
  }

  std::optional<Vector> known;
  if (angles.front() > 0.0) {
    known = Vector::Zero(n);
  }
  return ProblemInstance{
      LinearSubspace(qx),
      LinearSubspace(qy),
      n,
      std::move(known),
      [n](std::uint64_t s) {
        Rng r(s);
        return r.normal_vector(n);
      },
      "two-subspaces(n=" + std::to_string(n) + ",p=" + std::to_string(p) +
          ",q=" + std::to_string(q) + ")",
  };
}

ProblemInstance gen_experiment_subspaces(double theta_f, double theta_p,
                                         std::uint64_t seed) {
  if (!(theta_f > 0.0) || !(theta_f <= theta_p) || !(theta_p <= M_PI_2 + 1e-15)) {
    throw ParameterOutOfRange(
        "gen_experiment_subspaces: need 0 < theta_f <= theta_p <= pi/2");
  }
  constexpr Index n = 100;
  constexpr Index p = 50;
  std::vector<double> angles(static_cast<size_t>(p));
  for (Index i = 0; i < p; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(p - 1);
    angles[static_cast<size_t>(i)] = theta_f + t * (theta_p - theta_f);
  }
  ProblemInstance inst = gen_two_subspaces(n, p, p, angles, seed);
  inst.label = "subspace(" + std::to_string(theta_f) + "," + std::to_string(theta_p) + ")";
  return inst;
}

ProblemInstance gen_ball_line(std::uint64_t /*seed*/) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Matrix a(1, 2);
  a << inv_sqrt2, inv_sqrt2;
  Vector b(1);
  b << 1.0;
  Vector solution(2);
  solution << inv_sqrt2, inv_sqrt2;

  return ProblemInstance{
      AffineSet(a, b),
      EuclideanBall(Vector::Zero(2), 1.0),
      2,
      solution,
      [solution](std::uint64_t s) {
        Rng r(s);
        const double phi = 2.0 * M_PI * r.uniform();
        Vector u(2);
        u << std::cos(phi), std::sin(phi);
        return Vector(solution + 10.0 * u);
      },
      "ball-line",
  };
}

Matrix dct_matrix(Index n) {
  if (n < 1) {
    throw ParameterOutOfRange("dct_matrix: n must be at least 1");
  }
  Matrix d(n, n);
  const double scale0 = std::sqrt(1.0 / static_cast<double>(n));
  const double scale = std::sqrt(2.0 / static_cast<double>(n));
  for (Index k = 0; k < n; ++k) {
    const double row_scale = k == 0 ? scale0 : scale;
    for (Index j = 0; j < n; ++j) {
      d(k, j) = row_scale *
                std::cos(M_PI * (2.0 * static_cast<double>(j) + 1.0) *
                         static_cast<double>(k) / (2.0 * static_cast<double>(n)));
    }
  }
  return d;
}

ProblemInstance gen_cs_instance(Index m, Index n, Index kappa, CsKind kind,
                                std::uint64_t seed) {
  if (!(0 <= kappa && kappa <= m && m <= n && m >= 1)) {
    throw ParameterOutOfRange("gen_cs_instance: need 0 <= kappa <= m <= n");
  }
  Rng rng(seed);
  Matrix a;
  switch (kind) {
    case CsKind::Gaussian:
    case CsKind::IdGaussian:
      a = rng.normal_matrix(m, n) / std::sqrt(static_cast<double>(m));
      break;
    case CsKind::DctDirac:
    case CsKind::DctRestrict: {
      const Matrix basis = dct_matrix(n);
      const std::vector<Index> rows = sample_distinct(rng, m, n);
      a.resize(m, n);
      for (Index i = 0; i < m; ++i) {
        a.row(i) = basis.row(rows[static_cast<size_t>(i)]);
      }
      break;
    }
  }

  Vector x_star = Vector::Zero(n);
  if (kappa > 0) {
    const std::vector<Index> support = sample_distinct(rng, kappa, n);
    for (Index idx : support) {
      x_star[idx] = rng.normal();
    }
  }
  const Vector b = a * x_star;
  const double c = x_star.lpNorm<1>();

  return ProblemInstance{
      AffineSet(a, b), // throws RankDeficient when A A^T fails
      L1Ball(c),
      n,
      x_star,
      [n](std::uint64_t s) {
        Rng r(s);
        return r.normal_vector(n);
      },
      "cs(m=" + std::to_string(m) + ",n=" + std::to_string(n) +
          ",kappa=" + std::to_string(kappa) + ")",
  };
}

std::optional<ProblemInstance> make_preset(const std::string& name, std::uint64_t seed) {
  if (name == "toy") return gen_cs_instance(500, 2000, 50, CsKind::Gaussian, seed);
  if (name == "t4-1") return gen_cs_instance(1024, 2048, 120, CsKind::DctDirac, seed);
  if (name == "t4-2") return gen_cs_instance(600, 2560, 20, CsKind::IdGaussian, seed);
  if (name == "t4-3") return gen_cs_instance(256, 1024, 32, CsKind::IdGaussian, seed);
  if (name == "t4-4") return gen_cs_instance(200, 1000, 3, CsKind::DctRestrict, seed);
  if (name == "ball-line") return gen_ball_line(seed);
  double tf = 0.0;
  double tp = 0.0;
  if (std::sscanf(name.c_str(), "subspace(%lf,%lf)", &tf, &tp) == 2) {
    return gen_experiment_subspaces(tf, tp, seed);
  }
  return std::nullopt;
}

} // namespace carpa
