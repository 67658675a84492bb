#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "carpa/sets.hpp"

namespace carpa {

/// One feasibility instance: the two sets, an optional known common point and
/// a seeded starting-point rule. Generators are pure in (parameters, seed).
struct ProblemInstance {
  ConvexSet x_set;
  ConvexSet y_set;
  Index ambient_dim = 0;
  std::optional<Vector> known_solution;
  std::function<Vector(std::uint64_t)> start_sampler;
  std::string label;
};

/// Two subspaces of R^n with prescribed principal angles, built from a seeded
/// random orthogonal frame and the block projector construction
/// P_X = D diag(I_p, 0, 0, 0) D^T, P_Y = D [C^2 CS; CS S^2; I_{q-p}; 0] D^T.
ProblemInstance gen_two_subspaces(Index n, Index p, Index q,
                                  const std::vector<double>& angles,
                                  std::uint64_t seed);

/// The subspace benchmark family: n = 100, p = q = 50, principal angles
/// linearly spaced from theta_f to theta_p.
ProblemInstance gen_experiment_subspaces(double theta_f, double theta_p,
                                         std::uint64_t seed);

/// Unit ball at the origin and the tangent line a^T x = 1, a = (1,1)/sqrt(2);
/// starts are x* + 10u with u uniform on the unit circle.
ProblemInstance gen_ball_line(std::uint64_t seed);

enum class CsKind {
  Gaussian,    // A ~ N(0,1)/sqrt(m)
  DctDirac,    // A = random row subset of the orthonormal DCT
  IdGaussian,  // sparse in the identity basis, Gaussian measurements
  DctRestrict, // restriction of the DCT to m random rows
};

/// Basis-pursuit feasibility instance: X = {Ax = b}, Y = l1 ball of radius
/// ||x*||_1, with a kappa-sparse planted solution x*.
ProblemInstance gen_cs_instance(Index m, Index n, Index kappa, CsKind kind,
                                std::uint64_t seed);

/// Orthonormal DCT-II matrix (D^T D = I; first row constant 1/sqrt(n)).
Matrix dct_matrix(Index n);

/// Named instances usable from the CLI: "toy", "t4-1" .. "t4-4", "ball-line",
/// "subspace(<theta_f>,<theta_p>)". Returns nullopt for unknown names.
std::optional<ProblemInstance> make_preset(const std::string& name, std::uint64_t seed);

} // namespace carpa
