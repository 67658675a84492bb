#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "carpa/sets.hpp"

namespace carpa {

enum class Method {
  Map,
  Sp,
  Rap,
  Prap,
  Grap,
  Aamr,
  Raar,
  Drap,
  Dr,
  NsDr,
  Carpa,
  NsCarpa,
};

// Method parameter records. Defaults follow the non-relaxed convention
// (mu = 1) used throughout the experiments.

/// Alternating projections, z <- P_Y P_X z.
struct MAP {};

/// Simultaneous projection, z <- (P_Y z + P_X z)/2. Subspaces only.
struct SP {};

/// Relaxed alternating projection, z <- (1-mu) z + mu P_Y P_X z.
struct RAP {
  double mu = 1.0;
};

/// Partial relaxed alternating projection, z <- (1-mu) P_Y z + mu P_Y P_X z.
struct PRAP {
  double mu = 1.0;
};

/// Generalized relaxed alternating projection with relaxed projections
/// R^a = (1+a) P - a I on each set.
struct GRAP {
  double mu = 1.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
};

/// Averaged alternating modified reflections with scaled reflectors
/// 2 beta P - I.
struct AAMR {
  double mu = 1.0;
  double beta = 1.0;
};

/// Relaxed averaged alternating reflections,
/// z <- mu (P_Y P_X + P_Yc P_Xc) z + (1-mu) P_X z. Subspaces only.
struct RAAR {
  double mu = 1.0;
};

/// Relaxed Douglas-Rachford, z <- P_Y P_X z + mu P_Yc P_Xc z.
/// Subspaces only.
struct DRAP {
  double mu = 1.0;
};

/// Douglas-Rachford, z <- (1-mu) z + mu (z + P_Y(2 P_X - I) z - P_X z).
struct DR {
  double mu = 1.0;
};

/// Non-stationary DR with per-step ratio tau_k = |x|/|x - z|.
struct NSDR {};

/// Convex combination of the DR map and the projection-reflection
/// composition P_Y R_X, weight gamma, relaxation mu.
struct CARPA {
  double gamma = 0.5;
  double mu = 1.0;
};

enum class GammaSchedule {
  ResidualRatio, // gamma +- c2/(k+1)^(2+delta) on the residual-ratio test
  ArmijoLike,    // gamma*eta / min(gamma/eta, 1)
  PowerDecay,    // gamma_base + 1/k^delta, delta > 1
  GeometricDecay, // gamma_base + decay_rho^k
  ExpDecay,       // gamma_base + exp(-k/delta)
};

/// Non-stationary CARPA: gamma_k threads through the iteration state and is
/// clamped into [gamma_min, gamma_max] after every update.
struct NSCARPA {
  double gamma0 = 0.5;
  double gamma_min = 0.0;
  double gamma_max = 1.0;
  double mu = 1.0;
  double c1 = 0.5;
  double c2 = 50.0;
  double delta = 0.01;
  GammaSchedule schedule = GammaSchedule::ResidualRatio;
  double eta = 0.5;        // ArmijoLike
  double gamma_base = 0.5; // limit value for the decaying schedules
  double decay_rho = 0.5;  // GeometricDecay
};

using MethodSpec =
    std::variant<MAP, SP, RAP, PRAP, GRAP, AAMR, RAAR, DRAP, DR, NSDR, CARPA, NSCARPA>;

Method method_tag(const MethodSpec& spec);
std::string method_name(Method tag);
std::string method_name(const MethodSpec& spec);
std::optional<Method> parse_method_name(const std::string& name);
std::vector<Method> all_methods();

/// True for the methods that are only defined (or only analyzed) on pairs of
/// linear subspaces: SP, RAP, PRAP, RAAR, DRAP.
bool requires_subspaces(Method tag);

/// Throws ParameterOutOfRange when a parameter violates its method's range.
void validate(const MethodSpec& spec);

/// Iteration state threaded by the caller. x and y hold the most recent
/// projection outputs where the step computes them; gamma and prev_residual
/// are live for NSCARPA only.
struct IterState {
  Vector z;
  Vector x;
  Vector y;
  long k = 0;
  std::optional<double> gamma;
  std::optional<double> prev_residual;
};

struct CarpaStepResult {
  Vector x;
  Vector u;
  Vector y;
  Vector z_next;
};

/// One CARPA update: x = P_X z, u = 2x - z, y = P_Y u,
/// z' = (1-mu) z + mu ((1-gamma)(z + y - x) + gamma y).
CarpaStepResult carpa_step(const Vector& z, const ConvexSet& X, const ConvexSet& Y,
                           double gamma, double mu);

struct GammaUpdateConfig {
  double c1;
  double c2;
  double delta;
  double gamma_min;
  double gamma_max;
};

/// gamma_{k+1} = clamp(gamma_k +- c2/(k+1)^(2+delta)); the increase branch
/// fires when rho_k < c1, the decrease branch otherwise (including equality).
double nscarpa_gamma_update(double gamma_k, double rho_k, long k,
                            const GammaUpdateConfig& cfg);

struct NsdrStepResult {
  Vector x;
  Vector u;
  Vector y;
  Vector z_next;
  double tau;
};

/// Non-stationary DR step; throws FixedPointReached when |x - z| < 1e-14.
NsdrStepResult nsdr_step(const Vector& z, const ConvexSet& X, const ConvexSet& Y);

/// One step of any stationary method (the Table-style fixed-point operators
/// plus MAP, DR and CARPA). NSDR/NSCARPA need threaded state and are stepped
/// through the driver.
Vector baseline_step(const MethodSpec& spec, const Vector& z, const ConvexSet& X,
                     const ConvexSet& Y);

/// Parameter choices achieving each method's optimal two-subspace rate.
/// CARPA's gamma comes from the spectral grid oracle.
MethodSpec optimal_params(Method tag, double theta_f, double theta_p);

namespace detail {

/// Unvalidated CARPA update shared by the stationary step and the
/// non-stationary driver (which may clamp gamma to 1).
CarpaStepResult carpa_kernel(const Vector& z, const ConvexSet& X, const ConvexSet& Y,
                             double gamma, double mu);

/// Stationary update without parameter or dimension validation; the driver
/// validates once per run instead of once per step.
Vector baseline_kernel(const MethodSpec& spec, const Vector& z, const ConvexSet& X,
                       const ConvexSet& Y);

} // namespace detail

} // namespace carpa
