#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "carpa/methods.hpp"
#include "carpa/problems.hpp"

namespace carpa {

/// Stopping rule: at least one tolerance must be present. residual_tol acts
/// on |z_{k+1} - z_k|, error_tol on |z_k - z*| (needs a known solution).
struct StopRule {
  std::optional<double> residual_tol;
  std::optional<double> error_tol;
  long max_iters = 10000;
};

void validate(const StopRule& stop);

enum class StopCause { None, ResidualTol, ErrorTol, FixedPoint, MaxIters };

struct RunOptions {
  bool record_trajectory = false;
  long trajectory_cap = 100000;
  /// Called with (k, z^k) for k = 0..iterations as the run progresses.
  std::function<void(long, const Vector&)> observer;
};

/// Full history of one run. residuals has one entry per iteration; errors
/// (when a solution is known) additionally includes the starting error, so
/// errors[k] = |z^k - z*| for k = 0..iterations.
struct RunRecord {
  MethodSpec method;
  long iterations = 0;
  bool converged = false;
  StopCause stopped_by = StopCause::None;
  std::vector<double> residuals;
  std::vector<double> errors;
  std::vector<double> gamma_history; // NSCARPA only
  Vector final_z;
  std::vector<Vector> trajectory; // opt-in, starts with z0
};

IterState make_initial_state(const MethodSpec& spec, const Vector& z0);

/// One step of any method, threading the non-stationary state (k, gamma,
/// previous residual) through IterState. prev_residual of the returned state
/// holds |z_next - z|. Throws FixedPointReached when the step map signals an
/// exact fixed point.
IterState advance(const MethodSpec& spec, const ConvexSet& X, const ConvexSet& Y,
                  const IterState& state);

/// Iterates spec from z0 until the stopping rule fires. Deterministic in its
/// inputs; a FixedPointReached signal from the step map counts as
/// convergence with a zero residual.
RunRecord run(const MethodSpec& spec, const ConvexSet& X, const ConvexSet& Y,
              const Vector& z0, const StopRule& stop,
              const std::optional<Vector>& known_solution = std::nullopt,
              const RunOptions& options = {});

struct AverageResult {
  double mean = 0.0;
  double hit_max_fraction = 0.0;
};

/// Mean iteration count over seeded trials; trial t derives its stream from
/// (seed, t) alone, so results do not depend on scheduling. Trials that
/// exhaust max_iters count at max_iters and feed hit_max_fraction.
AverageResult average_iterations(
    const std::function<ProblemInstance(std::uint64_t)>& problem_gen,
    const MethodSpec& spec, long trials, const StopRule& stop, std::uint64_t seed);

} // namespace carpa
