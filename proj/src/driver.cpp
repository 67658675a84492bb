#include "carpa/driver.hpp"

#include <cmath>

#include "carpa/rng.hpp"

namespace carpa {

namespace {

double scheduled_gamma(const NSCARPA& p, double gamma, double cur_res,
                       const IterState& state) {
  const long k = state.k;
  switch (p.schedule) {
    case GammaSchedule::ResidualRatio: {
      if (k < 1 || !state.prev_residual || !(*state.prev_residual > 0.0)) {
        return gamma;
      }
      const double rho = cur_res / *state.prev_residual;
      return nscarpa_gamma_update(gamma, rho, k,
                                  {p.c1, p.c2, p.delta, p.gamma_min, p.gamma_max});
    }
    case GammaSchedule::ArmijoLike: {
      if (k < 1 || !state.prev_residual || !(*state.prev_residual > 0.0)) {
        return gamma;
      }
      const double rho = cur_res / *state.prev_residual;
      const double next = rho < p.c1 ? gamma * p.eta : std::min(gamma / p.eta, 1.0);
      return std::clamp(next, p.gamma_min, p.gamma_max);
    }
    case GammaSchedule::PowerDecay:
      return std::clamp(p.gamma_base + 1.0 / std::pow(static_cast<double>(k + 1), p.delta),
                        p.gamma_min, p.gamma_max);
    case GammaSchedule::GeometricDecay:
      return std::clamp(p.gamma_base + std::pow(p.decay_rho, static_cast<double>(k + 1)),
                        p.gamma_min, p.gamma_max);
    case GammaSchedule::ExpDecay:
      return std::clamp(p.gamma_base + std::exp(-static_cast<double>(k + 1) / p.delta),
                        p.gamma_min, p.gamma_max);
  }
  return gamma;
}

} // namespace

void validate(const StopRule& stop) {
  if (stop.max_iters < 1) {
    throw ParameterOutOfRange("StopRule: max_iters must be at least 1");
  }
  if (!stop.residual_tol && !stop.error_tol) {
    throw ParameterOutOfRange("StopRule: at least one tolerance must be present");
  }
  if ((stop.residual_tol && !(*stop.residual_tol > 0.0)) ||
      (stop.error_tol && !(*stop.error_tol > 0.0))) {
    throw ParameterOutOfRange("StopRule: tolerances must be positive");
  }
}

IterState make_initial_state(const MethodSpec& spec, const Vector& z0) {
  IterState state;
  state.z = z0;
  if (const auto* p = std::get_if<NSCARPA>(&spec)) {
    state.gamma = p->gamma0;
  }
  return state;
}

IterState advance(const MethodSpec& spec, const ConvexSet& X, const ConvexSet& Y,
                  const IterState& state) {
  IterState next;
  next.k = state.k + 1;
  if (const auto* p = std::get_if<NSCARPA>(&spec)) {
    const double gamma = state.gamma.value_or(p->gamma0);
    auto step = detail::carpa_kernel(state.z, X, Y, gamma, p->mu);
    const double res = (step.z_next - state.z).norm();
    next.gamma = scheduled_gamma(*p, gamma, res, state);
    next.x = std::move(step.x);
    next.y = std::move(step.y);
    next.z = std::move(step.z_next);
    next.prev_residual = res;
    return next;
  }
  if (std::holds_alternative<NSDR>(spec)) {
    auto step = nsdr_step(state.z, X, Y);
    next.x = std::move(step.x);
    next.y = std::move(step.y);
    next.z = std::move(step.z_next);
    next.prev_residual = (next.z - state.z).norm();
    return next;
  }
  if (const auto* p = std::get_if<CARPA>(&spec)) {
    auto step = detail::carpa_kernel(state.z, X, Y, p->gamma, p->mu);
    next.x = std::move(step.x);
    next.y = std::move(step.y);
    next.z = std::move(step.z_next);
    next.prev_residual = (next.z - state.z).norm();
    return next;
  }
  next.z = detail::baseline_kernel(spec, state.z, X, Y);
  next.prev_residual = (next.z - state.z).norm();
  return next;
}

RunRecord run(const MethodSpec& spec, const ConvexSet& X, const ConvexSet& Y,
              const Vector& z0, const StopRule& stop,
              const std::optional<Vector>& known_solution, const RunOptions& options) {
  validate(spec);
  validate(stop);
  if (stop.error_tol && !known_solution) {
    throw ParameterOutOfRange("run: error_tol requires a known solution");
  }
  if (known_solution && known_solution->size() != z0.size()) {
    throw DimensionMismatch("run: known solution dimension mismatch");
  }
  const auto dx = ambient_dimension(X);
  const auto dy = ambient_dimension(Y);
  if ((dx && *dx != z0.size()) || (dy && *dy != z0.size())) {
    throw DimensionMismatch("run: set/iterate dimensions disagree");
  }
  if (requires_subspaces(method_tag(spec)) && (!is_subspace(X) || !is_subspace(Y))) {
    throw UnsupportedSet(method_name(spec) + " is defined for linear subspaces only");
  }

  RunRecord rec;
  rec.method = spec;
  const bool is_nscarpa = std::holds_alternative<NSCARPA>(spec);

  IterState state = make_initial_state(spec, z0);
  if (known_solution) {
    rec.errors.push_back((z0 - *known_solution).norm());
  }
  if (options.record_trajectory) {
    rec.trajectory.push_back(z0);
  }
  if (options.observer) {
    options.observer(0, z0);
  }

  for (long k = 0; k < stop.max_iters; ++k) {
    if (is_nscarpa) {
      rec.gamma_history.push_back(*state.gamma);
    }
    IterState next;
    try {
      next = advance(spec, X, Y, state);
    } catch (const FixedPointReached&) {
      rec.residuals.push_back(0.0);
      if (known_solution) rec.errors.push_back((state.z - *known_solution).norm());
      if (options.record_trajectory &&
          static_cast<long>(rec.trajectory.size()) < options.trajectory_cap) {
        rec.trajectory.push_back(state.z);
      }
      if (options.observer) {
        options.observer(k + 1, state.z);
      }
      rec.iterations = k + 1;
      rec.converged = true;
      rec.stopped_by = StopCause::FixedPoint;
      rec.final_z = state.z;
      return rec;
    }
    const double res = *next.prev_residual;
    rec.residuals.push_back(res);
    double err = 0.0;
    if (known_solution) {
      err = (next.z - *known_solution).norm();
      rec.errors.push_back(err);
    }
    if (options.record_trajectory &&
        static_cast<long>(rec.trajectory.size()) < options.trajectory_cap) {
      rec.trajectory.push_back(next.z);
    }
    if (options.observer) {
      options.observer(k + 1, next.z);
    }
    state = std::move(next);
    if (stop.residual_tol && res <= *stop.residual_tol) {
      rec.converged = true;
      rec.stopped_by = StopCause::ResidualTol;
      rec.iterations = k + 1;
      rec.final_z = state.z;
      return rec;
    }
    if (stop.error_tol && known_solution && err <= *stop.error_tol) {
      rec.converged = true;
      rec.stopped_by = StopCause::ErrorTol;
      rec.iterations = k + 1;
      rec.final_z = state.z;
      return rec;
    }
  }
  rec.iterations = stop.max_iters;
  rec.converged = false;
  rec.stopped_by = StopCause::MaxIters;
  rec.final_z = state.z;
  return rec;
}

AverageResult average_iterations(
    const std::function<ProblemInstance(std::uint64_t)>& problem_gen,
    const MethodSpec& spec, long trials, const StopRule& stop, std::uint64_t seed) {
  if (trials < 1) {
    throw ParameterOutOfRange("average_iterations: trials must be at least 1");
  }
  long long total = 0;
  long hit_max = 0;
  for (long t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = derive_seed(seed, static_cast<std::uint64_t>(t));
    const ProblemInstance inst = problem_gen(trial_seed);
    const Vector z0 = inst.start_sampler(derive_seed(trial_seed, 1));
    // only the counts matter; skip the error track unless the rule needs it
    const RunRecord rec =
        stop.error_tol
            ? run(spec, inst.x_set, inst.y_set, z0, stop, inst.known_solution)
            : run(spec, inst.x_set, inst.y_set, z0, stop);
    total += rec.iterations;
    if (rec.stopped_by == StopCause::MaxIters) ++hit_max;
  }
  AverageResult out;
  out.mean = static_cast<double>(total) / static_cast<double>(trials);
  out.hit_max_fraction = static_cast<double>(hit_max) / static_cast<double>(trials);
  return out;
}

} // namespace carpa
