#include "carpa/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace carpa {

namespace {

void check_angles(double theta_f, double theta_p) {
  if (theta_f == 0.0) {
    throw DegenerateAngle("rates are defined for theta_F > 0");
  }
  if (!(theta_f > 0.0) || !(theta_f <= theta_p) || !(theta_p <= M_PI_2 + 1e-15)) {
    throw ParameterOutOfRange("angles must satisfy 0 < theta_F <= theta_p <= pi/2");
  }
}

} // namespace

double carpa_modulus(double gamma, double mu, double s2) {
  if (gamma < 0.0 || gamma > 1.0) {
    throw ParameterOutOfRange("carpa_modulus: gamma must lie in [0, 1]");
  }
  if (!(mu > 0.0) || !(mu < 2.0 / (1.0 + gamma))) {
    throw ParameterOutOfRange("carpa_modulus: mu must lie in (0, 2/(1+gamma))");
  }
  if (!(s2 > 0.0) || s2 > 1.0) {
    throw ParameterOutOfRange("carpa_modulus: s2 must lie in (0, 1]");
  }
  const double disc = gamma * gamma - 4.0 * s2 + 4.0 * s2 * s2;
  if (disc < 0.0) {
    const double mod2 = ((1.0 + gamma) * mu - 2.0) * mu * s2 - gamma * mu + 1.0;
    return std::sqrt(std::max(mod2, 0.0));
  }
  const double root = std::sqrt(disc);
  const double lambda1 = 1.0 - mu * (gamma + 2.0 * s2 - root) / 2.0;
  const double lambda2 = 1.0 - mu * (gamma + 2.0 * s2 + root) / 2.0;
  return std::max(std::abs(lambda1), std::abs(lambda2));
}

CarpaOptimal carpa_optimal(double theta_f, double theta_p, long grid_size) {
  check_angles(theta_f, theta_p);
  if (grid_size < 100) {
    throw ParameterOutOfRange("carpa_optimal: grid_size must be at least 100");
  }
  const double sf = std::sin(theta_f);
  const double cf = std::cos(theta_f);
  const double sf2 = sf * sf;
  const double sp = std::sin(theta_p);
  const double sp2 = std::min(sp * sp, 1.0);

  CarpaOptimal best;
  best.rate = std::numeric_limits<double>::infinity();
  for (long j = 0; j < grid_size; ++j) {
    const double gamma = static_cast<double>(j) / static_cast<double>(grid_size);
    const double value =
        std::max(carpa_modulus(gamma, 1.0, sf2), carpa_modulus(gamma, 1.0, sp2));
    if (value < best.rate) {
      best.rate = value;
      best.gamma_star = gamma;
    }
  }

  // Closed form cF^2 - cF sF at gamma = 2 cF sF. It predicts the oracle only
  // when that gamma is admissible (theta_F below pi/4), sF^2 sits at or below
  // the region boundary (1 + sqrt(1 - gamma^2))/2, and the theta_p block does
  // not dominate there.
  const double gamma_f = 2.0 * cf * sf;
  if (cf > sf && gamma_f < 1.0) {
    const double boundary = (1.0 + std::sqrt(std::max(1.0 - gamma_f * gamma_f, 0.0))) / 2.0;
    const double mod_f = carpa_modulus(gamma_f, 1.0, sf2);
    const double mod_p = carpa_modulus(gamma_f, 1.0, sp2);
    if (sf2 <= boundary + 1e-12 && mod_p <= mod_f + 1e-12) {
      const double formula = cf * cf - cf * sf;
      best.formula_rate = formula;
      // The minimum sits at a kink whose one-sided slope is cF/(2(cF - sF)),
      // so the grid resolves it to slope/grid_size.
      const double slope = cf / (2.0 * (cf - sf));
      const double tol = (2.0 + slope) / static_cast<double>(grid_size);
      if (std::abs(best.rate - formula) > tol) {
        throw Error("carpa_optimal: grid rate " + std::to_string(best.rate) +
                    " deviates from closed form " + std::to_string(formula));
      }
    }
  }
  return best;
}

} // namespace carpa
