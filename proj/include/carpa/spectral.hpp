#pragma once

#include <optional>

#include "carpa/errors.hpp"

namespace carpa {

/// Largest eigenvalue modulus of the 2x2 CARPA iteration block for a
/// principal angle with sin^2 = s2:
///
///   N = [ 1 - mu + mu c^2        -mu c s            ]
///       [ mu c s                 1 - mu - mu gamma + mu c^2 ]
///
/// Complex pair (gamma^2 < 4 c^2 s^2): |lambda|^2 =
/// ((1+gamma) mu - 2) mu s2 - gamma mu + 1. Real pair otherwise:
/// lambda_{1,2} = 1 - mu (gamma + 2 s2 -+ sqrt(gamma^2 - 4 s2 + 4 s2^2)) / 2.
double carpa_modulus(double gamma, double mu, double s2);

struct CarpaOptimal {
  double gamma_star = 0.0;
  double rate = 0.0;
  /// Closed form cF^2 - cF sF, present only when the case-1 regime of the
  /// rate analysis verifiably governs the oracle minimum.
  std::optional<double> formula_rate;
};

/// Grid oracle for the optimal CARPA relaxation at mu = 1: minimizes
/// max(carpa_modulus(g, 1, sin^2 theta_f), carpa_modulus(g, 1, sin^2 theta_p))
/// over gamma in [0, 1) on a uniform grid.
CarpaOptimal carpa_optimal(double theta_f, double theta_p, long grid_size = 100000);

} // namespace carpa
