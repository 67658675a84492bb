#pragma once

#include <optional>
#include <vector>

#include "carpa/methods.hpp"
#include "carpa/spectral.hpp"

namespace carpa {

/// Angle spectrum between two subspaces. intersection_dim counts the angles
/// that are zero up to the singular-value tolerance; theta_f is the first
/// nonzero angle (the Friedrichs angle) when one exists.
struct PrincipalAngles {
  std::vector<double> angles; // nondecreasing, radians in [0, pi/2]
  Index intersection_dim = 0;
  std::optional<double> theta_f;
  double theta_p = 0.0;
};

/// Builds the spectrum from the singular values of Q_X^T Q_Y (clamped into
/// [0, 1] before arccos). A singular value within 1e-12 of 1 counts as a zero
/// angle; construction noise sits around 1e-14.
PrincipalAngles principal_angles_from_cosines(const Vector& sigma);

/// Throws NotOrthonormal when either basis fails |Q^T Q - I| <= 1e-8; the
/// narrower matrix is used as Q_X internally.
PrincipalAngles principal_angles(const Matrix& qx, const Matrix& qy);
PrincipalAngles principal_angles(const LinearSubspace& x, const LinearSubspace& y);

/// angles[s], the smallest nonzero angle; throws NoFriedrichsAngle when the
/// subspaces are nested up to tolerance.
double friedrichs_angle(const PrincipalAngles& pa);

struct RatePrediction {
  Method method;
  double rate = 0.0;
  MethodSpec params;
};

/// Optimal two-subspace linear rate for a stationary method, paired with the
/// parameters achieving it. CARPA's value comes from the grid oracle.
RatePrediction optimal_rate(Method tag, double theta_f, double theta_p,
                            long carpa_grid = 100000);

struct FitWindow {
  double lo = 1e-10;
  double hi = 1e-2;
};

/// Least-squares slope of log(error) against iteration index over the error
/// values inside [lo, hi], exponentiated. Throws InsufficientData with fewer
/// than two in-window points.
double empirical_rate(const std::vector<double>& errors, FitWindow window = {});

/// Indices carrying numerically meaningful mass: |v_i| > rel_cutoff * max|v|.
/// Soft-threshold outputs keep structurally nonzero debris of vanishing
/// magnitude, so support tracking needs a relative floor.
std::vector<Index> support(const Vector& v, double rel_cutoff = 1e-8);
Index support_size(const Vector& v, double rel_cutoff = 1e-8);

} // namespace carpa
