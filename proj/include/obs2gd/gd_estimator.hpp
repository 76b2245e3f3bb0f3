#pragma once

#include <string>
#include <vector>

#include "obs2gd/gpebo.hpp"
#include "obs2gd/numerics.hpp"

namespace obs2gd {

/// Gains and initial estimates of the interlaced gradient + mixing + LMS
/// estimator.
struct GdConfig {
  double gamma_g = 1.0;
  double gamma = 10.0;
  Vector theta_g0;
  Vector theta0;
};

struct GdState {
  Vector theta_g_hat;
  Matrix omega;
  Vector theta_hat;
  double t = 0.0;
};

/// Scalarized regression data: Y = Delta * theta with scalar regressor
/// Delta = det(I - Omega).
struct MixedSample {
  double delta = 0.0;
  Vector y_mix;
  Matrix d_mat;
};

GdState gd_init(const GdConfig& cfg, int n, double t0);

/// Gradient estimator right-hand side: gamma_g * psi * (y_cal - psi' theta_g_hat).
Vector gradient_rhs(const GdState& state, const RegressorSample& sample,
                    const GdConfig& cfg);

/// Extension dynamics right-hand side: -gamma_g * psi * psi' * Omega.
Matrix omega_rhs(const GdState& state, const RegressorSample& sample,
                 const GdConfig& cfg);

/// D = I - Omega, Delta = det D, Y = adj(D) (theta_g_hat - Omega theta_g0).
MixedSample mix(const GdState& state, const GdConfig& cfg);

/// LMS right-hand side: gamma * Delta * (Y - Delta * theta_hat).
Vector lms_rhs(const GdState& state, const MixedSample& mixed, const GdConfig& cfg);

/// One RK4 step of the interlaced system with (psi, y_cal) held constant over
/// the step; the mixed quantities are recomputed at every RK4 sub-stage.
/// Appends a step-size warning to *warnings when gamma * Delta^2 * dt > 1.
GdState gd_step(const GdState& state, const RegressorSample& sample,
                const GdConfig& cfg, double dt,
                std::vector<std::string>* warnings = nullptr);

}  // namespace obs2gd
