#pragma once

#include "obs2gd/gd_estimator.hpp"
#include "obs2gd/gpebo.hpp"
#include "obs2gd/ltv_system.hpp"

namespace obs2gd {

/// Composite observer: GPEBO extension feeding the interlaced G+D estimator,
/// with the state estimate reconstructed as xi + phi_a * theta_hat.
/// Total dynamic order is (3 + 2n) * n.
struct Observer2GD {
  GpeboState gpebo;
  GdState gd;
  GdConfig cfg;
  int n = 0;
};

Observer2GD observer_init(const LtvSystem& sys, const GdConfig& cfg,
                          const Vector& xi0, double t0);

/// Flattened dynamic state dimension (3 + 2n) * n.
int observer_state_dimension(const Observer2GD& obs);

/// Advances the observer one grid step. y must be the plant output at the
/// observer's current time; the regressor sample is formed at the current
/// time and held over the step. disturbance is added to the scalar
/// regression output y_cal before the estimator sees it.
Observer2GD observer_step(const Observer2GD& obs, const LtvSystem& sys, double y,
                          double dt, double disturbance = 0.0,
                          std::vector<std::string>* warnings = nullptr);

/// Current state estimate xi + phi_a * theta_hat.
Vector observer_output(const Observer2GD& obs);

/// Kalman-Bucy baseline state. Used for comparison runs only.
struct KalmanBucyState {
  Vector x_hat;
  Matrix p;
  double q = 0.0;  // process noise intensity
  double r = 1.0;  // measurement noise intensity
  double t = 0.0;
  bool pd_lost = false;  // P lost positive-definiteness at some step
};

KalmanBucyState kalman_bucy_init(int n, const Vector& x_hat0, double p0_scale,
                                 double q, double r, double t0);

/// One RK4 step of the filter and Riccati equations with y held over the
/// step; P is re-symmetrized after the step.
KalmanBucyState kalman_bucy_step(const KalmanBucyState& kb, const LtvSystem& sys,
                                 double y, double dt);

}  // namespace obs2gd
