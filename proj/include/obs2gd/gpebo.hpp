#pragma once

#include "obs2gd/ltv_system.hpp"
#include "obs2gd/numerics.hpp"

namespace obs2gd {

/// Dynamic extension converting state observation into estimation of the
/// constant theta = x(0) - xi(0): a plant copy xi plus the fundamental
/// matrix phi_a of the homogeneous dynamics.
struct GpeboState {
  Vector xi;
  Matrix phi_a;
  double t = 0.0;
};

/// One data point of the scalar linear regression y_cal = psi' theta.
struct RegressorSample {
  double t = 0.0;
  double y_cal = 0.0;
  Vector psi;
};

/// Ground truth for testing only; never available to the observer.
struct ThetaTruth {
  Vector theta;
};

GpeboState gpebo_init(int n, const Vector& xi0, double t0);

/// Advances xi and phi_a one RK4 step on the shared grid.
GpeboState gpebo_step(const GpeboState& state, const LtvSystem& sys, double dt);

/// y must be the plant output at state.t.
RegressorSample make_regressor(const GpeboState& state, const LtvSystem& sys, double y);

/// xhat = xi + phi_a * theta_hat.
Vector reconstruct_state(const GpeboState& state, const Vector& theta_hat);

ThetaTruth true_theta(const Vector& x0, const Vector& xi0);

}  // namespace obs2gd
