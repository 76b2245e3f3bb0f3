#include "obs2gd/gpebo.hpp"

namespace obs2gd {

GpeboState gpebo_init(int n, const Vector& xi0, double t0) {
  if (xi0.size() != n) throw std::invalid_argument("gpebo_init: xi0 dimension mismatch");
  return GpeboState{xi0, Matrix::Identity(n, n), t0};
}

GpeboState gpebo_step(const GpeboState& state, const LtvSystem& sys, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("gpebo_step: dt must be positive");
  const VectorField xi_field = [&sys](double t, const Vector& xi) -> Vector {
    return sys.A(t) * xi + sys.b(t);
  };
  const MatrixField phi_field = [&sys](double t, const Matrix& phi) -> Matrix {
    return sys.A(t) * phi;
  };
  GpeboState next;
  next.xi = rk4_step(xi_field, state.t, state.xi, dt);
  next.phi_a = rk4_step(phi_field, state.t, state.phi_a, dt);
  next.t = state.t + dt;
  return next;
}

RegressorSample make_regressor(const GpeboState& state, const LtvSystem& sys, double y) {
  const Vector c = sys.C(state.t);
  RegressorSample sample;
  sample.t = state.t;
  sample.y_cal = y - c.dot(state.xi);
  sample.psi = state.phi_a.transpose() * c;
  return sample;
}

Vector reconstruct_state(const GpeboState& state, const Vector& theta_hat) {
  if (theta_hat.size() != state.xi.size()) {
    throw std::invalid_argument("reconstruct_state: theta_hat dimension mismatch");
  }
  return state.xi + state.phi_a * theta_hat;
}

ThetaTruth true_theta(const Vector& x0, const Vector& xi0) {
  if (x0.size() != xi0.size()) {
    throw std::invalid_argument("true_theta: dimension mismatch");
  }
  return ThetaTruth{x0 - xi0};
}

}  // namespace obs2gd
