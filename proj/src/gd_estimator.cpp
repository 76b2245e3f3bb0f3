#include "obs2gd/gd_estimator.hpp"

#include <cmath>

namespace obs2gd {

GdState gd_init(const GdConfig& cfg, int n, double t0) {
  if (!(cfg.gamma_g > 0.0)) throw std::invalid_argument("gd_init: gamma_g must be positive");
  if (!(cfg.gamma > 0.0)) throw std::invalid_argument("gd_init: gamma must be positive");
  GdState state;
  state.theta_g_hat = cfg.theta_g0.size() == n ? cfg.theta_g0 : Vector::Zero(n).eval();
  state.omega = Matrix::Identity(n, n);
  state.theta_hat = cfg.theta0.size() == n ? cfg.theta0 : Vector::Zero(n).eval();
  state.t = t0;
  if (cfg.theta_g0.size() != 0 && cfg.theta_g0.size() != n) {
    throw std::invalid_argument("gd_init: theta_g0 dimension mismatch");
  }
  if (cfg.theta0.size() != 0 && cfg.theta0.size() != n) {
    throw std::invalid_argument("gd_init: theta0 dimension mismatch");
  }
  return state;
}

Vector gradient_rhs(const GdState& state, const RegressorSample& sample,
                    const GdConfig& cfg) {
  return cfg.gamma_g * sample.psi *
         (sample.y_cal - sample.psi.dot(state.theta_g_hat));
}

Matrix omega_rhs(const GdState& state, const RegressorSample& sample,
                 const GdConfig& cfg) {
  return -cfg.gamma_g * sample.psi * (sample.psi.transpose() * state.omega);
}

MixedSample mix(const GdState& state, const GdConfig& cfg) {
  const auto n = state.omega.rows();
  MixedSample out;
  out.d_mat = Matrix::Identity(n, n) - state.omega;
  auto [delta, adj] = det_and_adjugate(out.d_mat);
  out.delta = delta;
  const Vector theta_g0 =
      cfg.theta_g0.size() == n ? cfg.theta_g0 : Vector::Zero(n).eval();
  out.y_mix = adj * (state.theta_g_hat - state.omega * theta_g0);
  return out;
}

Vector lms_rhs(const GdState& state, const MixedSample& mixed, const GdConfig& cfg) {
  return cfg.gamma * mixed.delta * (mixed.y_mix - mixed.delta * state.theta_hat);
}

namespace {

struct Stage {
  Vector d_theta_g;
  Matrix d_omega;
  Vector d_theta;
};

Stage eval_rhs(const GdState& at, const RegressorSample& sample, const GdConfig& cfg) {
  Stage s;
  s.d_theta_g = gradient_rhs(at, sample, cfg);
  s.d_omega = omega_rhs(at, sample, cfg);
  s.d_theta = lms_rhs(at, mix(at, cfg), cfg);
  return s;
}

GdState advance(const GdState& base, const Stage& k, double h) {
  GdState out;
  out.theta_g_hat = base.theta_g_hat + h * k.d_theta_g;
  out.omega = base.omega + h * k.d_omega;
  out.theta_hat = base.theta_hat + h * k.d_theta;
  out.t = base.t + h;
  return out;
}

}  // namespace

GdState gd_step(const GdState& state, const RegressorSample& sample,
                const GdConfig& cfg, double dt, std::vector<std::string>* warnings) {
  if (!(dt > 0.0)) throw std::invalid_argument("gd_step: dt must be positive");
  if (std::abs(sample.t - state.t) > 1e-9 * std::max(1.0, std::abs(state.t))) {
    throw std::invalid_argument("gd_step: sample timestamp does not match estimator time");
  }

  if (warnings != nullptr) {
    const double delta0 = mix(state, cfg).delta;
    if (cfg.gamma * delta0 * delta0 * dt > 1.0) {
      warnings->push_back("gd_step: gamma*Delta^2*dt > 1 at t = " +
                          std::to_string(state.t) +
                          "; LMS error monotonicity may degrade");
    }
  }

  // Single augmented RK4 with the regressor sample held over the step.
  const Stage k1 = eval_rhs(state, sample, cfg);
  const Stage k2 = eval_rhs(advance(state, k1, 0.5 * dt), sample, cfg);
  const Stage k3 = eval_rhs(advance(state, k2, 0.5 * dt), sample, cfg);
  const Stage k4 = eval_rhs(advance(state, k3, dt), sample, cfg);

  GdState next;
  next.theta_g_hat =
      state.theta_g_hat + (dt / 6.0) * (k1.d_theta_g + 2.0 * k2.d_theta_g +
                                        2.0 * k3.d_theta_g + k4.d_theta_g);
  next.omega = state.omega + (dt / 6.0) * (k1.d_omega + 2.0 * k2.d_omega +
                                           2.0 * k3.d_omega + k4.d_omega);
  next.theta_hat = state.theta_hat + (dt / 6.0) * (k1.d_theta + 2.0 * k2.d_theta +
                                                   2.0 * k3.d_theta + k4.d_theta);
  next.t = state.t + dt;
  if (!next.theta_g_hat.allFinite() || !next.omega.allFinite() ||
      !next.theta_hat.allFinite()) {
    throw IntegrationError(next.t, "gd_step produced a non-finite state");
  }
  return next;
}

}  // namespace obs2gd
