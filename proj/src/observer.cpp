#include "obs2gd/observer.hpp"

#include <Eigen/Eigenvalues>

namespace obs2gd {

Observer2GD observer_init(const LtvSystem& sys, const GdConfig& cfg,
                          const Vector& xi0, double t0) {
  Observer2GD obs;
  obs.n = sys.n;
  obs.cfg = cfg;
  obs.gpebo = gpebo_init(sys.n, xi0, t0);
  obs.gd = gd_init(cfg, sys.n, t0);
  return obs;
}

int observer_state_dimension(const Observer2GD& obs) {
  // xi (n) + phi_a (n^2) + theta_g_hat (n) + omega (n^2) + theta_hat (n)
  return (3 + 2 * obs.n) * obs.n;
}

Observer2GD observer_step(const Observer2GD& obs, const LtvSystem& sys, double y,
                          double dt, double disturbance,
                          std::vector<std::string>* warnings) {
  RegressorSample sample = make_regressor(obs.gpebo, sys, y);
  sample.y_cal += disturbance;

  Observer2GD next = obs;
  next.gpebo = gpebo_step(obs.gpebo, sys, dt);
  next.gd = gd_step(obs.gd, sample, obs.cfg, dt, warnings);
  return next;
}

Vector observer_output(const Observer2GD& obs) {
  return reconstruct_state(obs.gpebo, obs.gd.theta_hat);
}

KalmanBucyState kalman_bucy_init(int n, const Vector& x_hat0, double p0_scale,
                                 double q, double r, double t0) {
  if (!(r > 0.0)) throw std::invalid_argument("kalman_bucy_init: r must be positive");
  if (!(p0_scale > 0.0)) throw std::invalid_argument("kalman_bucy_init: p0_scale must be positive");
  if (x_hat0.size() != n) throw std::invalid_argument("kalman_bucy_init: x_hat0 dimension mismatch");
  KalmanBucyState kb;
  kb.x_hat = x_hat0;
  kb.p = p0_scale * Matrix::Identity(n, n);
  kb.q = q;
  kb.r = r;
  kb.t = t0;
  return kb;
}

namespace {

struct KbStage {
  Vector dx;
  Matrix dp;
};

KbStage kb_rhs(const LtvSystem& sys, double t, const Vector& x_hat, const Matrix& p,
               double y, double q, double r) {
  const Matrix a = sys.A(t);
  const Vector c = sys.C(t);
  const Vector gain = p * c / r;
  KbStage s;
  s.dx = a * x_hat + sys.b(t) + gain * (y - c.dot(x_hat));
  s.dp = a * p + p * a.transpose() +
         q * Matrix::Identity(p.rows(), p.cols()) -
         gain * (c.transpose() * p);
  return s;
}

}  // namespace

KalmanBucyState kalman_bucy_step(const KalmanBucyState& kb, const LtvSystem& sys,
                                 double y, double dt) {
  const double t = kb.t;
  const KbStage k1 = kb_rhs(sys, t, kb.x_hat, kb.p, y, kb.q, kb.r);
  const KbStage k2 = kb_rhs(sys, t + 0.5 * dt, kb.x_hat + 0.5 * dt * k1.dx,
                            kb.p + 0.5 * dt * k1.dp, y, kb.q, kb.r);
  const KbStage k3 = kb_rhs(sys, t + 0.5 * dt, kb.x_hat + 0.5 * dt * k2.dx,
                            kb.p + 0.5 * dt * k2.dp, y, kb.q, kb.r);
  const KbStage k4 = kb_rhs(sys, t + dt, kb.x_hat + dt * k3.dx,
                            kb.p + dt * k3.dp, y, kb.q, kb.r);

  KalmanBucyState next = kb;
  next.x_hat = kb.x_hat + (dt / 6.0) * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
  Matrix p = kb.p + (dt / 6.0) * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp);
  next.p = 0.5 * (p + p.transpose());
  next.t = kb.t + dt;
  if (!next.x_hat.allFinite() || !next.p.allFinite()) {
    throw IntegrationError(next.t, "kalman_bucy_step produced a non-finite state");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(next.p, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0) next.pd_lost = true;
  return next;
}

}  // namespace obs2gd
