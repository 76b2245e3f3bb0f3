#include "obs2gd/numerics.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace obs2gd {

OdeGrid::OdeGrid(double t0_, double t_final_, double dt_)
    : t0(t0_), t_final(t_final_), dt(dt_) {
  if (!(dt > 0.0)) throw std::invalid_argument("OdeGrid: dt must be positive");
  if (!(t_final > t0)) throw std::invalid_argument("OdeGrid: t_final must exceed t0");
  const double ratio = (t_final - t0) / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("OdeGrid: (t_final - t0)/dt is not an integer");
  }
  steps_ = static_cast<std::size_t>(rounded);
}

namespace {

template <typename State, typename Field>
State rk4_generic(const Field& f, double t, const State& x, double dt) {
  const State k1 = f(t, x);
  const State k2 = f(t + 0.5 * dt, State(x + 0.5 * dt * k1));
  const State k3 = f(t + 0.5 * dt, State(x + 0.5 * dt * k2));
  const State k4 = f(t + dt, State(x + dt * k3));
  State out = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!out.allFinite()) {
    throw IntegrationError(t + dt, "rk4_step produced a non-finite state");
  }
  return out;
}

}  // namespace

Vector rk4_step(const VectorField& f, double t, const Vector& x, double dt) {
  return rk4_generic(f, t, x, dt);
}

Matrix rk4_step(const MatrixField& f, double t, const Matrix& m, double dt) {
  return rk4_generic(f, t, m, dt);
}

std::pair<double, Matrix> det_and_adjugate(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("det_and_adjugate: matrix must be square");
  }
  const Eigen::Index n = m.rows();
  if (n == 0) return {1.0, Matrix::Zero(0, 0)};

  // Faddeev-LeVerrier: M_1 = I, c_k = -tr(A M_k)/k, M_{k+1} = A M_k + c_k I.
  // Then det = (-1)^n c_n and adj = (-1)^{n-1} M_n; no inverse is formed, so
  // singular input is fine.
  Matrix mk = Matrix::Identity(n, n);
  double ck = 0.0;
  for (Eigen::Index k = 1; k <= n; ++k) {
    const Matrix am = m * mk;
    ck = -am.trace() / static_cast<double>(k);
    if (k < n) mk = am + ck * Matrix::Identity(n, n);
  }
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return {sign * ck, -sign * mk};
}

int rank_with_tolerance(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sigma = svd.singularValues();
  const double smax = sigma.size() > 0 ? sigma(0) : 0.0;
  if (smax <= 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > rel_tol * smax) ++rank;
  }
  return rank;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace obs2gd
