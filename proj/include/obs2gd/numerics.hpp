#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace obs2gd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Thrown when an integrated signal leaves the representable range.
/// Carries the time at which the blow-up was detected.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(double t, const std::string& what)
      : std::runtime_error(what + " at t = " + std::to_string(t)), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

/// Uniform time grid shared by the plant and all observer dynamics.
/// (t_final - t0)/dt must be an integer to one part in 1e9.
struct OdeGrid {
  double t0;
  double t_final;
  double dt;

  OdeGrid(double t0_, double t_final_, double dt_);

  std::size_t num_steps() const { return steps_; }
  std::size_t num_points() const { return steps_ + 1; }
  double time_at(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }

 private:
  std::size_t steps_;
};

using VectorField = std::function<Vector(double, const Vector&)>;
using MatrixField = std::function<Matrix(double, const Matrix&)>;

/// One classical 4th-order Runge-Kutta step. Deterministic; throws
/// IntegrationError if the result is non-finite.
Vector rk4_step(const VectorField& f, double t, const Vector& x, double dt);

/// Same scheme for matrix-valued ODEs (transition/fundamental matrices).
Matrix rk4_step(const MatrixField& f, double t, const Matrix& m, double dt);

/// Determinant and adjugate via the Faddeev-LeVerrier recursion.
/// Valid for singular input: adj(M) * M = det(M) * I with no division by det.
std::pair<double, Matrix> det_and_adjugate(const Matrix& m);

/// Number of singular values exceeding rel_tol * sigma_max. Zero matrix -> 0.
int rank_with_tolerance(const Matrix& m, double rel_tol);

/// Default rank cutoff, relative to the largest singular value.
inline double default_rank_tol(int n) { return static_cast<double>(n) * 1e-10; }

/// Largest singular value.
double spectral_norm(const Matrix& m);

}  // namespace obs2gd
