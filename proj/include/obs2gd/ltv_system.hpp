#pragma once

#include <functional>
#include <string>
#include <vector>

#include "obs2gd/numerics.hpp"

namespace obs2gd {

/// Single-output linear time-varying plant
///   xdot = A(t) x + b(t),  y = C(t)' x.
/// Immutable after construction; the evaluators must be finite on the
/// simulation horizon.
struct LtvSystem {
  int n = 0;
  std::function<Matrix(double)> A;
  std::function<Vector(double)> b;
  std::function<Vector(double)> C;
  std::string descriptor;
};

/// State-affine plant whose matrices depend on measured signals:
///   xdot = A(u, y, t) x + b(u, y, t),  y = C(u, t)' x.
struct StateAffineSystem {
  int n = 0;
  std::function<Matrix(double, double, double)> A;  // (u, y, t)
  std::function<Vector(double, double, double)> b;  // (u, y, t)
  std::function<Vector(double, double)> C;          // (u, t)
};

struct Trajectory {
  OdeGrid grid;
  std::vector<Vector> states;
  std::vector<double> outputs;
};

using Signal = std::function<double(double)>;

/// Substitutes known signals u(t), y(t) into a state-affine system, giving
/// the LTV closure A(t) := A(u(t), y(t), t), etc.
LtvSystem close_over_signals(const StateAffineSystem& sys, Signal u_signal,
                             Signal y_signal);

/// RK4 trajectory of the plant on the grid; outputs computed pointwise.
Trajectory simulate_plant(const LtvSystem& sys, const Vector& x0, const OdeGrid& grid);

/// State transition matrix Phi(t1, t0), integrating Phidot = A(t) Phi from
/// the identity. A trailing partial step covers t1 not on the dt lattice.
Matrix transition_matrix(const LtvSystem& sys, double t0, double t1, double dt);

/// Observability Grammian W(t0, t1) = int Phi' C C' Phi dtau, accumulated by
/// composite trapezoid on the same grid the transition matrix is integrated on.
Matrix observability_grammian(const LtvSystem& sys, double t0, double t1, double dt);

/// Empirical sup over (tau, t) grid pairs of ||Phi(t, tau)||. A diagnostic
/// estimate of the uniform-stability constant, not a certified bound.
double uniform_stability_bound(const LtvSystem& sys, double horizon, double dt);

// --- built-in scenario library -------------------------------------------

/// S1 "scalar-drift": n=1, a=0, b=cos t, C=1.
LtvSystem scenario_s1();
/// S2 "rotor": n=2, A=[[0,1],[-1,0]], b=0, C=(1,0). UCO.
LtvSystem scenario_s2();
/// S3 "finite-window rotor": as S2 but C(t)=(1,0) only for t in [0, 2*pi],
/// zero afterwards. Observable on [0, 2*pi] but not UCO.
LtvSystem scenario_s3();

/// Sampled system: rows (t, A row-major, b, c) with strictly increasing t.
struct SystemTable {
  int n = 0;
  std::vector<double> times;
  std::vector<Matrix> A_samples;
  std::vector<Vector> b_samples;
  std::vector<Vector> c_samples;
};

/// Wraps a table as an LtvSystem with linear interpolation between samples.
/// Evaluation outside [times.front(), times.back()] throws.
LtvSystem make_tabulated(SystemTable table, std::string descriptor = "S4-tabulated");

/// Loads a table from a delimited text file with header
///   t, A11..Ann, b1..bn, c1..cn
/// Throws std::runtime_error naming the offending line on malformed input.
SystemTable load_system_table(const std::string& path);

}  // namespace obs2gd
