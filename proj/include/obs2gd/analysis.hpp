#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "obs2gd/gpebo.hpp"
#include "obs2gd/ltv_system.hpp"

namespace obs2gd {

/// Excitation diagnostics for a regressor trace.
struct ExcitationReport {
  std::optional<double> t_d;  // first time the accumulated psi psi' passes the cutoff
  double c_d = 0.0;           // smallest eigenvalue of int_0^{t_d} psi psi'
  std::optional<std::pair<double, double>> uco_margin;  // (T, delta)
  int grammian_rank = 0;
  std::optional<std::vector<double>> identifiability_times;
};

/// (rank(W(0,T)) == n, rank).
std::pair<bool, int> check_observability(const LtvSystem& sys, double T, double dt,
                                         double rel_tol);

/// Minimum over a grid of window starts of the smallest eigenvalue of
/// W(t0, t0+T). Returns (T, delta) or absent when the minimum is at rank
/// tolerance.
std::optional<std::pair<double, double>> check_uco(const LtvSystem& sys, double T,
                                                   double horizon, double dt);

/// Running trapezoid accumulation of psi psi' over a uniform sample grid.
ExcitationReport check_interval_excitation(const std::vector<RegressorSample>& samples,
                                           double rel_tol);

/// Greedy search for n sample times whose psi columns are numerically full
/// rank, with a seeded randomized multi-restart fallback. Absent when no
/// full-rank selection is found.
std::optional<std::vector<double>> check_identifiability(
    const std::vector<RegressorSample>& samples, double rel_tol);

/// Numerical side-by-side of the two equivalent conditions: Grammian rank
/// on [0, T] versus identifiability of the GPEBO regressor on [0, T].
struct EquivalenceReport {
  bool observable = false;
  int grammian_rank = 0;
  double observability_margin = 0.0;  // smallest/largest singular value of W
  bool identifiable = false;
  double identifiability_margin = 0.0;  // smallest/largest sv of selected columns
  std::optional<std::vector<double>> sample_times;
  bool verdicts_agree = false;

  /// key = value lines for report files.
  std::string to_text() const;
};

EquivalenceReport equivalence_report(const LtvSystem& sys, double T, double dt,
                                     double rel_tol = 1e-8);

struct ConvergenceMetrics {
  double rate = 0.0;         // least-squares slope of log-error over the tail
  double final_error = 0.0;
  std::optional<double> t_half;  // first time the error halves
};

/// Fits the tail (final 25% of the horizon) of a positive error trace.
/// Degenerate traces report rate = -infinity.
ConvergenceMetrics convergence_metrics(
    const std::vector<std::pair<double, double>>& error_trace);

/// Same exponential-rate fit restricted to samples with t in
/// [t_start, t_end] and error above floor_abs. Used for tails whose error
/// reaches the floating-point floor before the horizon ends.
double fit_log_slope(const std::vector<std::pair<double, double>>& error_trace,
                     double t_start, double t_end, double floor_abs);

/// Seeded random bounded test system, delivered through the tabulation and
/// interpolation path. A is skew-symmetric-dominant so the transition matrix
/// stays uniformly bounded.
LtvSystem random_tabulated_system(unsigned seed, int n, double t_max);

}  // namespace obs2gd
