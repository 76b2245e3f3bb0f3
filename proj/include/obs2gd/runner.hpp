#pragma once

#include <optional>
#include <string>
#include <vector>

#include "obs2gd/analysis.hpp"
#include "obs2gd/config.hpp"
#include "obs2gd/ltv_system.hpp"

namespace obs2gd {

/// One grid point of a completed run.
struct TraceRow {
  double t = 0.0;
  Vector x;
  Vector x_hat;
  double state_err = 0.0;
  Vector theta_hat;
  Vector theta_g_hat;
  double param_err = 0.0;
  double delta = 0.0;
  double y_cal = 0.0;
  Vector psi;
  std::optional<double> kb_err;
};

struct RunReport {
  double final_state_error = 0.0;
  double final_param_error = 0.0;
  double fitted_rate = 0.0;
  double max_state_norm = 0.0;
  std::optional<double> final_kb_error;
  ExcitationReport excitation;
  EquivalenceReport equivalence;
  std::vector<std::string> warnings;

  std::string to_text() const;
  std::string to_json() const;
};

struct RunResult {
  ScenarioConfig cfg;
  int n = 0;
  Vector theta;  // ground truth x0 - xi0, for diagnostics
  std::vector<TraceRow> rows;
  bool baseline_enabled = false;
  RunReport report;
};

/// Builds the scenario system from the config (S4 reads the table file).
LtvSystem build_system(const ScenarioConfig& cfg);

/// Simulates the plant and 2G+D observer (plus the optional Kalman-Bucy
/// baseline) on the shared grid, with the configured disturbance added to
/// the scalar regression output before the estimator sees it.
RunResult run_scenario(const ScenarioConfig& cfg);

/// CSV schema: t, x_1..x_n, xhat_1..xhat_n, state_err, theta_hat_1..n,
/// theta_g_hat_1..n, param_err, Delta, Ycal, psi_1..n, plus kb_err when the
/// baseline is enabled. 17 significant digits, one row per grid point.
std::string format_trace_csv(const RunResult& result);

/// Writes trace.csv and report.json or report.txt into output_dir.
void write_outputs(const RunResult& result, const std::string& output_dir,
                   const std::string& report_format);

}  // namespace obs2gd
