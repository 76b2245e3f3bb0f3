#include "obs2gd/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "obs2gd/observer.hpp"

namespace obs2gd {

LtvSystem build_system(const ScenarioConfig& cfg) {
  if (cfg.scenario == "S1") return scenario_s1();
  if (cfg.scenario == "S2") return scenario_s2();
  if (cfg.scenario == "S3") return scenario_s3();
  if (cfg.scenario == "S4") {
    try {
      return make_tabulated(load_system_table(cfg.table_path));
    } catch (const std::runtime_error& e) {
      throw ConfigError(std::string("table: ") + e.what());
    }
  }
  throw ConfigError("scenario: unknown id '" + cfg.scenario + "'");
}

namespace {

Vector resolve(const char* name, const Vector& v, int n) {
  if (v.size() == 0) return Vector::Zero(n);
  if (v.size() != n) {
    throw ConfigError(std::string(name) + ": expected dimension " + std::to_string(n));
  }
  return v;
}

std::vector<double> make_disturbance(const std::optional<DisturbanceSpec>& spec,
                                     const OdeGrid& grid) {
  std::vector<double> d(grid.num_points(), 0.0);
  if (!spec || spec->amplitude == 0.0) return d;
  if (spec->kind == DisturbanceSpec::Kind::kGaussian) {
    std::mt19937 rng(*spec->seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (auto& v : d) v = spec->amplitude * noise(rng);
  } else {
    for (std::size_t k = 0; k < d.size(); ++k) {
      d[k] = spec->amplitude * std::sin(spec->frequency * grid.time_at(k));
    }
  }
  return d;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
  const LtvSystem sys = build_system(cfg);
  const int n = sys.n;

  RunResult result;
  result.cfg = cfg;
  result.n = n;
  result.baseline_enabled = cfg.baseline.has_value();

  const Vector x0 = resolve("x0", cfg.x0, n);
  const Vector xi0 = resolve("xi0", cfg.xi0, n);
  GdConfig gd_cfg;
  gd_cfg.gamma_g = cfg.gamma_g;
  gd_cfg.gamma = cfg.gamma;
  gd_cfg.theta_g0 = resolve("theta_g0", cfg.theta_g0, n);
  gd_cfg.theta0 = resolve("theta0", cfg.theta0, n);

  std::optional<OdeGrid> grid;
  try {
    grid.emplace(0.0, cfg.t_final, cfg.dt);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }

  const Trajectory traj = simulate_plant(sys, x0, *grid);
  result.theta = true_theta(x0, xi0).theta;

  Observer2GD obs = observer_init(sys, gd_cfg, xi0, 0.0);
  std::optional<KalmanBucyState> kb;
  if (cfg.baseline) {
    kb = kalman_bucy_init(n, Vector(xi0 + gd_cfg.theta0), cfg.baseline->p0_scale,
                          cfg.baseline->q, cfg.baseline->r, 0.0);
  }

  const std::vector<double> dist = make_disturbance(cfg.disturbance, *grid);
  std::vector<std::string> warnings;
  std::vector<RegressorSample> samples;
  samples.reserve(grid->num_points());

  double sup_abs_delta = 0.0;
  result.rows.reserve(grid->num_points());
  for (std::size_t k = 0; k < grid->num_points(); ++k) {
    RegressorSample sample = make_regressor(obs.gpebo, sys, traj.outputs[k]);
    sample.y_cal += dist[k];
    samples.push_back(sample);

    TraceRow row;
    row.t = grid->time_at(k);
    row.x = traj.states[k];
    row.x_hat = observer_output(obs);
    row.state_err = (row.x_hat - row.x).norm();
    row.theta_hat = obs.gd.theta_hat;
    row.theta_g_hat = obs.gd.theta_g_hat;
    row.param_err = (row.theta_hat - result.theta).norm();
    const MixedSample mixed = mix(obs.gd, gd_cfg);
    row.delta = mixed.delta;
    row.y_cal = sample.y_cal;
    row.psi = sample.psi;
    if (kb) row.kb_err = (kb->x_hat - row.x).norm();
    sup_abs_delta = std::max(sup_abs_delta, std::abs(row.delta));
    result.rows.push_back(std::move(row));

    if (k == grid->num_steps()) break;
    obs.gd = gd_step(obs.gd, sample, gd_cfg, grid->dt, &warnings);
    obs.gpebo = gpebo_step(obs.gpebo, sys, grid->dt);
    if (kb) *kb = kalman_bucy_step(*kb, sys, traj.outputs[k], grid->dt);
  }

  RunReport& report = result.report;
  report.final_state_error = result.rows.back().state_err;
  report.final_param_error = result.rows.back().param_err;
  if (kb) {
    report.final_kb_error = result.rows.back().kb_err;
    if (kb->pd_lost) warnings.push_back("baseline: P lost positive-definiteness during the run");
  }

  for (const auto& x : traj.states) {
    report.max_state_norm = std::max(report.max_state_norm, x.norm());
  }
  if (report.max_state_norm > 1e6) {
    warnings.push_back("plant trajectory norm exceeds 1e6; bounded-state assumption violated");
  }
  if (sup_abs_delta < 1e-6) {
    warnings.push_back("sup |Delta| < 1e-6 over the horizon; excitation practically absent");
  }

  std::vector<std::pair<double, double>> err_trace;
  err_trace.reserve(result.rows.size());
  for (const auto& row : result.rows) err_trace.emplace_back(row.t, row.param_err);
  report.fitted_rate = convergence_metrics(err_trace).rate;

  report.excitation = check_interval_excitation(samples, 1e-8);
  report.equivalence = equivalence_report(sys, cfg.t_final, cfg.dt, 1e-8);
  report.warnings = std::move(warnings);
  return result;
}

namespace {

void append_num(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

std::string format_trace_csv(const RunResult& result) {
  const int n = result.n;
  std::string out;
  out += "t";
  auto vec_headers = [&out, n](const std::string& stem) {
    for (int i = 1; i <= n; ++i) out += "," + stem + "_" + std::to_string(i);
  };
  vec_headers("x");
  vec_headers("xhat");
  out += ",state_err";
  vec_headers("theta_hat");
  vec_headers("theta_g_hat");
  out += ",param_err,Delta,Ycal";
  vec_headers("psi");
  if (result.baseline_enabled) out += ",kb_err";
  out += "\n";

  for (const auto& row : result.rows) {
    append_num(out, row.t);
    auto vec = [&out](const Vector& v) {
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        out += ',';
        append_num(out, v(i));
      }
    };
    vec(row.x);
    vec(row.x_hat);
    out += ',';
    append_num(out, row.state_err);
    vec(row.theta_hat);
    vec(row.theta_g_hat);
    out += ',';
    append_num(out, row.param_err);
    out += ',';
    append_num(out, row.delta);
    out += ',';
    append_num(out, row.y_cal);
    vec(row.psi);
    if (result.baseline_enabled) {
      out += ',';
      append_num(out, row.kb_err.value_or(0.0));
    }
    out += '\n';
  }
  return out;
}

std::string RunReport::to_text() const {
  std::ostringstream out;
  out.precision(17);
  out << "final_state_error = " << final_state_error << "\n"
      << "final_param_error = " << final_param_error << "\n"
      << "fitted_rate = " << fitted_rate << "\n"
      << "max_state_norm = " << max_state_norm << "\n";
  if (final_kb_error) out << "final_kb_error = " << *final_kb_error << "\n";
  out << "excitation.c_d = " << excitation.c_d << "\n";
  if (excitation.t_d) out << "excitation.t_d = " << *excitation.t_d << "\n";
  out << equivalence.to_text();
  for (const auto& w : warnings) out << "warning = " << w << "\n";
  return out.str();
}

std::string RunReport::to_json() const {
  nlohmann::ordered_json j;
  j["final_state_error"] = final_state_error;
  j["final_param_error"] = final_param_error;
  j["fitted_rate"] = std::isfinite(fitted_rate) ? fitted_rate : -1e308;
  j["max_state_norm"] = max_state_norm;
  if (final_kb_error) j["final_kb_error"] = *final_kb_error;
  nlohmann::ordered_json exc;
  exc["c_d"] = excitation.c_d;
  if (excitation.t_d) exc["t_d"] = *excitation.t_d;
  exc["grammian_rank"] = equivalence.grammian_rank;
  j["excitation"] = exc;
  nlohmann::ordered_json eq;
  eq["observable"] = equivalence.observable;
  eq["identifiable"] = equivalence.identifiable;
  eq["verdicts_agree"] = equivalence.verdicts_agree;
  eq["observability_margin"] = equivalence.observability_margin;
  eq["identifiability_margin"] = equivalence.identifiability_margin;
  if (equivalence.sample_times) eq["sample_times"] = *equivalence.sample_times;
  j["equivalence"] = eq;
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

void write_outputs(const RunResult& result, const std::string& output_dir,
                   const std::string& report_format) {
  namespace fs = std::filesystem;
  fs::create_directories(output_dir);
  {
    std::ofstream trace(fs::path(output_dir) / "trace.csv", std::ios::binary);
    if (!trace) throw std::runtime_error("cannot write trace.csv in " + output_dir);
    trace << format_trace_csv(result);
  }
  const bool json = report_format == "json";
  const auto report_path = fs::path(output_dir) / (json ? "report.json" : "report.txt");
  std::ofstream report(report_path, std::ios::binary);
  if (!report) throw std::runtime_error("cannot write report in " + output_dir);
  report << (json ? result.report.to_json() : result.report.to_text());
}

}  // namespace obs2gd
