#include "obs2gd/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace obs2gd {

std::pair<bool, int> check_observability(const LtvSystem& sys, double T, double dt,
                                         double rel_tol) {
  if (!(T > 0.0)) throw std::invalid_argument("check_observability: T must be positive");
  const Matrix w = observability_grammian(sys, 0.0, T, dt);
  const int rank = rank_with_tolerance(w, rel_tol);
  return {rank == sys.n, rank};
}

std::optional<std::pair<double, double>> check_uco(const LtvSystem& sys, double T,
                                                   double horizon, double dt) {
  if (horizon < T) throw std::invalid_argument("check_uco: horizon must be >= T");
  constexpr int kWindows = 16;
  const double span = horizon - T;
  const double h = span > 0.0 ? span / kWindows : 0.0;

  double delta = std::numeric_limits<double>::infinity();
  double lambda_max = 0.0;
  const int count = span > 0.0 ? kWindows + 1 : 1;
  for (int i = 0; i < count; ++i) {
    const double t0 = static_cast<double>(i) * h;
    const Matrix w = observability_grammian(sys, t0, t0 + T, dt);
    Eigen::SelfAdjointEigenSolver<Matrix> es(w, Eigen::EigenvaluesOnly);
    delta = std::min(delta, es.eigenvalues().minCoeff());
    lambda_max = std::max(lambda_max, es.eigenvalues().maxCoeff());
  }
  if (delta <= default_rank_tol(sys.n) * std::max(lambda_max, 1e-300)) {
    return std::nullopt;
  }
  return std::make_pair(T, delta);
}

ExcitationReport check_interval_excitation(const std::vector<RegressorSample>& samples,
                                           double rel_tol) {
  ExcitationReport report;
  if (samples.size() < 2) return report;
  const auto n = samples.front().psi.size();

  Matrix acc = Matrix::Zero(n, n);
  Matrix prev = samples.front().psi * samples.front().psi.transpose();
  double lambda_min_last = 0.0;
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const double h = samples[k].t - samples[k - 1].t;
    const Matrix cur = samples[k].psi * samples[k].psi.transpose();
    acc += 0.5 * h * (prev + cur);
    prev = cur;

    Eigen::SelfAdjointEigenSolver<Matrix> es(acc, Eigen::EigenvaluesOnly);
    lambda_min_last = es.eigenvalues().minCoeff();
    if (!report.t_d && acc.trace() > 0.0 &&
        lambda_min_last > rel_tol * acc.trace()) {
      report.t_d = samples[k].t;
      report.c_d = lambda_min_last;
    }
  }
  if (!report.t_d) report.c_d = std::max(0.0, lambda_min_last);
  return report;
}

namespace {

double smallest_sv(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

// Greedy column selection starting from a given first candidate.
std::vector<std::size_t> greedy_from(const std::vector<RegressorSample>& samples,
                                     const std::vector<std::size_t>& candidates,
                                     std::size_t first, Eigen::Index n) {
  std::vector<std::size_t> picked{first};
  Matrix cols(n, 1);
  cols.col(0) = samples[first].psi;
  while (static_cast<Eigen::Index>(picked.size()) < n) {
    double best = -1.0;
    std::size_t best_idx = candidates.front();
    Matrix trial(n, cols.cols() + 1);
    trial.leftCols(cols.cols()) = cols;
    for (std::size_t idx : candidates) {
      trial.col(cols.cols()) = samples[idx].psi;
      const double sv = smallest_sv(trial);
      if (sv > best) {
        best = sv;
        best_idx = idx;
      }
    }
    picked.push_back(best_idx);
    Matrix grown(n, cols.cols() + 1);
    grown.leftCols(cols.cols()) = cols;
    grown.col(cols.cols()) = samples[best_idx].psi;
    cols = std::move(grown);
  }
  return picked;
}

Matrix columns_at(const std::vector<RegressorSample>& samples,
                  const std::vector<std::size_t>& picked, Eigen::Index n) {
  Matrix m(n, static_cast<Eigen::Index>(picked.size()));
  for (std::size_t j = 0; j < picked.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = samples[picked[j]].psi;
  return m;
}

}  // namespace

std::optional<std::vector<double>> check_identifiability(
    const std::vector<RegressorSample>& samples, double rel_tol) {
  if (samples.empty()) return std::nullopt;
  const Eigen::Index n = samples.front().psi.size();
  if (static_cast<Eigen::Index>(samples.size()) < n) return std::nullopt;

  // Cap the candidate pool; the selection only needs existence, not optimality.
  constexpr std::size_t kMaxCandidates = 2000;
  const std::size_t stride = std::max<std::size_t>(1, samples.size() / kMaxCandidates);
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < samples.size(); i += stride) candidates.push_back(i);

  std::size_t best_first = candidates.front();
  double best_norm = -1.0;
  for (std::size_t idx : candidates) {
    const double norm = samples[idx].psi.norm();
    if (norm > best_norm) {
      best_norm = norm;
      best_first = idx;
    }
  }
  if (best_norm <= 0.0) return std::nullopt;

  auto accept = [&](const std::vector<std::size_t>& picked)
      -> std::optional<std::vector<double>> {
    const Matrix m = columns_at(samples, picked, n);
    if (rank_with_tolerance(m, rel_tol) != static_cast<int>(n)) return std::nullopt;
    std::vector<double> times;
    times.reserve(picked.size());
    for (std::size_t idx : picked) times.push_back(samples[idx].t);
    std::sort(times.begin(), times.end());
    return times;
  };

  if (auto times = accept(greedy_from(samples, candidates, best_first, n))) {
    return times;
  }

  // Randomized multi-restart fallback from different first columns.
  std::mt19937 rng(0x2d5eu);
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  for (int restart = 0; restart < 16; ++restart) {
    const std::size_t first = candidates[pick(rng)];
    if (samples[first].psi.norm() <= 0.0) continue;
    if (auto times = accept(greedy_from(samples, candidates, first, n))) {
      return times;
    }
  }
  return std::nullopt;
}

std::string EquivalenceReport::to_text() const {
  std::ostringstream out;
  out << "observable = " << (observable ? "true" : "false") << "\n"
      << "grammian_rank = " << grammian_rank << "\n"
      << "observability_margin = " << observability_margin << "\n"
      << "identifiable = " << (identifiable ? "true" : "false") << "\n"
      << "identifiability_margin = " << identifiability_margin << "\n"
      << "verdicts_agree = " << (verdicts_agree ? "true" : "false") << "\n";
  if (sample_times) {
    out << "sample_times =";
    for (double t : *sample_times) out << " " << t;
    out << "\n";
  }
  return out.str();
}

EquivalenceReport equivalence_report(const LtvSystem& sys, double T, double dt,
                                     double rel_tol) {
  if (!(T > 0.0)) throw std::invalid_argument("equivalence_report: T must be positive");
  EquivalenceReport report;

  const Matrix w = observability_grammian(sys, 0.0, T, dt);
  report.grammian_rank = rank_with_tolerance(w, rel_tol);
  report.observable = report.grammian_rank == sys.n;
  {
    Eigen::JacobiSVD<Matrix> svd(w);
    const auto& sv = svd.singularValues();
    report.observability_margin = sv(0) > 0.0 ? sv(sv.size() - 1) / sv(0) : 0.0;
  }

  // GPEBO pass: psi(t) = phi_a(t)' C(t) along the same grid.
  std::vector<RegressorSample> samples;
  const MatrixField field = [&sys](double t, const Matrix& phi) -> Matrix {
    return sys.A(t) * phi;
  };
  Matrix phi = Matrix::Identity(sys.n, sys.n);
  double t = 0.0;
  const auto steps = static_cast<std::size_t>(std::floor(T / dt + 1e-12));
  samples.push_back({t, 0.0, phi.transpose() * sys.C(t)});
  for (std::size_t k = 0; k < steps; ++k) {
    phi = rk4_step(field, t, phi, dt);
    t = static_cast<double>(k + 1) * dt;
    samples.push_back({t, 0.0, phi.transpose() * sys.C(t)});
  }

  report.sample_times = check_identifiability(samples, rel_tol);
  report.identifiable = report.sample_times.has_value();
  if (report.sample_times) {
    Matrix cols(sys.n, sys.n);
    int j = 0;
    for (double ts : *report.sample_times) {
      const auto idx = static_cast<std::size_t>(std::llround(ts / dt));
      cols.col(j++) = samples[std::min(idx, samples.size() - 1)].psi;
    }
    Eigen::JacobiSVD<Matrix> svd(cols);
    const auto& sv = svd.singularValues();
    report.identifiability_margin = sv(0) > 0.0 ? sv(sv.size() - 1) / sv(0) : 0.0;
  }
  report.verdicts_agree = report.observable == report.identifiable;
  return report;
}

ConvergenceMetrics convergence_metrics(
    const std::vector<std::pair<double, double>>& error_trace) {
  ConvergenceMetrics m;
  m.rate = -std::numeric_limits<double>::infinity();
  if (error_trace.empty()) return m;
  m.final_error = error_trace.back().second;

  const double e0 = error_trace.front().second;
  for (const auto& [t, e] : error_trace) {
    if (e <= 0.5 * e0) {
      m.t_half = t;
      break;
    }
  }

  const double t0 = error_trace.front().first;
  const double t1 = error_trace.back().first;
  m.rate = fit_log_slope(error_trace, t0 + 0.75 * (t1 - t0), t1, 0.0);
  return m;
}

double fit_log_slope(const std::vector<std::pair<double, double>>& error_trace,
                     double t_start, double t_end, double floor_abs) {
  double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
  std::size_t count = 0;
  for (const auto& [t, e] : error_trace) {
    if (t < t_start || t > t_end || !(e > floor_abs)) continue;
    const double l = std::log(e);
    st += t;
    sl += l;
    stt += t * t;
    stl += t * l;
    ++count;
  }
  if (count < 2) return -std::numeric_limits<double>::infinity();
  const double denom = count * stt - st * st;
  if (denom <= 0.0) return -std::numeric_limits<double>::infinity();
  return (count * stl - st * sl) / denom;
}

LtvSystem random_tabulated_system(unsigned seed, int n, double t_max) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> freq(0.3, 2.0);

  Matrix s0 = Matrix::Zero(n, n);
  Matrix s1 = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      s0(i, j) = unit(rng);
      s0(j, i) = -s0(i, j);
      s1(i, j) = unit(rng);
      s1(j, i) = -s1(i, j);
    }
  }
  Vector b0(n), b1(n), c0(n), c1(n), c2(n);
  for (int i = 0; i < n; ++i) {
    b0(i) = unit(rng);
    b1(i) = unit(rng);
    c0(i) = std::copysign(0.3 + 0.7 * std::abs(unit(rng)), unit(rng));
    c1(i) = unit(rng);
    c2(i) = unit(rng);
  }
  const double wa = freq(rng), wb = freq(rng), wc = freq(rng);

  // Skew part keeps Phi bounded; the small symmetric part is contracting.
  const Matrix damp = -0.05 * Matrix::Identity(n, n);

  SystemTable table;
  table.n = n;
  const double dt_table = 0.01;
  const auto rows = static_cast<std::size_t>(std::ceil(t_max / dt_table)) + 2;
  for (std::size_t k = 0; k < rows; ++k) {
    const double t = static_cast<double>(k) * dt_table;
    table.times.push_back(t);
    table.A_samples.push_back(s0 + std::sin(wa * t) * s1 + damp);
    table.b_samples.push_back(b0 + std::sin(wb * t) * b1);
    table.c_samples.push_back(c0 + std::cos(wc * t) * c1 + std::sin(wc * t) * c2);
  }
  return make_tabulated(std::move(table), "random-tabulated seed " + std::to_string(seed));
}

}  // namespace obs2gd
