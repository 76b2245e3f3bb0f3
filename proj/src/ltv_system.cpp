#include "obs2gd/ltv_system.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>

namespace obs2gd {

LtvSystem close_over_signals(const StateAffineSystem& sys, Signal u_signal,
                             Signal y_signal) {
  LtvSystem out;
  out.n = sys.n;
  out.descriptor = "closed state-affine system";
  auto u = std::move(u_signal);
  auto y = std::move(y_signal);
  out.A = [A = sys.A, u, y](double t) { return A(u(t), y(t), t); };
  out.b = [b = sys.b, u, y](double t) { return b(u(t), y(t), t); };
  out.C = [C = sys.C, u](double t) { return C(u(t), t); };
  return out;
}

Trajectory simulate_plant(const LtvSystem& sys, const Vector& x0, const OdeGrid& grid) {
  if (x0.size() != sys.n) {
    throw std::invalid_argument("simulate_plant: x0 dimension mismatch");
  }
  Trajectory traj{grid, {}, {}};
  traj.states.reserve(grid.num_points());
  traj.outputs.reserve(grid.num_points());

  const VectorField field = [&sys](double t, const Vector& x) -> Vector {
    return sys.A(t) * x + sys.b(t);
  };

  Vector x = x0;
  traj.states.push_back(x);
  traj.outputs.push_back(sys.C(grid.t0).dot(x));
  for (std::size_t k = 0; k < grid.num_steps(); ++k) {
    x = rk4_step(field, grid.time_at(k), x, grid.dt);
    traj.states.push_back(x);
    traj.outputs.push_back(sys.C(grid.time_at(k + 1)).dot(x));
  }
  return traj;
}

namespace {

// Walks [t0, t1] in full dt steps plus one trailing partial step, invoking
// visit(t, h) before each step of width h and once more with h = 0 at t1.
template <typename Visit>
void walk_interval(double t0, double t1, double dt, const Visit& visit) {
  double t = t0;
  const auto full_steps =
      static_cast<std::size_t>(std::floor((t1 - t0) / dt + 1e-12));
  for (std::size_t k = 0; k < full_steps; ++k) {
    visit(t, dt);
    t = t0 + static_cast<double>(k + 1) * dt;
  }
  const double rem = t1 - t;
  if (rem > 1e-12 * std::max(1.0, std::abs(t1))) visit(t, rem);
  visit(t1, 0.0);
}

}  // namespace

Matrix transition_matrix(const LtvSystem& sys, double t0, double t1, double dt) {
  if (t1 < t0) throw std::invalid_argument("transition_matrix: t1 < t0");
  const MatrixField field = [&sys](double t, const Matrix& phi) -> Matrix {
    return sys.A(t) * phi;
  };
  Matrix phi = Matrix::Identity(sys.n, sys.n);
  walk_interval(t0, t1, dt, [&](double t, double h) {
    if (h > 0.0) phi = rk4_step(field, t, phi, h);
  });
  return phi;
}

Matrix observability_grammian(const LtvSystem& sys, double t0, double t1, double dt) {
  if (!(t1 > t0)) throw std::invalid_argument("observability_grammian: t1 <= t0");
  const MatrixField field = [&sys](double t, const Matrix& phi) -> Matrix {
    return sys.A(t) * phi;
  };
  const auto integrand = [&sys](double t, const Matrix& phi) -> Matrix {
    const Vector g = phi.transpose() * sys.C(t);
    return g * g.transpose();
  };

  Matrix phi = Matrix::Identity(sys.n, sys.n);
  Matrix acc = Matrix::Zero(sys.n, sys.n);
  Matrix prev = integrand(t0, phi);
  walk_interval(t0, t1, dt, [&](double t, double h) {
    if (h <= 0.0) return;
    phi = rk4_step(field, t, phi, h);
    const Matrix cur = integrand(t + h, phi);
    acc += 0.5 * h * (prev + cur);
    prev = cur;
  });
  return 0.5 * (acc + acc.transpose());
}

double uniform_stability_bound(const LtvSystem& sys, double horizon, double dt) {
  if (!(horizon > 0.0)) throw std::invalid_argument("uniform_stability_bound: horizon <= 0");
  // Checkpoints of Phi(t, 0) along one fine integration pass; then
  // Phi(t, tau) = Phi(t, 0) * Phi(tau, 0)^{-1} on all checkpoint pairs.
  constexpr int kCheckpoints = 41;
  const double coarse = horizon / (kCheckpoints - 1);

  const MatrixField field = [&sys](double t, const Matrix& phi) -> Matrix {
    return sys.A(t) * phi;
  };

  std::vector<Matrix> phis;
  phis.reserve(kCheckpoints);
  Matrix phi = Matrix::Identity(sys.n, sys.n);
  phis.push_back(phi);
  for (int j = 1; j < kCheckpoints; ++j) {
    const double a = coarse * (j - 1);
    const double b = coarse * j;
    walk_interval(a, b, dt, [&](double t, double h) {
      if (h > 0.0) phi = rk4_step(field, t, phi, h);
    });
    phis.push_back(phi);
  }

  double bound = 0.0;
  for (int i = 0; i < kCheckpoints; ++i) {
    const Matrix inv_tau = phis[i].inverse();
    for (int j = i; j < kCheckpoints; ++j) {
      bound = std::max(bound, spectral_norm(phis[j] * inv_tau));
    }
  }
  return bound;
}

// --- scenarios -------------------------------------------------------------

LtvSystem scenario_s1() {
  LtvSystem sys;
  sys.n = 1;
  sys.descriptor = "S1 scalar-drift";
  sys.A = [](double) { return Matrix::Zero(1, 1); };
  sys.b = [](double t) { return Vector::Constant(1, std::cos(t)); };
  sys.C = [](double) { return Vector::Ones(1); };
  return sys;
}

namespace {
Matrix rotor_a() {
  Matrix a(2, 2);
  a << 0.0, 1.0, -1.0, 0.0;
  return a;
}
}  // namespace

LtvSystem scenario_s2() {
  LtvSystem sys;
  sys.n = 2;
  sys.descriptor = "S2 rotor";
  sys.A = [](double) { return rotor_a(); };
  sys.b = [](double) { return Vector::Zero(2); };
  sys.C = [](double) { return Vector{{1.0, 0.0}}; };
  return sys;
}

LtvSystem scenario_s3() {
  LtvSystem sys = scenario_s2();
  sys.descriptor = "S3 finite-window rotor";
  sys.C = [](double t) {
    return t <= 2.0 * std::numbers::pi ? Vector{{1.0, 0.0}} : Vector::Zero(2).eval();
  };
  return sys;
}

// --- tabulated systems -----------------------------------------------------

namespace {

struct TableInterp {
  std::shared_ptr<const SystemTable> table;

  // Linear interpolation weights for time t; throws outside the table.
  std::pair<std::size_t, double> locate(double t) const {
    const auto& ts = table->times;
    if (t < ts.front() - 1e-12 || t > ts.back() + 1e-12) {
      throw std::out_of_range("tabulated system evaluated at t = " +
                              std::to_string(t) + ", outside the table range [" +
                              std::to_string(ts.front()) + ", " +
                              std::to_string(ts.back()) + "]");
    }
    const double tc = std::clamp(t, ts.front(), ts.back());
    auto it = std::upper_bound(ts.begin(), ts.end(), tc);
    std::size_t hi = std::min<std::size_t>(ts.size() - 1,
                                           static_cast<std::size_t>(it - ts.begin()));
    if (hi == 0) hi = 1;
    const std::size_t lo = hi - 1;
    const double w = (tc - ts[lo]) / (ts[hi] - ts[lo]);
    return {lo, w};
  }
};

}  // namespace

LtvSystem make_tabulated(SystemTable table, std::string descriptor) {
  if (table.times.size() < 2) {
    throw std::invalid_argument("make_tabulated: need at least two samples");
  }
  for (std::size_t i = 1; i < table.times.size(); ++i) {
    if (!(table.times[i] > table.times[i - 1])) {
      throw std::invalid_argument("make_tabulated: t column must be strictly increasing");
    }
  }
  TableInterp interp{std::make_shared<const SystemTable>(std::move(table))};

  LtvSystem sys;
  sys.n = interp.table->n;
  sys.descriptor = std::move(descriptor);
  sys.A = [interp](double t) -> Matrix {
    const auto [lo, w] = interp.locate(t);
    return (1.0 - w) * interp.table->A_samples[lo] + w * interp.table->A_samples[lo + 1];
  };
  sys.b = [interp](double t) -> Vector {
    const auto [lo, w] = interp.locate(t);
    return (1.0 - w) * interp.table->b_samples[lo] + w * interp.table->b_samples[lo + 1];
  };
  sys.C = [interp](double t) -> Vector {
    const auto [lo, w] = interp.locate(t);
    return (1.0 - w) * interp.table->c_samples[lo] + w * interp.table->c_samples[lo + 1];
  };
  return sys;
}

SystemTable load_system_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open table file: " + path);

  auto split = [](const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      const auto first = field.find_first_not_of(" \t\r");
      const auto last = field.find_last_not_of(" \t\r");
      fields.push_back(first == std::string::npos
                           ? std::string{}
                           : field.substr(first, last - first + 1));
    }
    return fields;
  };

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty table file");
  const auto header = split(line);
  if (header.empty() || header[0] != "t") {
    throw std::runtime_error(path + ": first header column must be 't'");
  }
  // 1 + n^2 + n + n columns determine n.
  int n = -1;
  for (int cand = 1; cand <= 16; ++cand) {
    if (1 + cand * cand + 2 * cand == static_cast<int>(header.size())) n = cand;
  }
  if (n < 1) {
    throw std::runtime_error(path + ": header column count " +
                             std::to_string(header.size()) +
                             " does not match any state dimension");
  }

  SystemTable table;
  table.n = n;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               " has " + std::to_string(fields.size()) +
                               " fields, expected " + std::to_string(header.size()));
    }
    std::vector<double> vals;
    vals.reserve(fields.size());
    for (const auto& f : fields) {
      try {
        std::size_t pos = 0;
        vals.push_back(std::stod(f, &pos));
        if (pos != f.size()) throw std::invalid_argument(f);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                 ": cannot parse '" + f + "' as a number");
      }
    }
    if (!table.times.empty() && !(vals[0] > table.times.back())) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": t column must be strictly increasing");
    }
    table.times.push_back(vals[0]);
    Matrix a(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) a(r, c) = vals[1 + r * n + c];
    Vector b(n), cvec(n);
    for (int i = 0; i < n; ++i) b(i) = vals[1 + n * n + i];
    for (int i = 0; i < n; ++i) cvec(i) = vals[1 + n * n + n + i];
    table.A_samples.push_back(std::move(a));
    table.b_samples.push_back(std::move(b));
    table.c_samples.push_back(std::move(cvec));
  }
  if (table.times.size() < 2) {
    throw std::runtime_error(path + ": table needs at least two data rows");
  }
  return table;
}

}  // namespace obs2gd
