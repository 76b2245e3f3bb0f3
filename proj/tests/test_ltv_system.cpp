#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "obs2gd/ltv_system.hpp"

using namespace obs2gd;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Matrix rotation(double t) {
  Matrix r(2, 2);
  r << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
  return r;
}
}  // namespace

TEST_CASE("close_over_signals substitutes the measured signals") {
  StateAffineSystem sys;
  sys.n = 2;
  sys.A = [](double u, double, double) { return (u * Matrix::Identity(2, 2)).eval(); };
  sys.b = [](double, double y, double) { return Vector{{y, 0.0}}; };
  sys.C = [](double, double) { return Vector{{1.0, 0.0}}; };

  SUBCASE("u = 0 zeroes the closed A") {
    const LtvSystem closed = close_over_signals(sys, [](double) { return 0.0; },
                                                [](double) { return 1.0; });
    CHECK(closed.A(3.7).isZero(0.0));
  }

  SUBCASE("rotation generator from constant u") {
    StateAffineSystem rot = sys;
    rot.A = [](double u, double, double) {
      Matrix a(2, 2);
      a << 0.0, u, -u, 0.0;
      return a;
    };
    const LtvSystem closed = close_over_signals(rot, [](double) { return 1.0; },
                                                [](double) { return 0.0; });
    CHECK(closed.A(0.0) == closed.A(5.0));
    CHECK(closed.A(1.0)(0, 1) == doctest::Approx(1.0));
  }

  SUBCASE("b(t) from a previously simulated output") {
    const LtvSystem s1 = scenario_s1();
    const OdeGrid grid(0.0, 5.0, 1e-2);
    const Trajectory traj = simulate_plant(s1, Vector::Ones(1), grid);
    auto y_sig = [&](double t) {
      const auto k = static_cast<std::size_t>(std::llround(t / grid.dt));
      return traj.outputs[k];
    };
    const LtvSystem closed = close_over_signals(sys, [](double) { return 0.0; }, y_sig);
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(grid.num_steps()));
    for (int i = 0; i < 10; ++i) {
      const double t = grid.time_at(static_cast<std::size_t>(pick(rng)));
      CHECK(closed.b(t)(0) == doctest::Approx(y_sig(t)));
      CHECK(closed.b(t)(1) == 0.0);
    }
  }
}

TEST_CASE("simulate_plant closed forms") {
  SUBCASE("zero dynamics holds the state") {
    LtvSystem sys;
    sys.n = 2;
    sys.A = [](double) { return Matrix::Zero(2, 2); };
    sys.b = [](double) { return Vector::Zero(2); };
    sys.C = [](double) { return Vector{{1.0, 0.0}}; };
    const Trajectory traj = simulate_plant(sys, Vector{{3.0, -1.0}}, OdeGrid(0.0, 1.0, 0.1));
    for (const auto& x : traj.states) CHECK((x - Vector{{3.0, -1.0}}).norm() == 0.0);
  }

  SUBCASE("S1 quadrature: x(t) = 1 + sin t") {
    const Trajectory traj = simulate_plant(scenario_s1(), Vector::Ones(1), OdeGrid(0.0, 10.0, 1e-3));
    double max_err = 0.0;
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      const double t = traj.grid.time_at(k);
      max_err = std::max(max_err, std::abs(traj.states[k](0) - (1.0 + std::sin(t))));
    }
    CHECK(max_err < 1e-8);
  }

  SUBCASE("rotor returns to start after one period") {
    const Trajectory traj = simulate_plant(scenario_s2(), Vector{{1.0, 0.0}},
                                           OdeGrid(0.0, kTwoPi, kTwoPi / 6283.0));
    CHECK((traj.states.back() - Vector{{1.0, 0.0}}).norm() < 1e-8);
  }

  SUBCASE("outputs equal C'x exactly as computed") {
    const Trajectory traj = simulate_plant(scenario_s2(), Vector{{0.3, 0.7}}, OdeGrid(0.0, 2.0, 1e-2));
    const LtvSystem sys = scenario_s2();
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      CHECK(traj.outputs[k] == sys.C(traj.grid.time_at(k)).dot(traj.states[k]));
    }
  }
}

TEST_CASE("transition_matrix closed forms") {
  const LtvSystem s2 = scenario_s2();
  CHECK(transition_matrix(s2, 1.3, 1.3, 1e-3).isIdentity(0.0));

  SUBCASE("nilpotent constant A") {
    LtvSystem sys;
    sys.n = 2;
    Matrix a(2, 2);
    a << 0.0, 1.0, 0.0, 0.0;
    sys.A = [a](double) { return a; };
    sys.b = [](double) { return Vector::Zero(2); };
    sys.C = [](double) { return Vector::Zero(2); };
    const double tau = 2.5;
    const Matrix phi = transition_matrix(sys, 0.0, tau, 1e-3);
    Matrix expected(2, 2);
    expected << 1.0, tau, 0.0, 1.0;
    CHECK((phi - expected).cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("rotation closed form") {
    for (double t : {0.5, 2.0, 5.5}) {
      CHECK((transition_matrix(s2, 0.0, t, 1e-3) - rotation(t)).cwiseAbs().maxCoeff() < 1e-8);
    }
  }

  SUBCASE("semigroup property") {
    const Matrix a = transition_matrix(s2, 0.0, 1.0, 1e-3);
    const Matrix b = transition_matrix(s2, 1.0, 2.7, 1e-3);
    const Matrix full = transition_matrix(s2, 0.0, 2.7, 1e-3);
    CHECK((b * a - full).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("observability_grammian") {
  SUBCASE("zero output gives the zero matrix") {
    LtvSystem sys = scenario_s2();
    sys.C = [](double) { return Vector::Zero(2); };
    CHECK(observability_grammian(sys, 0.0, 3.0, 1e-3).isZero(0.0));
  }

  SUBCASE("rotor over one period: pi * I") {
    const Matrix w = observability_grammian(scenario_s2(), 0.0, kTwoPi, 1e-3);
    CHECK((w - std::numbers::pi * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-6);
  }

  SUBCASE("integrator-free plant: diag(T, 0)") {
    LtvSystem sys;
    sys.n = 2;
    sys.A = [](double) { return Matrix::Zero(2, 2); };
    sys.b = [](double) { return Vector::Zero(2); };
    sys.C = [](double) { return Vector{{1.0, 0.0}}; };
    const Matrix w = observability_grammian(sys, 0.0, 4.0, 1e-3);
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 0) = 4.0;
    CHECK((w - expected).cwiseAbs().maxCoeff() < 1e-9);
  }

  SUBCASE("symmetric PSD and monotone in t") {
    const LtvSystem s2 = scenario_s2();
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    Matrix prev = Matrix::Zero(2, 2);
    for (double t : {0.5, 1.0, 2.0, 4.0, 6.0}) {
      const Matrix w = observability_grammian(s2, 0.0, t, 1e-3);
      CHECK((w - w.transpose()).cwiseAbs().maxCoeff() < 1e-12);
      for (int i = 0; i < 5; ++i) {
        const Vector v{{entry(rng), entry(rng)}};
        CHECK(v.dot(w * v) >= v.dot(prev * v) - 1e-10 * w.trace());
        CHECK(v.dot(w * v) >= -1e-10 * w.trace());
      }
      prev = w;
    }
  }
}

TEST_CASE("uniform_stability_bound") {
  CHECK(uniform_stability_bound(scenario_s2(), 10.0, 1e-3) == doctest::Approx(1.0).epsilon(1e-6));

  LtvSystem contraction;
  contraction.n = 2;
  contraction.A = [](double) { return (-Matrix::Identity(2, 2)).eval(); };
  contraction.b = [](double) { return Vector::Zero(2); };
  contraction.C = [](double) { return Vector{{1.0, 0.0}}; };
  CHECK(uniform_stability_bound(contraction, 5.0, 1e-3) == doctest::Approx(1.0).epsilon(1e-9));

  LtvSystem shear;
  shear.n = 2;
  shear.A = [](double) {
    Matrix a(2, 2);
    a << 0.0, 1.0, 0.0, 0.0;
    return a;
  };
  shear.b = [](double) { return Vector::Zero(2); };
  shear.C = [](double) { return Vector{{1.0, 0.0}}; };
  CHECK(uniform_stability_bound(shear, 10.0, 1e-2) >= 10.0);
}

TEST_CASE("scenario S3 output window") {
  const LtvSystem s3 = scenario_s3();
  CHECK(s3.C(1.0) == Vector{{1.0, 0.0}});
  CHECK(s3.C(kTwoPi) == Vector{{1.0, 0.0}});
  CHECK(s3.C(kTwoPi + 1e-9).isZero(0.0));
}

TEST_CASE("tabulated systems") {
  const auto dir = std::filesystem::temp_directory_path() / "obs2gd_table_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "sys.csv").string();

  SUBCASE("round trip with linear interpolation") {
    {
      std::ofstream out(path);
      out << "t, A11, A12, A21, A22, b1, b2, c1, c2\n";
      out << "0.0, 0, 1, -1, 0, 0.5, 0, 1, 0\n";
      out << "1.0, 0, 2, -2, 0, 1.5, 0, 1, 0\n";
      out << "2.0, 0, 3, -3, 0, 2.5, 0, 1, 0\n";
    }
    const LtvSystem sys = make_tabulated(load_system_table(path));
    CHECK(sys.n == 2);
    CHECK(sys.A(0.5)(0, 1) == doctest::Approx(1.5));
    CHECK(sys.b(1.25)(0) == doctest::Approx(1.75));
    CHECK(sys.C(2.0)(0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(sys.A(2.5), std::out_of_range);
    CHECK_THROWS_AS(sys.A(-0.5), std::out_of_range);
  }

  SUBCASE("non-increasing t column is rejected") {
    {
      std::ofstream out(path);
      out << "t, A11, b1, c1\n0, 0, 0, 1\n0, 0, 0, 1\n";
    }
    CHECK_THROWS_AS(load_system_table(path), std::runtime_error);
  }

  SUBCASE("malformed rows are rejected with the line number") {
    {
      std::ofstream out(path);
      out << "t, A11, b1, c1\n0, 0, 0, 1\n1, 0, nope, 1\n";
    }
    CHECK_THROWS_WITH_AS(load_system_table(path),
                         doctest::Contains("line 3"), std::runtime_error);
  }

  SUBCASE("bad header column count is rejected") {
    {
      std::ofstream out(path);
      out << "t, A11, b1\n0, 0, 0\n1, 0, 0\n";
    }
    CHECK_THROWS_AS(load_system_table(path), std::runtime_error);
  }
}
