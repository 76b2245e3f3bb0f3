#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "obs2gd/numerics.hpp"

namespace obs2gd {

/// Invalid or inconsistent run configuration; maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DisturbanceSpec {
  double amplitude = 0.0;
  enum class Kind { kGaussian, kSinusoid } kind = Kind::kGaussian;
  double frequency = 1.0;           // rad/s, sinusoid only
  std::optional<unsigned> seed;     // required for gaussian
};

struct BaselineSpec {
  double q = 0.0;
  double r = 1.0;
  double p0_scale = 1.0;
};

/// One batch run: scenario choice, initial conditions, gains, grid,
/// optional disturbance and Kalman-Bucy baseline settings.
struct ScenarioConfig {
  std::string scenario;             // S1 | S2 | S3 | S4
  std::string table_path;           // required for S4
  Vector x0;
  Vector xi0;                       // defaults to zero
  double gamma_g = 1.0;
  double gamma = 10.0;
  Vector theta_g0;                  // defaults to zero
  Vector theta0;                    // defaults to zero
  double dt = 1e-3;
  double t_final = 0.0;
  std::optional<DisturbanceSpec> disturbance;
  std::optional<BaselineSpec> baseline;
  std::string output_dir = ".";
};

/// Parses the key = value config text. Unknown keys are rejected; every
/// violated invariant is reported with its field name. Defaults:
/// gamma_g = 1, gamma = 10, xi0 = 0, theta_g0 = 0, theta0 = 0, dt = 1e-3.
ScenarioConfig validate_config(const std::string& raw);

/// Convenience: read and validate a config file.
ScenarioConfig load_config(const std::string& path);

}  // namespace obs2gd
