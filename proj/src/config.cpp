#include "obs2gd/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace obs2gd {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": cannot parse '" + value + "' as a number");
  }
}

Vector parse_vector(const std::string& key, const std::string& value) {
  std::vector<double> entries;
  std::stringstream ss(value);
  std::string field;
  while (std::getline(ss, field, ',')) {
    entries.push_back(parse_double(key, trim(field)));
  }
  if (entries.empty()) throw ConfigError(key + ": empty vector");
  Vector v(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<Eigen::Index>(i)) = entries[i];
  return v;
}

}  // namespace

ScenarioConfig validate_config(const std::string& raw) {
  std::map<std::string, std::string> kv;
  std::istringstream in(raw);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (kv.count(key)) throw ConfigError(key + ": duplicate key");
    kv[key] = value;
  }

  ScenarioConfig cfg;
  auto take = [&kv](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  if (auto v = take("scenario")) cfg.scenario = *v;
  if (cfg.scenario.empty()) throw ConfigError("scenario: missing (expected S1, S2, S3 or S4)");
  if (cfg.scenario != "S1" && cfg.scenario != "S2" && cfg.scenario != "S3" &&
      cfg.scenario != "S4") {
    throw ConfigError("scenario: unknown id '" + cfg.scenario + "'");
  }
  if (auto v = take("table")) cfg.table_path = *v;
  if (cfg.scenario == "S4" && cfg.table_path.empty()) {
    throw ConfigError("table: required for scenario S4");
  }

  if (auto v = take("x0")) cfg.x0 = parse_vector("x0", *v);
  if (cfg.x0.size() == 0) throw ConfigError("x0: missing");
  if (auto v = take("xi0")) cfg.xi0 = parse_vector("xi0", *v);
  if (auto v = take("theta_g0")) cfg.theta_g0 = parse_vector("theta_g0", *v);
  if (auto v = take("theta0")) cfg.theta0 = parse_vector("theta0", *v);

  if (auto v = take("gamma_g")) cfg.gamma_g = parse_double("gamma_g", *v);
  if (!(cfg.gamma_g > 0.0)) throw ConfigError("gamma_g: must be positive");
  if (auto v = take("gamma")) cfg.gamma = parse_double("gamma", *v);
  if (!(cfg.gamma > 0.0)) throw ConfigError("gamma: must be positive");
  if (auto v = take("dt")) cfg.dt = parse_double("dt", *v);
  if (!(cfg.dt > 0.0)) throw ConfigError("dt: must be positive");
  if (auto v = take("t_final")) cfg.t_final = parse_double("t_final", *v);
  if (!(cfg.t_final > 0.0)) throw ConfigError("t_final: must be positive");
  if (auto v = take("output_dir")) cfg.output_dir = *v;

  const bool has_dist = kv.count("disturbance.amplitude") || kv.count("disturbance.kind") ||
                        kv.count("disturbance.frequency") || kv.count("disturbance.seed");
  if (has_dist) {
    DisturbanceSpec d;
    if (auto v = take("disturbance.amplitude")) {
      d.amplitude = parse_double("disturbance.amplitude", *v);
    }
    if (d.amplitude < 0.0) throw ConfigError("disturbance.amplitude: must be >= 0");
    if (auto v = take("disturbance.kind")) {
      if (*v == "gaussian") {
        d.kind = DisturbanceSpec::Kind::kGaussian;
      } else if (*v == "sinusoid") {
        d.kind = DisturbanceSpec::Kind::kSinusoid;
      } else {
        throw ConfigError("disturbance.kind: expected 'gaussian' or 'sinusoid', got '" + *v + "'");
      }
    }
    if (auto v = take("disturbance.frequency")) {
      d.frequency = parse_double("disturbance.frequency", *v);
    }
    if (auto v = take("disturbance.seed")) {
      const double s = parse_double("disturbance.seed", *v);
      if (s < 0.0 || s != std::floor(s)) {
        throw ConfigError("disturbance.seed: must be a nonnegative integer");
      }
      d.seed = static_cast<unsigned>(s);
    }
    if (d.kind == DisturbanceSpec::Kind::kGaussian && !d.seed) {
      throw ConfigError("disturbance.seed: required when disturbance.kind = gaussian");
    }
    cfg.disturbance = d;
  }

  const bool has_baseline = kv.count("baseline.q") || kv.count("baseline.r") ||
                            kv.count("baseline.p0_scale");
  if (has_baseline) {
    BaselineSpec b;
    if (auto v = take("baseline.q")) b.q = parse_double("baseline.q", *v);
    if (b.q < 0.0) throw ConfigError("baseline.q: must be >= 0");
    if (auto v = take("baseline.r")) b.r = parse_double("baseline.r", *v);
    if (!(b.r > 0.0)) throw ConfigError("baseline.r: must be positive");
    if (auto v = take("baseline.p0_scale")) b.p0_scale = parse_double("baseline.p0_scale", *v);
    if (!(b.p0_scale > 0.0)) throw ConfigError("baseline.p0_scale: must be positive");
    cfg.baseline = b;
  }

  if (!kv.empty()) {
    throw ConfigError("unknown key '" + kv.begin()->first + "'");
  }

  // Dimension checks for the built-in scenarios; S4 dimensions are checked
  // against the table at run time.
  const int n = cfg.scenario == "S1" ? 1 : (cfg.scenario == "S4" ? -1 : 2);
  if (n > 0) {
    auto check_dim = [n](const char* name, const Vector& v) {
      if (v.size() != 0 && v.size() != n) {
        throw ConfigError(std::string(name) + ": expected dimension " + std::to_string(n));
      }
    };
    if (cfg.x0.size() != n) {
      throw ConfigError("x0: expected dimension " + std::to_string(n));
    }
    check_dim("xi0", cfg.xi0);
    check_dim("theta_g0", cfg.theta_g0);
    check_dim("theta0", cfg.theta0);
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return validate_config(buf.str());
}

}  // namespace obs2gd
