#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "obs2gd/config.hpp"
#include "obs2gd/runner.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitBlowUp = 3;

int run_one(const std::string& config_path, const std::string& output_dir_flag,
            bool no_baseline, bool quiet, const std::string& report_format,
            const std::string& output_subdir) {
  obs2gd::ScenarioConfig cfg = obs2gd::load_config(config_path);
  if (no_baseline) cfg.baseline.reset();

  std::string out_dir = output_dir_flag.empty() ? cfg.output_dir : output_dir_flag;
  if (!output_subdir.empty()) {
    out_dir = (std::filesystem::path(out_dir) / output_subdir).string();
  }

  const obs2gd::RunResult result = obs2gd::run_scenario(cfg);
  obs2gd::write_outputs(result, out_dir, report_format);

  if (!quiet) {
    std::cout << "scenario " << cfg.scenario << ": " << result.rows.size()
              << " grid points -> " << out_dir << "\n"
              << result.report.to_text();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2G+D observer simulation runner"};

  std::string config_path;
  std::string output_dir;
  std::string batch_dir;
  std::string report_format = "json";
  bool no_baseline = false;
  bool quiet = false;

  auto* pos = app.add_option("config", config_path, "Scenario config file (key = value)");
  app.add_option("--output-dir", output_dir, "Directory for trace.csv and the report");
  app.add_flag("--no-baseline", no_baseline, "Disable the Kalman-Bucy baseline");
  app.add_flag("--quiet", quiet, "Suppress the summary printed to stdout");
  app.add_option("--report-format", report_format, "Report format")
      ->check(CLI::IsMember({"json", "text"}));
  auto* batch = app.add_option("--batch", batch_dir,
                               "Run every *.cfg file in a directory");
  pos->excludes(batch);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!batch_dir.empty()) {
      std::vector<std::filesystem::path> configs;
      for (const auto& entry : std::filesystem::directory_iterator(batch_dir)) {
        if (entry.path().extension() == ".cfg") configs.push_back(entry.path());
      }
      std::sort(configs.begin(), configs.end());
      if (configs.empty()) {
        std::cerr << "error: no *.cfg files in " << batch_dir << "\n";
        return kExitConfigError;
      }
      for (const auto& path : configs) {
        run_one(path.string(), output_dir, no_baseline, quiet, report_format,
                path.stem().string());
      }
      return 0;
    }
    if (config_path.empty()) {
      std::cerr << "error: a config file (or --batch) is required\n";
      return kExitConfigError;
    }
    return run_one(config_path, output_dir, no_baseline, quiet, report_format, "");
  } catch (const obs2gd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const obs2gd::IntegrationError& e) {
    std::cerr << "numerical blow-up: " << e.what() << "\n";
    return kExitBlowUp;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}
