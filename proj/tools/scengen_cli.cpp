// Command-line front end: fit / sample / validate / plot-data.

#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "scengen/error.hpp"
#include "scengen/numfmt.hpp"
#include "scengen/pipeline.hpp"

namespace {

enum ExitCode : int { kOk = 0, kValidationFailed = 1, kUsage = 2, kDataError = 3 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scenario generation for correlated load, wind and solar variables"};
  app.require_subcommand(1);

  std::string config_path, fit_out;
  auto* fit = app.add_subcommand("fit", "Fit marginals and a dependence model from CSV");
  fit->add_option("--config", config_path, "Fit configuration (JSON)")->required();
  fit->add_option("--out", fit_out, "Model bundle path (default: config 'output' or model.json)");

  std::string model_path, out_path;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  auto* sample = app.add_subcommand("sample", "Generate scenarios from a fitted model");
  sample->add_option("--model", model_path, "Model bundle (JSON)")->required();
  sample->add_option("--count", count, "Number of scenarios")->required()->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "Master seed")->required();
  sample->add_option("--out", out_path, "Scenario CSV")->required();
  sample->add_option("--threads", threads, "Worker threads (0 = all cores)");

  std::string scenarios_path, report_path;
  scengen::ValidationThresholds thresholds;
  auto* validate = app.add_subcommand("validate", "Compare scenarios with the fitted model");
  validate->add_option("--model", model_path, "Model bundle (JSON)")->required();
  validate->add_option("--scenarios", scenarios_path, "Scenario CSV")->required();
  validate->add_option("--ks-max", thresholds.ks_max, "Largest acceptable KS distance")->capture_default_str();
  validate->add_option("--rank-max", thresholds.rank_max, "Largest acceptable Spearman deviation")
      ->capture_default_str();
  validate->add_option("--report", report_path, "Write the JSON report here instead of stdout");

  std::string variable;
  auto* plot = app.add_subcommand("plot-data", "Emit (x, CDF(x)) pairs for one marginal");
  plot->add_option("--model", model_path, "Model bundle (JSON)")->required();
  plot->add_option("--var", variable, "Variable name")->required();
  plot->add_option("--out", out_path, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*fit) {
      const auto config = scengen::load_fit_config(config_path);
      const std::string target = !fit_out.empty() ? fit_out : !config.output.empty() ? config.output : "model.json";
      std::cout << scengen::cmd_fit(config, target);
    } else if (*sample) {
      const auto s = scengen::cmd_sample(model_path, count, seed, out_path, {threads});
      std::cout << "wrote " << s.values.rows() << " scenarios to " << out_path << "\n";
    } else if (*validate) {
      const auto report = scengen::cmd_validate(model_path, scenarios_path, thresholds);
      const std::string text = scengen::report_to_json(report);
      if (report_path.empty())
        std::cout << text;
      else
        scengen::write_file_atomic(report_path, text);
      if (!report.passed) {
        std::cerr << "validation failed\n";
        return kValidationFailed;
      }
    } else if (*plot) {
      scengen::emit_plot_data(model_path, variable, out_path);
    }
  } catch (const scengen::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kOk;
}
