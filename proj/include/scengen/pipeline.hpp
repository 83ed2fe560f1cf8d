#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scengen/bundle.hpp"
#include "scengen/ingest.hpp"
#include "scengen/parallel.hpp"
#include "scengen/power_curve.hpp"

namespace scengen {

enum class ModelKind { jnt, dvine };

/// Contents of the `fit --config` JSON file.
struct FitConfig {
  std::string input;
  std::vector<std::string> variables;  // empty: every column of the input
  ModelKind model = ModelKind::jnt;
  std::vector<std::string> order;      // required for dvine
  MissingPolicy missing_policy = MissingPolicy::drop_row;
  std::map<std::string, PowerCurve> power_curves;
  std::string output;                  // optional default bundle path
};

/// Parses config JSON; a relative `input` is resolved against `base_dir`.
FitConfig parse_fit_config(const std::string& text, const std::string& base_dir = "");
FitConfig load_fit_config(const std::string& path);

/// Ingest, clean, fit marginals and the dependence model.
ModelBundle fit_model(const FitConfig& config);
/// fit_model on an already loaded dataset.
ModelBundle fit_model(const Dataset& data, const FitConfig& config);

/// Fits, writes the bundle to `out_path` and returns a printable summary.
std::string cmd_fit(const FitConfig& config, const std::string& out_path);

struct ScenarioSet {
  std::vector<std::string> names;
  Eigen::MatrixXd values;  // count x names.size(), physical scale
  std::uint64_t master_seed = 0;
  std::string model_ref;
  std::string generated_at;
};

/// Copula-scale uniforms for the bundle, columns in variable order.
Eigen::MatrixXd sample_uniforms(const ModelBundle& b, std::size_t count, std::uint64_t master_seed,
                                const SamplingOptions& opts = {});

/// Maps uniforms through each marginal's quantile. Variables with a power
/// curve gain an extra trailing column "<name>_power".
ScenarioSet to_scenarios(const ModelBundle& b, const Eigen::MatrixXd& uniforms);

ScenarioSet generate_scenarios(const ModelBundle& b, std::size_t count, std::uint64_t master_seed,
                               const SamplingOptions& opts = {});

std::string format_scenarios_csv(const ScenarioSet& s);

/// Samples `count` scenarios from the bundle at `model_path` and writes them
/// to `out_path`, plus provenance to `out_path + ".provenance.json"`.
ScenarioSet cmd_sample(const std::string& model_path, std::size_t count, std::uint64_t master_seed,
                       const std::string& out_path, const SamplingOptions& opts = {});

struct ValidationThresholds {
  double ks_max = 0.05;
  double rank_max = 0.05;
};

struct ValidationReport {
  std::vector<std::string> names;
  std::vector<double> ks;  // per variable, scenarios vs fitting samples
  Eigen::MatrixXd target_rank;
  Eigen::MatrixXd recovered_rank;
  double max_rank_deviation = 0.0;
  bool psd_repaired = false;
  std::optional<std::uint64_t> seed;
  std::size_t n_scenarios = 0;
  std::size_t n_fit = 0;
  ValidationThresholds thresholds;
  bool passed = false;
};

ValidationReport validate_scenarios(const ModelBundle& b, const Dataset& scenarios,
                                    const ValidationThresholds& thresholds = {});
ValidationReport cmd_validate(const std::string& model_path, const std::string& scenarios_path,
                              const ValidationThresholds& thresholds = {});
std::string report_to_json(const ValidationReport& r);

/// 512 evenly spaced (x, CDF(x)) pairs across the variable's sample range.
std::vector<std::pair<double, double>> plot_data(const ModelBundle& b, const std::string& variable);
void emit_plot_data(const std::string& model_path, const std::string& variable, const std::string& out_path);

}  // namespace scengen
