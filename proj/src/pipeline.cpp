#include "scengen/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "scengen/dependence.hpp"
#include "scengen/error.hpp"
#include "scengen/gaussian_copula.hpp"
#include "scengen/ks.hpp"
#include "scengen/numfmt.hpp"
#include "scengen/vine.hpp"

namespace scengen {

using nlohmann::json;

namespace {

std::string utc_now_iso() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(std::string("cannot open ") + what + " '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

PowerCurve parse_power_curve(const json& j, const std::string& name) {
  try {
    PowerCurve c{j.at("cut_in").get<double>(), j.at("rated_speed").get<double>(), j.at("cut_out").get<double>(),
                 j.at("rated_power").get<double>()};
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError("power_curves." + name + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("power_curves." + name + ": " + e.what());
  }
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

}  // namespace

FitConfig parse_fit_config(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  FitConfig c;
  try {
    if (!j.contains("input")) throw ConfigError("config: 'input' is required");
    c.input = j.at("input").get<std::string>();
    if (!base_dir.empty() && std::filesystem::path(c.input).is_relative())
      c.input = (std::filesystem::path(base_dir) / c.input).string();
    if (j.contains("variables")) c.variables = j.at("variables").get<std::vector<std::string>>();
    const std::string model = j.value("model", "jnt");
    if (model == "jnt") c.model = ModelKind::jnt;
    else if (model == "dvine") c.model = ModelKind::dvine;
    else throw ConfigError("config: model must be 'jnt' or 'dvine', got '" + model + "'");
    if (j.contains("order")) c.order = j.at("order").get<std::vector<std::string>>();
    if (c.model == ModelKind::dvine && c.order.empty()) throw ConfigError("config: model 'dvine' requires an 'order'");
    if (j.contains("missing_policy")) c.missing_policy = parse_missing_policy(j.at("missing_policy").get<std::string>());
    if (j.contains("power_curves"))
      for (const auto& [name, curve] : j.at("power_curves").items()) c.power_curves[name] = parse_power_curve(curve, name);
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

FitConfig load_fit_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_fit_config(buf.str(), std::filesystem::path(path).parent_path().string());
}

ModelBundle fit_model(const Dataset& raw, const FitConfig& config) {
  Dataset selected = raw;
  if (!config.variables.empty()) {
    for (const auto& v : config.variables)
      if (std::find(raw.variable_names.begin(), raw.variable_names.end(), v) == raw.variable_names.end())
        throw ConfigError("config: variable '" + v + "' not found in " + config.input);
    selected = select_variables(raw, config.variables);
  }
  const CleanResult clean = align_and_clean(selected, config.missing_policy);
  const Dataset& d = clean.data;

  ModelBundle b;
  b.variables = d.variable_names;
  for (std::size_t k = 0; k < d.n_vars(); ++k) {
    const auto col = d.column(k);
    try {
      b.marginals.push_back(EmpiricalMarginal::fit(d.variable_names[k], col));
    } catch (const std::invalid_argument& e) {
      throw DataError(config.input + ": " + e.what());
    }
  }
  try {
    b.target_rank = spearman_matrix(d);
  } catch (const DataError& e) {
    throw DataError(config.input + ": " + e.what());
  }

  if (config.model == ModelKind::jnt) {
    CopulaCorrelationMatrix c = to_copula_matrix(b.target_rank);
    try {
      GaussianCopulaModel probe(c);
    } catch (const std::domain_error& e) {
      throw DataError(config.input + ": copula matrix is singular (perfectly dependent variables?): " + e.what());
    }
    b.dependence = JntDependence{std::move(c)};
  } else {
    std::set<std::string> want(b.variables.begin(), b.variables.end());
    std::set<std::string> got(config.order.begin(), config.order.end());
    if (config.order.size() != b.variables.size() || want != got)
      throw ConfigError("config: order [" + join(config.order) + "] must be a permutation of the variables [" +
                        join(b.variables) + "]");
    b.dependence = dvine_from_rank_matrix(b.target_rank, config.order);
  }

  for (const auto& [name, curve] : config.power_curves) {
    if (std::find(b.variables.begin(), b.variables.end(), name) == b.variables.end())
      throw ConfigError("config: power curve for unknown variable '" + name + "'");
    b.power_curves[name] = curve;
  }
  b.metadata = FitMetadata{config.input, d.n_obs(), clean.dropped, utc_now_iso()};
  b.check_consistency();
  return b;
}

ModelBundle fit_model(const FitConfig& config) {
  return fit_model(load_timeseries_csv(config.input), config);
}

std::string cmd_fit(const FitConfig& config, const std::string& out_path) {
  const ModelBundle b = fit_model(config);
  save_bundle(out_path, b);

  std::ostringstream s;
  s << "fitted " << (b.is_jnt() ? "jnt" : "dvine") << " model on " << b.metadata.n_obs << " rows ("
    << b.metadata.dropped_rows << " dropped) from " << b.metadata.source_file << "\n";
  s << "variables: " << join(b.variables) << "\n";
  if (const auto* jnt = std::get_if<JntDependence>(&b.dependence)) {
    s << "psd_repaired: " << (jnt->copula_matrix.psd_repaired ? "true" : "false") << "\n";
  } else {
    const auto& spec = std::get<DVineSpec>(b.dependence);
    s << "order: " << join(spec.order) << "\n";
    s << "edge rank correlations (Gaussian-consistent placement):\n";
    for (std::size_t j = 0; j < spec.edge_rank_corrs.size(); ++j) {
      s << "  T" << j + 1 << ":";
      for (double v : spec.edge_rank_corrs[j]) s << ' ' << format_double(v);
      s << "\n";
    }
  }
  s << "model written to " << out_path << "\n";
  return s.str();
}

Eigen::MatrixXd sample_uniforms(const ModelBundle& b, std::size_t count, std::uint64_t master_seed,
                                const SamplingOptions& opts) {
  if (count == 0) throw std::invalid_argument("scenario count must be positive");
  const SeededRng rng(master_seed, 0);
  if (const auto* jnt = std::get_if<JntDependence>(&b.dependence))
    return joint_normal_transform(GaussianCopulaModel(jnt->copula_matrix), count, rng, opts);

  const auto& spec = std::get<DVineSpec>(b.dependence);
  const Eigen::MatrixXd vine_order = sample_dvine(spec, count, rng, opts);
  Eigen::MatrixXd out(vine_order.rows(), vine_order.cols());
  for (std::size_t k = 0; k < spec.order.size(); ++k) {
    const auto target = std::find(b.variables.begin(), b.variables.end(), spec.order[k]) - b.variables.begin();
    out.col(target) = vine_order.col(static_cast<Eigen::Index>(k));
  }
  return out;
}

ScenarioSet to_scenarios(const ModelBundle& b, const Eigen::MatrixXd& uniforms) {
  const auto n = static_cast<Eigen::Index>(b.variables.size());
  if (uniforms.cols() != n) throw std::invalid_argument("to_scenarios: column count does not match the model");
  ScenarioSet s;
  s.names = b.variables;
  std::vector<std::pair<Eigen::Index, const PowerCurve*>> curves;
  for (Eigen::Index k = 0; k < n; ++k)
    if (auto it = b.power_curves.find(b.variables[static_cast<std::size_t>(k)]); it != b.power_curves.end()) {
      curves.emplace_back(k, &it->second);
      s.names.push_back(it->first + "_power");
    }

  s.values.resize(uniforms.rows(), static_cast<Eigen::Index>(s.names.size()));
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& m = b.marginals[static_cast<std::size_t>(k)];
    for (Eigen::Index r = 0; r < uniforms.rows(); ++r) s.values(r, k) = m.quantile(uniforms(r, k));
  }
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto [src, curve] = curves[c];
    const auto dst = n + static_cast<Eigen::Index>(c);
    for (Eigen::Index r = 0; r < uniforms.rows(); ++r)
      s.values(r, dst) = wind_power_curve(std::max(0.0, s.values(r, src)), *curve);
  }
  return s;
}

ScenarioSet generate_scenarios(const ModelBundle& b, std::size_t count, std::uint64_t master_seed,
                               const SamplingOptions& opts) {
  ScenarioSet s = to_scenarios(b, sample_uniforms(b, count, master_seed, opts));
  s.master_seed = master_seed;
  s.generated_at = utc_now_iso();
  return s;
}

std::string format_scenarios_csv(const ScenarioSet& s) {
  std::string out;
  for (std::size_t j = 0; j < s.names.size(); ++j) out += (j ? "," : "") + s.names[j];
  out += '\n';
  for (Eigen::Index r = 0; r < s.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < s.values.cols(); ++c) {
      if (c) out += ',';
      out += format_double(s.values(r, c));
    }
    out += '\n';
  }
  return out;
}

ScenarioSet cmd_sample(const std::string& model_path, std::size_t count, std::uint64_t master_seed,
                       const std::string& out_path, const SamplingOptions& opts) {
  const ModelBundle b = load_bundle(model_path);
  ScenarioSet s = generate_scenarios(b, count, master_seed, opts);
  s.model_ref = model_path;
  write_file_atomic(out_path, format_scenarios_csv(s));
  const json provenance = {{"master_seed", master_seed},
                           {"count", count},
                           {"model", model_path},
                           {"model_created_at", b.metadata.created_at},
                           {"generated_at", s.generated_at}};
  write_file_atomic(out_path + ".provenance.json", provenance.dump(2) + "\n");
  return s;
}

ValidationReport validate_scenarios(const ModelBundle& b, const Dataset& scenarios,
                                    const ValidationThresholds& thresholds) {
  for (const auto& v : b.variables)
    if (std::find(scenarios.variable_names.begin(), scenarios.variable_names.end(), v) ==
        scenarios.variable_names.end())
      throw DataError("scenario columns do not match the model: missing '" + v + "'");
  const Dataset d = select_variables(scenarios, b.variables);
  if (d.has_missing()) throw DataError("scenario file contains missing values");

  ValidationReport r;
  r.names = b.variables;
  r.thresholds = thresholds;
  r.n_scenarios = d.n_obs();
  r.n_fit = b.marginals.front().size();
  for (std::size_t k = 0; k < b.variables.size(); ++k) {
    const auto col = d.column(k);
    r.ks.push_back(ks_statistic(col, b.marginals[k].sorted_values()));
  }
  r.target_rank = b.target_rank.entries;
  r.recovered_rank = spearman_matrix(d).entries;
  r.max_rank_deviation = (r.target_rank - r.recovered_rank).cwiseAbs().maxCoeff();
  if (const auto* jnt = std::get_if<JntDependence>(&b.dependence)) r.psd_repaired = jnt->copula_matrix.psd_repaired;

  const double worst_ks = *std::max_element(r.ks.begin(), r.ks.end());
  r.passed = worst_ks <= thresholds.ks_max && r.max_rank_deviation <= thresholds.rank_max;
  return r;
}

ValidationReport cmd_validate(const std::string& model_path, const std::string& scenarios_path,
                              const ValidationThresholds& thresholds) {
  const ModelBundle b = load_bundle(model_path);
  const Dataset scenarios = load_timeseries_csv(scenarios_path);
  ValidationReport r = validate_scenarios(b, scenarios, thresholds);
  const std::string prov = scenarios_path + ".provenance.json";
  if (std::filesystem::exists(prov)) {
    try {
      const json p = json::parse(read_file(prov, "provenance"));
      r.seed = p.at("master_seed").get<std::uint64_t>();
    } catch (const json::exception&) {
      // Provenance is informational; a damaged sidecar leaves the seed unset.
    }
  }
  return r;
}

std::string report_to_json(const ValidationReport& r) {
  auto mat = [](const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  json ks = json::object();
  for (std::size_t k = 0; k < r.names.size(); ++k) ks[r.names[k]] = r.ks[k];
  json j = {{"variables", r.names},
            {"ks", ks},
            {"target_rank_matrix", mat(r.target_rank)},
            {"recovered_rank_matrix", mat(r.recovered_rank)},
            {"max_rank_deviation", r.max_rank_deviation},
            {"psd_repaired", r.psd_repaired},
            {"seed", r.seed ? json(*r.seed) : json(nullptr)},
            {"n_scenarios", r.n_scenarios},
            {"n_fit", r.n_fit},
            {"thresholds", {{"ks_max", r.thresholds.ks_max}, {"rank_max", r.thresholds.rank_max}}},
            {"passed", r.passed}};
  return j.dump(2) + "\n";
}

std::vector<std::pair<double, double>> plot_data(const ModelBundle& b, const std::string& variable) {
  const auto& m = b.marginal(variable);
  constexpr std::size_t kPoints = 512;
  std::vector<std::pair<double, double>> out;
  out.reserve(kPoints);
  for (std::size_t i = 0; i < kPoints; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(kPoints - 1);
    // Pin the end points so rounding cannot step outside the sample range.
    const double x = i == 0 ? m.min() : i + 1 == kPoints ? m.max() : m.min() + t * (m.max() - m.min());
    out.emplace_back(x, m.cdf(x));
  }
  return out;
}

void emit_plot_data(const std::string& model_path, const std::string& variable, const std::string& out_path) {
  const ModelBundle b = load_bundle(model_path);
  std::string csv = "x,cdf\n";
  for (const auto& [x, u] : plot_data(b, variable)) csv += format_double(x) + "," + format_double(u) + "\n";
  write_file_atomic(out_path, csv);
}

}  // namespace scengen
