#include "scengen/bundle.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "scengen/error.hpp"
#include "scengen/numfmt.hpp"

namespace scengen {

using nlohmann::json;

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, std::size_t n, const char* what) {
  if (!j.is_array() || j.size() != n) throw DataError(std::string(what) + ": expected " + std::to_string(n) + " rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n)
      throw DataError(std::string(what) + ": row " + std::to_string(i) + " must have " + std::to_string(n) + " entries");
    for (std::size_t k = 0; k < n; ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j[i][k].get<double>();
  }
  return m;
}

}  // namespace

const EmpiricalMarginal& ModelBundle::marginal(const std::string& name) const {
  for (const auto& m : marginals)
    if (m.name() == name) return m;
  throw DataError("variable '" + name + "' is not in the model");
}

void ModelBundle::check_consistency() const {
  const std::size_t n = variables.size();
  if (n == 0) throw DataError("model has no variables");
  if (marginals.size() != n) throw DataError("model has " + std::to_string(marginals.size()) + " marginals for " +
                                             std::to_string(n) + " variables");
  for (std::size_t k = 0; k < n; ++k)
    if (marginals[k].name() != variables[k]) throw DataError("marginal order does not match variable order");
  if (static_cast<std::size_t>(target_rank.entries.rows()) != n)
    throw DataError("target rank matrix dimension does not match variable count");
  if (const auto* jnt = std::get_if<JntDependence>(&dependence)) {
    if (static_cast<std::size_t>(jnt->copula_matrix.entries.rows()) != n)
      throw DataError("copula matrix dimension does not match variable count");
  } else {
    const auto& spec = std::get<DVineSpec>(dependence);
    if (spec.dimension() != n) throw DataError("d-vine dimension does not match variable count");
    for (const auto& v : spec.order) marginal(v);
  }
  for (const auto& [name, curve] : power_curves) {
    marginal(name);
    curve.validate();
  }
}

std::string bundle_to_json(const ModelBundle& b) {
  json j;
  j["format_version"] = b.format_version;
  j["variables"] = b.variables;
  json marginals = json::array();
  for (const auto& m : b.marginals) marginals.push_back({{"name", m.name()}, {"sorted_values", m.sorted_values()}});
  j["marginals"] = std::move(marginals);

  if (const auto* jnt = std::get_if<JntDependence>(&b.dependence)) {
    j["dependence"] = {{"kind", "jnt"},
                       {"copula_matrix", matrix_to_json(jnt->copula_matrix.entries)},
                       {"psd_repaired", jnt->copula_matrix.psd_repaired}};
  } else {
    const auto& spec = std::get<DVineSpec>(b.dependence);
    j["dependence"] = {{"kind", "dvine"}, {"order", spec.order}, {"edge_rank_correlations", spec.edge_rank_corrs}};
  }
  j["target_rank_matrix"] = matrix_to_json(b.target_rank.entries);

  json curves = json::object();
  for (const auto& [name, c] : b.power_curves)
    curves[name] = {{"cut_in", c.cut_in}, {"rated_speed", c.rated_speed}, {"cut_out", c.cut_out},
                    {"rated_power", c.rated_power}};
  j["power_curves"] = std::move(curves);
  j["metadata"] = {{"source_file", b.metadata.source_file},
                   {"n_obs", b.metadata.n_obs},
                   {"dropped_rows", b.metadata.dropped_rows},
                   {"created_at", b.metadata.created_at}};
  // nlohmann/json writes the shortest decimal that round-trips each double.
  return j.dump(2) + "\n";
}

ModelBundle bundle_from_json(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(source + ": corrupt model bundle (" + e.what() + ")");
  }
  try {
    ModelBundle b;
    b.format_version = j.at("format_version").get<int>();
    if (b.format_version != kBundleFormatVersion)
      throw DataError(source + ": unsupported bundle format_version " + std::to_string(b.format_version) +
                      " (expected " + std::to_string(kBundleFormatVersion) + ")");
    b.variables = j.at("variables").get<std::vector<std::string>>();
    for (const auto& m : j.at("marginals"))
      b.marginals.push_back(
          EmpiricalMarginal::fit(m.at("name").get<std::string>(), m.at("sorted_values").get<std::vector<double>>()));

    const std::size_t n = b.variables.size();
    const auto& dep = j.at("dependence");
    const auto kind = dep.at("kind").get<std::string>();
    if (kind == "jnt") {
      CopulaCorrelationMatrix c{b.variables, matrix_from_json(dep.at("copula_matrix"), n, "copula_matrix"),
                                dep.at("psd_repaired").get<bool>()};
      check_correlation_shape(c.entries, "copula_matrix");
      b.dependence = JntDependence{std::move(c)};
    } else if (kind == "dvine") {
      b.dependence = build_dvine(dep.at("order").get<std::vector<std::string>>(),
                                 dep.at("edge_rank_correlations").get<std::vector<std::vector<double>>>());
    } else {
      throw DataError(source + ": unknown dependence kind '" + kind + "'");
    }
    b.target_rank = {b.variables, matrix_from_json(j.at("target_rank_matrix"), n, "target_rank_matrix")};

    if (j.contains("power_curves"))
      for (const auto& [name, c] : j.at("power_curves").items())
        b.power_curves[name] = PowerCurve{c.at("cut_in").get<double>(), c.at("rated_speed").get<double>(),
                                          c.at("cut_out").get<double>(), c.at("rated_power").get<double>()};
    if (j.contains("metadata")) {
      const auto& md = j.at("metadata");
      b.metadata.source_file = md.value("source_file", "");
      b.metadata.n_obs = md.value("n_obs", std::size_t{0});
      b.metadata.dropped_rows = md.value("dropped_rows", std::size_t{0});
      b.metadata.created_at = md.value("created_at", "");
    }
    b.check_consistency();
    return b;
  } catch (const json::exception& e) {
    throw DataError(source + ": corrupt model bundle (" + e.what() + ")");
  } catch (const std::logic_error& e) {
    throw DataError(source + ": corrupt model bundle (" + e.what() + ")");
  }
}

void save_bundle(const std::string& path, const ModelBundle& b) {
  write_file_atomic(path, bundle_to_json(b));
}

ModelBundle load_bundle(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model bundle '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return bundle_from_json(buf.str(), path);
}

}  // namespace scengen
