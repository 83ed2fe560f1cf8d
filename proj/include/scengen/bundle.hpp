#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "scengen/dependence.hpp"
#include "scengen/marginals.hpp"
#include "scengen/power_curve.hpp"
#include "scengen/vine.hpp"

namespace scengen {

inline constexpr int kBundleFormatVersion = 1;

struct JntDependence {
  CopulaCorrelationMatrix copula_matrix;
};

struct FitMetadata {
  std::string source_file;
  std::size_t n_obs = 0;
  std::size_t dropped_rows = 0;
  std::string created_at;
};

/// Persisted fit: marginals plus the dependence model, in variable order.
struct ModelBundle {
  int format_version = kBundleFormatVersion;
  std::vector<std::string> variables;
  std::vector<EmpiricalMarginal> marginals;
  std::variant<JntDependence, DVineSpec> dependence;
  /// Spearman matrix of the fitting data; the target for validation.
  RankCorrelationMatrix target_rank;
  std::map<std::string, PowerCurve> power_curves;
  FitMetadata metadata;

  bool is_jnt() const { return std::holds_alternative<JntDependence>(dependence); }
  const EmpiricalMarginal& marginal(const std::string& name) const;
  /// Throws DataError when counts or dimensions disagree.
  void check_consistency() const;
};

std::string bundle_to_json(const ModelBundle& b);
ModelBundle bundle_from_json(const std::string& text, const std::string& source = "<memory>");

void save_bundle(const std::string& path, const ModelBundle& b);
ModelBundle load_bundle(const std::string& path);

}  // namespace scengen
