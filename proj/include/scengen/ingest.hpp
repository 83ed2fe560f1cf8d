#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace scengen {

/// Multivariate historical observations, one column per variable.
///
/// Missing cells (empty or "NA" in the source CSV) are stored as NaN until
/// align_and_clean removes or rejects them. Timestamps are opaque metadata.
struct Dataset {
  std::vector<std::string> variable_names;
  Eigen::MatrixXd rows;  // n_obs x n_vars
  std::optional<std::vector<std::string>> timestamps;

  std::size_t n_obs() const { return static_cast<std::size_t>(rows.rows()); }
  std::size_t n_vars() const { return static_cast<std::size_t>(rows.cols()); }
  bool has_missing() const;
  std::vector<double> column(std::size_t j) const;
  std::size_t index_of(const std::string& name) const;
};

/// Expected variable columns. An empty list means "infer from the header".
struct CsvSchema {
  std::vector<std::string> columns;

  static CsvSchema infer() { return {}; }
  bool inferred() const { return columns.empty(); }
};

Dataset load_timeseries_csv(const std::string& path, const CsvSchema& schema = CsvSchema::infer());
Dataset parse_timeseries_csv(const std::string& text, const CsvSchema& schema = CsvSchema::infer(),
                             const std::string& source = "<memory>");

/// CSV text with 17-significant-digit values; missing cells are written as "NA".
std::string format_timeseries_csv(const Dataset& d);
void write_timeseries_csv(const std::string& path, const Dataset& d);

enum class MissingPolicy { drop_row, fail };

MissingPolicy parse_missing_policy(const std::string& s);

struct CleanResult {
  Dataset data;
  std::size_t dropped = 0;
  std::vector<std::size_t> dropped_rows;  // 0-based data row indices
};

CleanResult align_and_clean(const Dataset& d, MissingPolicy policy);

/// Restricts the dataset to `names`, in that order.
Dataset select_variables(const Dataset& d, const std::vector<std::string>& names);

}  // namespace scengen
