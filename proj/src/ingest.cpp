#include "scengen/ingest.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string_view>

#include "scengen/error.hpp"
#include "scengen/numfmt.hpp"

namespace scengen {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return cells;
}

std::string trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

bool is_missing_token(std::string_view cell) {
  auto t = trimmed(cell);
  return t.empty() || t == "NA";
}

// YYYY-MM-DD prefix followed by an optional time part.
bool looks_like_iso8601(const std::string& s) {
  if (s.size() < 10) return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  if (s[4] != '-' || s[7] != '-') return false;
  return s.size() == 10 || s[10] == 'T' || s[10] == ' ';
}

}  // namespace

bool Dataset::has_missing() const {
  return !rows.array().isFinite().all();
}

std::vector<double> Dataset::column(std::size_t j) const {
  std::vector<double> out(n_obs());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return out;
}

std::size_t Dataset::index_of(const std::string& name) const {
  for (std::size_t j = 0; j < variable_names.size(); ++j)
    if (variable_names[j] == name) return j;
  throw DataError("unknown variable '" + name + "'");
}

Dataset parse_timeseries_csv(const std::string& text, const CsvSchema& schema, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;

  // Header; tolerate a UTF-8 byte order mark.
  if (!std::getline(in, line)) throw DataError(source + ": empty file (header row required)");
  ++line_no;
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  std::vector<std::string> header;
  for (auto cell : split_line(line)) header.push_back(trimmed(cell));

  bool has_timestamp = !header.empty() && header.front() == "timestamp";
  std::vector<std::string> names(header.begin() + (has_timestamp ? 1 : 0), header.end());
  if (names.empty()) throw DataError(source + ": header names no variable columns");

  std::set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty()) throw DataError(source + ": empty column name in header");
    if (!seen.insert(n).second) throw DataError(source + ": duplicate column '" + n + "'");
  }
  if (!schema.inferred() && names != schema.columns) {
    std::string expected, got;
    for (const auto& c : schema.columns) expected += (expected.empty() ? "" : ",") + c;
    for (const auto& c : names) got += (got.empty() ? "" : ",") + c;
    throw DataError(source + ": header/schema mismatch (expected [" + expected + "], found [" + got + "])");
  }

  std::vector<std::vector<double>> values;
  std::vector<std::string> stamps;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trimmed(line).empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != header.size())
      throw DataError(source + ": line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                      " cells, header has " + std::to_string(header.size()));
    std::size_t offset = 0;
    if (has_timestamp) {
      auto ts = trimmed(cells[0]);
      if (!looks_like_iso8601(ts))
        throw DataError(source + ": line " + std::to_string(line_no) + ", column 'timestamp': '" + ts +
                        "' is not an ISO-8601 instant");
      if (!stamps.empty() && !(stamps.back() < ts))
        throw DataError(source + ": line " + std::to_string(line_no) + ": timestamps not strictly increasing");
      stamps.push_back(ts);
      offset = 1;
    }
    std::vector<double> row(names.size());
    for (std::size_t j = 0; j < names.size(); ++j) {
      auto cell = cells[j + offset];
      if (is_missing_token(cell)) {
        row[j] = kMissing;
        continue;
      }
      auto v = parse_double(cell);
      if (!v)
        throw DataError(source + ": line " + std::to_string(line_no) + ", column '" + names[j] +
                        "': cannot parse '" + trimmed(cell) + "' as a finite number");
      row[j] = *v;
    }
    values.push_back(std::move(row));
  }

  Dataset d;
  d.variable_names = std::move(names);
  d.rows.resize(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(d.variable_names.size()));
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = 0; j < values[i].size(); ++j)
      d.rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i][j];
  if (has_timestamp) d.timestamps = std::move(stamps);
  return d;
}

Dataset load_timeseries_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_timeseries_csv(buf.str(), schema, path);
}

std::string format_timeseries_csv(const Dataset& d) {
  std::string out;
  if (d.timestamps) out += "timestamp,";
  for (std::size_t j = 0; j < d.variable_names.size(); ++j) {
    if (j) out += ',';
    out += d.variable_names[j];
  }
  out += '\n';
  for (std::size_t i = 0; i < d.n_obs(); ++i) {
    if (d.timestamps) out += (*d.timestamps)[i] + ",";
    for (std::size_t j = 0; j < d.n_vars(); ++j) {
      if (j) out += ',';
      double v = d.rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      out += std::isfinite(v) ? format_double(v) : "NA";
    }
    out += '\n';
  }
  return out;
}

void write_timeseries_csv(const std::string& path, const Dataset& d) {
  write_file_atomic(path, format_timeseries_csv(d));
}

MissingPolicy parse_missing_policy(const std::string& s) {
  if (s == "drop_row") return MissingPolicy::drop_row;
  if (s == "fail") return MissingPolicy::fail;
  throw ConfigError("missing_policy must be 'drop_row' or 'fail', got '" + s + "'");
}

CleanResult align_and_clean(const Dataset& d, MissingPolicy policy) {
  CleanResult result;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < d.n_obs(); ++i) {
    const auto row = d.rows.row(static_cast<Eigen::Index>(i));
    if (row.array().isFinite().all()) {
      keep.push_back(i);
      continue;
    }
    if (policy == MissingPolicy::fail) {
      std::size_t j = 0;
      while (std::isfinite(row(static_cast<Eigen::Index>(j)))) ++j;
      throw DataError("missing value at data row " + std::to_string(i + 1) + ", column '" +
                      d.variable_names[j] + "'");
    }
    result.dropped_rows.push_back(i);
  }
  result.dropped = result.dropped_rows.size();
  if (keep.size() < 2)
    throw DataError("only " + std::to_string(keep.size()) + " complete rows remain; at least 2 are required");

  Dataset& out = result.data;
  out.variable_names = d.variable_names;
  out.rows.resize(static_cast<Eigen::Index>(keep.size()), d.rows.cols());
  for (std::size_t k = 0; k < keep.size(); ++k)
    out.rows.row(static_cast<Eigen::Index>(k)) = d.rows.row(static_cast<Eigen::Index>(keep[k]));
  if (d.timestamps) {
    out.timestamps.emplace();
    for (auto i : keep) out.timestamps->push_back((*d.timestamps)[i]);
  }
  return result;
}

Dataset select_variables(const Dataset& d, const std::vector<std::string>& names) {
  Dataset out;
  out.variable_names = names;
  out.timestamps = d.timestamps;
  out.rows.resize(d.rows.rows(), static_cast<Eigen::Index>(names.size()));
  for (std::size_t k = 0; k < names.size(); ++k)
    out.rows.col(static_cast<Eigen::Index>(k)) = d.rows.col(static_cast<Eigen::Index>(d.index_of(names[k])));
  return out;
}

}  // namespace scengen
