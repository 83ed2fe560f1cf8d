#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace scengen {

/// Locale-independent decimal rendering with 17 significant digits, so that
/// parse_double(format_double(x)) == x bit for bit.
std::string format_double(double x);

/// Locale-independent parse of a complete token (scientific notation
/// accepted). Returns nullopt for anything that is not a finite number.
std::optional<double> parse_double(std::string_view token);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace scengen
