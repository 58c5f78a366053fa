#pragma once

// Tabular results and their CSV / JSON renderings. Numbers are written in
// shortest round-trip form so reruns are byte-identical.

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hybcav/config.hpp"

namespace hybcav {

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  // Extra scalar results attached to the metadata (name, value).
  std::vector<std::pair<std::string, Cell>> summary;

  /// Index of a column; throws InvalidArgument when absent.
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

enum class Format { Csv, Json };

struct RunInfo {
  std::string command;
  RunConfig config;
};

/// CSV: one '# {json metadata}' line, a header row, then data rows.
/// JSON: {"metadata": {...}, "columns": [...], "rows": [[...], ...]}.
std::string render(const Table& table, const RunInfo& info, Format format);

/// Metadata object as a single-line JSON string.
std::string metadata_json(const Table& table, const RunInfo& info);

/// Recovers the configuration echoed in a rendered CSV or JSON document.
RunConfig config_from_output(const std::string& document);

}  // namespace hybcav
