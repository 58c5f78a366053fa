#include "hybcav/output.hpp"

#include <cmath>
#include <json.hpp>

#include "hybcav/errors.hpp"

#ifndef HYBCAV_VERSION
#define HYBCAV_VERSION "0.0.0"
#endif

namespace hybcav {
namespace {

using nlohmann::ordered_json;

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (std::isnan(*d)) return "nan";
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    return format_double(*d);
  }
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

ordered_json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return nullptr;
    return *d;
  }
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

ordered_json metadata(const Table& table, const RunInfo& info) {
  ordered_json m;
  m["tool"] = "hybcav";
  m["version"] = HYBCAV_VERSION;
  m["command"] = info.command;
  m["config_hash"] = config_hash(info.config);
  m["rows"] = table.rows.size();
  ordered_json summary = ordered_json::object();
  for (const auto& [name, value] : table.summary) summary[name] = cell_json(value);
  m["summary"] = summary;
  m["config"] = canonical_text(info.config);
  return m;
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw InvalidArgument("no column named '" + name + "'");
}

double Table::number(std::size_t row, const std::string& name) const {
  const Cell& c = rows.at(row).at(column(name));
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<long long>(&c)) return static_cast<double>(*i);
  throw InvalidArgument("column '" + name + "' is not numeric");
}

std::string metadata_json(const Table& table, const RunInfo& info) {
  return metadata(table, info).dump();
}

std::string render(const Table& table, const RunInfo& info, Format format) {
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw Error("render: ragged table");
  }
  if (format == Format::Json) {
    ordered_json doc;
    doc["metadata"] = metadata(table, info);
    doc["columns"] = table.columns;
    ordered_json rows = ordered_json::array();
    for (const auto& row : table.rows) {
      ordered_json r = ordered_json::array();
      for (const auto& c : row) r.push_back(cell_json(c));
      rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(1) + "\n";
  }

  std::string out = "# " + metadata_json(table, info) + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_field(table.columns[i]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_field(cell_text(row[i]));
    }
    out += '\n';
  }
  return out;
}

RunConfig config_from_output(const std::string& document) {
  ordered_json meta;
  try {
    if (document.rfind("# ", 0) == 0) {
      meta = ordered_json::parse(document.substr(2, document.find('\n') - 2));
    } else {
      meta = ordered_json::parse(document).at("metadata");
    }
    return parse_config(meta.at("config").get<std::string>());
  } catch (const ordered_json::exception& e) {
    throw ConfigError(std::string("cannot read metadata: ") + e.what());
  }
}

}  // namespace hybcav
