#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dunkl/errors.hpp"

namespace dunkl::harness {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

inline void write_csv(const std::filesystem::path& path, const Table& t) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

struct SuiteResult {
  std::string suite;
  bool pass = true;
  nlohmann::json constants = nlohmann::json::object();
  nlohmann::json residuals = nlohmann::json::object();
  nlohmann::json checks = nlohmann::json::object();
  nlohmann::json config_echo = nlohmann::json::object();
  /// Per-row output; extra tables keyed by file suffix.
  Table table;
  std::vector<std::pair<std::string, Table>> extra;

  void check(const std::string& name, bool ok) {
    checks[name] = ok;
    pass = pass && ok;
  }

  nlohmann::json summary() const {
    return {{"suite", suite},
            {"pass", pass},
            {"empirical_constants", constants},
            {"max_residuals", residuals},
            {"checks", checks},
            {"config_echo", config_echo}};
  }
};

/// Writes <suite>.csv, any extra tables, and <suite>_summary.json into dir.
inline void write_outputs(const std::filesystem::path& dir, const SuiteResult& r) {
  std::filesystem::create_directories(dir);
  write_csv(dir / (r.suite + ".csv"), r.table);
  for (const auto& [suffix, t] : r.extra) write_csv(dir / (r.suite + "_" + suffix + ".csv"), t);
  std::ofstream(dir / (r.suite + "_summary.json")) << r.summary().dump(2) << '\n';
}

}  // namespace dunkl::harness
