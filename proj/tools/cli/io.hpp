// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace hbtcli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitParse = 2;

/// Carries the process exit code to the top level.
class CliError : public std::runtime_error {
 public:
  CliError(int exit_code, const std::string& what) : std::runtime_error(what), exit_code_(exit_code) {}
  [[nodiscard]] int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

/// Flat JSON document; relative file references resolve against `base_dir`.
struct Config {
  nlohmann::json doc;
  std::filesystem::path base_dir;

  [[nodiscard]] bool has(const std::string& key) const { return doc.contains(key) && !doc[key].is_null(); }
  [[nodiscard]] double number(const std::string& key) const;
  [[nodiscard]] double number_or(const std::string& key, double fallback) const;
  [[nodiscard]] std::int64_t integer_or(const std::string& key, std::int64_t fallback) const;
  [[nodiscard]] bool boolean_or(const std::string& key, bool fallback) const;
  [[nodiscard]] std::string string_or(const std::string& key, const std::string& fallback) const;
  [[nodiscard]] std::vector<double> numbers(const std::string& key) const;
  [[nodiscard]] std::vector<std::string> strings(const std::string& key) const;
  [[nodiscard]] std::filesystem::path path(const std::string& key) const;
};

Config load_config(const std::filesystem::path& file);

/// Subset click counts indexed by detector mask, or a pre-averaged c_obs.
struct MeasuredData {
  std::optional<std::vector<std::uint64_t>> subset_clicks;
  std::uint64_t total_pulses = 0;
  std::optional<std::vector<double>> c_obs;
};

MeasuredData load_measured(const std::filesystem::path& file, int detectors);

/// Formats with 17 significant digits.
std::string format_number(double x);

using Cell = std::variant<std::string, double, std::int64_t>;

/// Tabular output with `#key=value` metadata lines, written as CSV or as a
/// JSON object {"meta": [...], "columns": [...], "rows": [...]}.
struct Table {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Metadata lines written after the rows.
  std::vector<std::pair<std::string, std::string>> trailer;

  [[nodiscard]] std::string to_csv() const;
  [[nodiscard]] std::string to_json() const;
};

/// Writes once; "-" or empty means stdout.
void write_output(const std::string& path, const std::string& content);

}  // namespace hbtcli
