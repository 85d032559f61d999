// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace hbtcli {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw CliError(kExitParse, what); }

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) parse_error("cannot open " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  return out;
}

std::uint64_t parse_count(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!text.empty() && text[0] == '-') throw std::invalid_argument("negative");
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    parse_error(where + ": '" + text + "' is not a nonnegative integer");
  }
  if (used != text.size()) parse_error(where + ": '" + text + "' is not a nonnegative integer");
  return v;
}

double parse_real(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    parse_error(where + ": '" + text + "' is not a number");
  }
  if (used != text.size()) parse_error(where + ": '" + text + "' is not a number");
  return v;
}

std::string cell_text(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  return std::to_string(std::get<std::int64_t>(c));
}

nlohmann::json cell_json(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return nullptr;
    // Round-trips through the same 17-digit text as the CSV form.
    return std::stod(format_number(*d));
  }
  return std::get<std::int64_t>(c);
}

}  // namespace

double Config::number(const std::string& key) const {
  if (!has(key)) parse_error("config is missing '" + key + "'");
  if (!doc[key].is_number()) parse_error("config field '" + key + "' must be a number");
  return doc[key].get<double>();
}

double Config::number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

std::int64_t Config::integer_or(const std::string& key, std::int64_t fallback) const {
  if (!has(key)) return fallback;
  if (!doc[key].is_number_integer()) parse_error("config field '" + key + "' must be an integer");
  return doc[key].get<std::int64_t>();
}

bool Config::boolean_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  if (!doc[key].is_boolean()) parse_error("config field '" + key + "' must be true or false");
  return doc[key].get<bool>();
}

std::string Config::string_or(const std::string& key, const std::string& fallback) const {
  if (!has(key)) return fallback;
  if (!doc[key].is_string()) parse_error("config field '" + key + "' must be a string");
  return doc[key].get<std::string>();
}

std::vector<double> Config::numbers(const std::string& key) const {
  if (!has(key)) parse_error("config is missing '" + key + "'");
  const auto& v = doc[key];
  if (!v.is_array()) parse_error("config field '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) parse_error("config field '" + key + "' must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<std::string> Config::strings(const std::string& key) const {
  if (!has(key)) parse_error("config is missing '" + key + "'");
  const auto& v = doc[key];
  std::vector<std::string> out;
  if (v.is_string()) {
    out.push_back(v.get<std::string>());
    return out;
  }
  if (!v.is_array()) parse_error("config field '" + key + "' must be a string or an array of strings");
  for (const auto& x : v) {
    if (!x.is_string()) parse_error("config field '" + key + "' must be an array of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

std::filesystem::path Config::path(const std::string& key) const {
  std::filesystem::path p = string_or(key, "");
  if (p.empty()) parse_error("config field '" + key + "' is empty");
  return p.is_absolute() ? p : base_dir / p;
}

Config load_config(const std::filesystem::path& file) {
  Config cfg;
  try {
    cfg.doc = nlohmann::json::parse(read_file(file));
  } catch (const nlohmann::json::exception& e) {
    parse_error("malformed config " + file.string() + ": " + e.what());
  }
  if (!cfg.doc.is_object()) parse_error("config " + file.string() + " must be a JSON object");
  for (const auto& [key, value] : cfg.doc.items()) {
    if (value.is_object()) parse_error("config field '" + key + "' is nested; the config is a flat document");
  }
  cfg.base_dir = std::filesystem::absolute(file).parent_path();
  return cfg;
}

MeasuredData load_measured(const std::filesystem::path& file, int detectors) {
  std::istringstream in(read_file(file));
  const std::string where = file.string();
  const std::size_t masks = std::size_t{1} << detectors;
  MeasuredData data;
  std::string header;
  std::vector<bool> seen;
  bool have_pulses = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    const std::string at = where + ":" + std::to_string(line_no);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string key = "#total_pulses=";
      if (line.rfind(key, 0) == 0) {
        data.total_pulses = parse_count(trim(line.substr(key.size())), at);
        have_pulses = true;
      }
      continue;
    }
    if (header.empty()) {
      header = line;
      if (header == "subset_mask,clicks") {
        data.subset_clicks.emplace(masks, 0);
        seen.assign(masks, false);
      } else if (header == "r,c_obs_r") {
        data.c_obs.emplace(static_cast<std::size_t>(detectors) + 1, std::nan(""));
        (*data.c_obs)[0] = 1.0;
        seen.assign(static_cast<std::size_t>(detectors) + 1, false);
      } else {
        parse_error(at + ": unknown header '" + header + "' (expected 'subset_mask,clicks' or 'r,c_obs_r')");
      }
      continue;
    }
    const auto fields = split(line);
    if (fields.size() != 2) parse_error(at + ": expected two comma-separated fields");
    if (data.subset_clicks) {
      if (fields[0] == "total_pulses") {
        data.total_pulses = parse_count(fields[1], at);
        have_pulses = true;
        continue;
      }
      const auto mask = parse_count(fields[0], at);
      if (mask >= masks) parse_error(at + ": subset mask " + fields[0] + " exceeds the detector count");
      if (seen[mask]) parse_error(at + ": subset mask " + fields[0] + " listed twice");
      seen[mask] = true;
      (*data.subset_clicks)[mask] = parse_count(fields[1], at);
    } else {
      const auto r = parse_count(fields[0], at);
      if (r > static_cast<std::uint64_t>(detectors)) parse_error(at + ": fold " + fields[0] + " exceeds D");
      if (seen[r]) parse_error(at + ": fold " + fields[0] + " listed twice");
      seen[r] = true;
      (*data.c_obs)[r] = parse_real(fields[1], at);
    }
  }
  if (header.empty()) parse_error(where + ": no data header");
  if (data.subset_clicks) {
    if (!have_pulses) parse_error(where + ": missing #total_pulses=N");
    for (std::size_t m = 1; m < masks; ++m) {
      if (!seen[m]) parse_error(where + ": no count for subset mask " + std::to_string(m));
    }
  } else {
    for (int r = 1; r <= detectors; ++r) {
      if (!seen[static_cast<std::size_t>(r)]) parse_error(where + ": no value for fold " + std::to_string(r));
    }
  }
  return data;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string Table::to_csv() const {
  std::string out;
  for (const auto& [k, v] : meta) out += "#" + k + "=" + v + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
    out += "\n";
  }
  for (const auto& [k, v] : trailer) out += "#" + k + "=" + v + "\n";
  return out;
}

std::string Table::to_json() const {
  nlohmann::ordered_json doc;
  doc["meta"] = nlohmann::ordered_json::array();
  for (const auto& [k, v] : meta) doc["meta"].push_back({{"key", k}, {"value", v}});
  for (const auto& [k, v] : trailer) doc["meta"].push_back({{"key", k}, {"value", v}});
  doc["columns"] = columns;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json r;
    for (std::size_t i = 0; i < row.size() && i < columns.size(); ++i) r[columns[i]] = cell_json(row[i]);
    doc["rows"].push_back(std::move(r));
  }
  return doc.dump(2) + "\n";
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError(kExitParse, "cannot write " + path);
  out << content;
  if (!out) throw CliError(kExitParse, "failed writing " + path);
}

}  // namespace hbtcli
