// Copyright 2026 The forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <fstream>
#include <map>
#include <string>
#include <string_view>

#include "forge/error.hpp"
#include "forge/lineio.hpp"

namespace forge {

// Flat key=value config with '#' comments.  Every key mirrors a CLI flag;
// flags set later override file values.
class Config {
 public:
  Config() = default;

  static Config from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open config file: " + path);
    Config cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      chomp_cr(line);
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      const std::size_t eq = trimmed.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw UsageError("config line " + std::to_string(line_no) +
                         ": expected key=value, got '" + trimmed + "'");
      }
      cfg.values_[trim(trimmed.substr(0, eq))] = trim(trimmed.substr(eq + 1));
    }
    return cfg;
  }

  void set(const std::string& key, const std::string& value) {
    values_[key] = value;
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get(const std::string& key, const std::string& fallback = {}) const {
    const auto it = values_.find(key);
    return it != values_.end() ? it->second : fallback;
  }

  bool get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
    if (v == "off" || v == "false" || v == "0" || v == "no") return false;
    throw UsageError("config key '" + key + "': expected on/off, got '" + v + "'");
  }

  double get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      std::size_t used = 0;
      const double v = std::stod(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument(it->second);
      return v;
    } catch (const std::exception&) {
      throw UsageError("config key '" + key + "': expected a number, got '" +
                       it->second + "'");
    }
  }

  long get_long(const std::string& key, long fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      std::size_t used = 0;
      const long v = std::stol(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument(it->second);
      return v;
    } catch (const std::exception&) {
      throw UsageError("config key '" + key + "': expected an integer, got '" +
                       it->second + "'");
    }
  }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  static std::string trim(std::string_view s) {
    std::size_t lo = 0;
    std::size_t hi = s.size();
    while (lo < hi && (s[lo] == ' ' || s[lo] == '\t')) ++lo;
    while (hi > lo && (s[hi - 1] == ' ' || s[hi - 1] == '\t')) --hi;
    return std::string(s.substr(lo, hi - lo));
  }

  std::map<std::string, std::string> values_;
};

}  // namespace forge
