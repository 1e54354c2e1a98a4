// Copyright 2026 The sdb Authors
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

#ifndef SDB_CONFIG_HPP_
#define SDB_CONFIG_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace sdb {

// A value in the pipeline config file.
using ConfigValue = std::variant<double, bool, std::string, std::vector<double>>;

// Flat view of a config file in a small TOML subset: `[section]` headers,
// `key = value` pairs with numbers, "strings", true/false and [number, ...]
// arrays, and `#` comments. Keys are stored as "section.key".
class ConfigFile {
 public:
  static ConfigFile Parse(const std::string& text, const std::string& origin = "config");
  static ConfigFile Load(const std::filesystem::path& path);

  bool Has(const std::string& key) const { return values_.count(key) != 0; }
  // Each getter marks the key as used and throws kConfig on a type mismatch.
  double Number(const std::string& key, double fallback) const;
  long Integer(const std::string& key, long fallback) const;
  bool Bool(const std::string& key, bool fallback) const;
  std::string String(const std::string& key, const std::string& fallback) const;
  std::vector<double> Numbers(const std::string& key, const std::vector<double>& fallback) const;
  // Throws kConfig naming any key never read.
  void RejectUnused() const;

 private:
  const ConfigValue* Find(const std::string& key) const;
  std::map<std::string, ConfigValue> values_;
  mutable std::map<std::string, bool> used_;
  std::string origin_;
};

}  // namespace sdb

#endif  // SDB_CONFIG_HPP_
