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

#include "sdb/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "sdb/error.hpp"
#include "util/binary_io.hpp"

namespace sdb {

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Drops a trailing comment that is not inside a string.
std::string_view StripComment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

bool ParseNumber(std::string_view s, double& out) {
  s = Trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  std::string clean;
  for (char c : s)
    if (c != '_') clean.push_back(c);
  const char* end = clean.data() + clean.size();
  auto [ptr, ec] = std::from_chars(clean.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

ConfigFile ConfigFile::Parse(const std::string& text, const std::string& origin) {
  ConfigFile cfg;
  cfg.origin_ = origin;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line(text.data() + pos, (nl == std::string::npos ? text.size() : nl) - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    line = Trim(StripComment(line));
    if (line.empty()) continue;
    const auto bad = [&](const std::string& why) {
      Fail(ErrorCode::kConfig, fmt::format("{}:{}: {}", origin, line_no, why));
    };
    if (line.front() == '[') {
      if (line.back() != ']') bad("unterminated section header");
      section = std::string(Trim(line.substr(1, line.size() - 2)));
      if (section.empty()) bad("empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) bad("expected `key = value`");
    const std::string key(Trim(line.substr(0, eq)));
    std::string_view raw = Trim(line.substr(eq + 1));
    if (key.empty()) bad("missing key");
    for (char c : key)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) bad("invalid key '" + key + "'");
    ConfigValue value;
    if (raw.empty()) bad("missing value for '" + key + "'");
    if (raw.front() == '"') {
      if (raw.size() < 2 || raw.back() != '"') bad("unterminated string");
      value = std::string(raw.substr(1, raw.size() - 2));
    } else if (raw == "true" || raw == "false") {
      value = raw == "true";
    } else if (raw.front() == '[') {
      if (raw.back() != ']') bad("unterminated array");
      std::vector<double> items;
      std::string_view body = Trim(raw.substr(1, raw.size() - 2));
      while (!body.empty()) {
        const auto comma = body.find(',');
        double v = 0.0;
        if (!ParseNumber(body.substr(0, comma), v)) bad("arrays may only hold numbers");
        items.push_back(v);
        if (comma == std::string_view::npos) break;
        body = Trim(body.substr(comma + 1));
      }
      value = std::move(items);
    } else {
      double v = 0.0;
      if (!ParseNumber(raw, v)) bad(fmt::format("cannot parse value '{}'", raw));
      value = v;
    }
    const std::string full = section.empty() ? key : section + "." + key;
    if (cfg.values_.count(full)) bad("duplicate key '" + full + "'");
    cfg.values_[full] = std::move(value);
  }
  return cfg;
}

ConfigFile ConfigFile::Load(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path))
    Fail(ErrorCode::kConfig, fmt::format("config file '{}' does not exist", path.string()));
  return Parse(io::ReadFile(path), path.string());
}

const ConfigValue* ConfigFile::Find(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return nullptr;
  used_[key] = true;
  return &it->second;
}

double ConfigFile::Number(const std::string& key, double fallback) const {
  const auto* v = Find(key);
  if (!v) return fallback;
  if (const auto* d = std::get_if<double>(v)) return *d;
  Fail(ErrorCode::kConfig, fmt::format("{}: '{}' must be a number", origin_, key));
}

long ConfigFile::Integer(const std::string& key, long fallback) const {
  const auto* v = Find(key);
  if (!v) return fallback;
  const auto* d = std::get_if<double>(v);
  if (!d || std::floor(*d) != *d || std::abs(*d) > 9e15)
    Fail(ErrorCode::kConfig, fmt::format("{}: '{}' must be an integer", origin_, key));
  return static_cast<long>(*d);
}

bool ConfigFile::Bool(const std::string& key, bool fallback) const {
  const auto* v = Find(key);
  if (!v) return fallback;
  if (const auto* b = std::get_if<bool>(v)) return *b;
  Fail(ErrorCode::kConfig, fmt::format("{}: '{}' must be true or false", origin_, key));
}

std::string ConfigFile::String(const std::string& key, const std::string& fallback) const {
  const auto* v = Find(key);
  if (!v) return fallback;
  if (const auto* s = std::get_if<std::string>(v)) return *s;
  Fail(ErrorCode::kConfig, fmt::format("{}: '{}' must be a string", origin_, key));
}

std::vector<double> ConfigFile::Numbers(const std::string& key, const std::vector<double>& fallback) const {
  const auto* v = Find(key);
  if (!v) return fallback;
  if (const auto* a = std::get_if<std::vector<double>>(v)) return *a;
  if (const auto* d = std::get_if<double>(v)) return {*d};
  Fail(ErrorCode::kConfig, fmt::format("{}: '{}' must be an array of numbers", origin_, key));
}

void ConfigFile::RejectUnused() const {
  for (const auto& [key, value] : values_)
    if (!used_.count(key)) Fail(ErrorCode::kConfig, fmt::format("{}: unknown key '{}'", origin_, key));
}

}  // namespace sdb
