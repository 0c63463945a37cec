// Copyright 2026 The Newsrep Authors.
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

#include "newsrep/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "newsrep/error.hpp"

namespace newsrep {

namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::Parse(std::string_view text,
                                     const std::string& origin) {
  KeyValueConfig config;
  config.origin_ = origin;
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    // Strip comments outside of quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto where = origin + ":" + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw Error(ErrorCode::kInvalidInput, where + ": malformed section");
      }
      section = std::string(Trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidInput, where + ": expected key = value");
    }
    std::string key(Trim(line.substr(0, eq)));
    std::string_view value = Trim(line.substr(eq + 1));
    if (key.empty()) throw Error(ErrorCode::kInvalidInput, where + ": empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (!section.empty()) key = section + "." + key;
    config.values_[key] = std::string(value);
  }
  return config;
}

KeyValueConfig KeyValueConfig::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str(), path);
}

std::optional<std::string> KeyValueConfig::GetString(
    const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> KeyValueConfig::GetDouble(const std::string& key) const {
  auto s = GetString(key);
  if (!s) return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(*s, &used);
    if (used == s->size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kInvalidInput,
              origin_ + ": '" + key + "' is not a number: " + *s);
}

std::optional<std::int64_t> KeyValueConfig::GetInt(
    const std::string& key) const {
  auto s = GetString(key);
  if (!s) return std::nullopt;
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
  if (ec != std::errc() || ptr != s->data() + s->size()) {
    throw Error(ErrorCode::kInvalidInput,
                origin_ + ": '" + key + "' is not an integer: " + *s);
  }
  return v;
}

std::optional<bool> KeyValueConfig::GetBool(const std::string& key) const {
  auto s = GetString(key);
  if (!s) return std::nullopt;
  if (*s == "true" || *s == "1") return true;
  if (*s == "false" || *s == "0") return false;
  throw Error(ErrorCode::kInvalidInput,
              origin_ + ": '" + key + "' is not a boolean: " + *s);
}

void KeyValueConfig::RejectUnknown(const std::set<std::string>& known) const {
  for (const auto& [key, value] : values_) {
    if (!known.contains(key)) {
      throw Error(ErrorCode::kInvalidInput,
                  origin_ + ": unknown key '" + key + "'");
    }
  }
}

}  // namespace newsrep
