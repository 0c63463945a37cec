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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace newsrep {

// Flat `key = value` configuration: `#` starts a comment, values may be
// double-quoted, `[section]` headers prefix later keys with "section.".
// This is the flat-table subset of TOML.
class KeyValueConfig {
 public:
  static KeyValueConfig Parse(std::string_view text, const std::string& origin);
  static KeyValueConfig Load(const std::string& path);

  bool Has(const std::string& key) const { return values_.contains(key); }
  std::optional<std::string> GetString(const std::string& key) const;
  std::optional<double> GetDouble(const std::string& key) const;
  std::optional<std::int64_t> GetInt(const std::string& key) const;
  std::optional<bool> GetBool(const std::string& key) const;

  // Throws kInvalidInput naming the first key not in `known`.
  void RejectUnknown(const std::set<std::string>& known) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::string origin_;
  std::map<std::string, std::string> values_;
};

}  // namespace newsrep
