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

#include <string>
#include <string_view>
#include <unordered_set>

namespace newsrep {

// Normalizes a URL: lowercases scheme and host, drops default ports, the
// fragment, utm_* query parameters and trailing slashes. Idempotent.
// Throws kInvalidUrl when `raw` is not an absolute URL with a host.
std::string CanonicalizeUrl(std::string_view raw);

// Lowercased host of an absolute URL, without port or userinfo.
std::string HostOf(std::string_view url);

// Public-suffix rules in the publicsuffix.org list format (plain, `*.`
// wildcard and `!` exception rules). Only rule lines are read; comments and
// blank lines are skipped.
class PublicSuffixList {
 public:
  static PublicSuffixList Parse(std::string_view text);
  // Snapshot compiled into the library; see version().
  static const PublicSuffixList& Bundled();

  // Length in labels of the public suffix of `host`. Unlisted TLDs count as a
  // one-label suffix.
  std::size_t SuffixLabels(std::string_view host) const;
  // Suffix plus one label, or the host itself when it is a bare suffix or an
  // IP address.
  std::string RegistrableDomain(std::string_view host) const;

  const std::string& version() const { return version_; }

 private:
  std::unordered_set<std::string> normal_;
  std::unordered_set<std::string> wildcard_;   // "*.key"
  std::unordered_set<std::string> exception_;  // "!key"
  std::string version_;
};

// Registered domain of a canonical URL's host, e.g. "nytimes.com" for
// "https://www.nytimes.com/a".
std::string SiteOf(std::string_view url);

// Lowercases, strips scheme, path and port, then reduces to the registered
// domain: "WWW.Example.COM/path" -> "example.com". Returns "" for input that
// has no host.
std::string NormalizeDomain(std::string_view text);

// The label just left of the public suffix: "nytimes" for "nytimes.com".
std::string RegistrableName(std::string_view domain);

}  // namespace newsrep
