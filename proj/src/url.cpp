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

#include "newsrep/url.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include "newsrep/error.hpp"

namespace newsrep {

namespace {

#include "public_suffix_snapshot.inc"

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) {
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  return out;
}

[[noreturn]] void BadUrl(std::string_view raw, std::string_view why) {
  throw Error(ErrorCode::kInvalidUrl,
              "invalid url '" + std::string(raw) + "': " + std::string(why));
}

struct UrlParts {
  std::string scheme;
  std::string host;
  std::string port;
  std::string path;
  std::string query;
};

bool ValidHost(std::string_view host) {
  if (host.empty()) return false;
  if (host.front() == '[') {
    if (host.back() != ']' || host.size() < 3) return false;
    return std::all_of(host.begin() + 1, host.end() - 1, [](char ch) {
      return std::isxdigit(static_cast<unsigned char>(ch)) || ch == ':' ||
             ch == '.';
    });
  }
  if (host.front() == '.' || host.find("..") != std::string_view::npos) {
    return false;
  }
  return std::all_of(host.begin(), host.end(), [](char ch) {
    const auto u = static_cast<unsigned char>(ch);
    return std::isalnum(u) || ch == '-' || ch == '.' || ch == '_' || u >= 0x80;
  });
}

UrlParts Split(std::string_view raw) {
  std::string_view s = raw;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  for (char ch : s) {
    if (std::isspace(static_cast<unsigned char>(ch)) ||
        std::iscntrl(static_cast<unsigned char>(ch))) {
      BadUrl(raw, "contains whitespace or control characters");
    }
  }
  const auto sep = s.find("://");
  if (sep == std::string_view::npos || sep == 0) BadUrl(raw, "missing scheme");
  UrlParts parts;
  parts.scheme = Lower(s.substr(0, sep));
  if (!std::isalpha(static_cast<unsigned char>(parts.scheme.front())) ||
      !std::all_of(parts.scheme.begin(), parts.scheme.end(), [](char ch) {
        return std::isalnum(static_cast<unsigned char>(ch)) || ch == '+' ||
               ch == '-' || ch == '.';
      })) {
    BadUrl(raw, "malformed scheme");
  }
  s.remove_prefix(sep + 3);

  const auto authority_end = s.find_first_of("/?#");
  std::string_view authority = s.substr(0, authority_end);
  s = authority_end == std::string_view::npos ? std::string_view{}
                                              : s.substr(authority_end);
  if (const auto at = authority.rfind('@'); at != std::string_view::npos) {
    authority.remove_prefix(at + 1);
  }
  std::string_view host = authority;
  const auto colon = authority.rfind(':');
  if (colon != std::string_view::npos &&
      authority.find(']', colon) == std::string_view::npos) {
    host = authority.substr(0, colon);
    parts.port = std::string(authority.substr(colon + 1));
    if (!std::all_of(parts.port.begin(), parts.port.end(), [](char ch) {
          return std::isdigit(static_cast<unsigned char>(ch));
        })) {
      BadUrl(raw, "malformed port");
    }
  }
  parts.host = Lower(host);
  while (!parts.host.empty() && parts.host.back() == '.') parts.host.pop_back();
  if (!ValidHost(parts.host)) BadUrl(raw, "missing or malformed host");

  if (const auto hash = s.find('#'); hash != std::string_view::npos) {
    s = s.substr(0, hash);
  }
  const auto q = s.find('?');
  parts.path = std::string(s.substr(0, q));
  if (q != std::string_view::npos) parts.query = std::string(s.substr(q + 1));
  return parts;
}

bool IsIpLiteral(std::string_view host) {
  if (!host.empty() && host.front() == '[') return true;
  return !host.empty() && std::all_of(host.begin(), host.end(), [](char ch) {
    return std::isdigit(static_cast<unsigned char>(ch)) || ch == '.';
  });
}

std::vector<std::string_view> Labels(std::string_view host) {
  std::vector<std::string_view> labels;
  std::size_t start = 0;
  while (start <= host.size()) {
    const auto dot = host.find('.', start);
    const auto end = dot == std::string_view::npos ? host.size() : dot;
    labels.push_back(host.substr(start, end - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return labels;
}

std::string Join(const std::vector<std::string_view>& labels,
                 std::size_t from) {
  std::string out;
  for (std::size_t i = from; i < labels.size(); ++i) {
    if (i > from) out += '.';
    out += labels[i];
  }
  return out;
}

}  // namespace

std::string CanonicalizeUrl(std::string_view raw) {
  UrlParts parts = Split(raw);
  if ((parts.scheme == "http" && parts.port == "80") ||
      (parts.scheme == "https" && parts.port == "443") || parts.port.empty()) {
    parts.port.clear();
  }
  while (!parts.path.empty() && parts.path.back() == '/') parts.path.pop_back();

  std::string query;
  std::string_view rest = parts.query;
  while (!rest.empty()) {
    const auto amp = rest.find('&');
    const std::string_view param = rest.substr(0, amp);
    const std::string name = Lower(param.substr(0, param.find('=')));
    if (!param.empty() && !name.starts_with("utm_")) {
      if (!query.empty()) query += '&';
      query += param;
    }
    if (amp == std::string_view::npos) break;
    rest.remove_prefix(amp + 1);
  }

  std::string out = parts.scheme + "://" + parts.host;
  if (!parts.port.empty()) out += ":" + parts.port;
  out += parts.path;
  if (!query.empty()) out += "?" + query;
  return out;
}

std::string HostOf(std::string_view url) { return Split(url).host; }

PublicSuffixList PublicSuffixList::Parse(std::string_view text) {
  PublicSuffixList list;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
    // Rules end at the first whitespace.
    line = line.substr(0, line.find_first_of(" \t\r"));
    if (line.empty() || line.starts_with("//")) continue;
    if (line.starts_with("!")) {
      list.exception_.insert(Lower(line.substr(1)));
    } else if (line.starts_with("*.")) {
      list.wildcard_.insert(Lower(line.substr(2)));
    } else {
      list.normal_.insert(Lower(line));
    }
  }
  return list;
}

const PublicSuffixList& PublicSuffixList::Bundled() {
  static const PublicSuffixList bundled = [] {
    PublicSuffixList list = Parse(kPublicSuffixRules);
    list.version_ = kPublicSuffixVersion;
    return list;
  }();
  return bundled;
}

std::size_t PublicSuffixList::SuffixLabels(std::string_view host) const {
  const auto labels = Labels(host);
  const std::size_t n = labels.size();
  std::size_t best = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string candidate = Join(labels, i);
    if (exception_.contains(candidate)) return n - i - 1;
    if (normal_.contains(candidate)) best = std::max(best, n - i);
    if (i > 0 && wildcard_.contains(candidate)) {
      best = std::max(best, n - i + 1);
    }
  }
  return std::min(best, n);
}

std::string PublicSuffixList::RegistrableDomain(std::string_view host) const {
  if (host.empty() || IsIpLiteral(host)) return std::string(host);
  const auto labels = Labels(host);
  const std::size_t suffix = SuffixLabels(host);
  if (suffix >= labels.size()) return std::string(host);
  return Join(labels, labels.size() - suffix - 1);
}

std::string SiteOf(std::string_view url) {
  return PublicSuffixList::Bundled().RegistrableDomain(HostOf(url));
}

std::string NormalizeDomain(std::string_view text) {
  std::string s = Lower(text);
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  s = s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
  if (const auto sep = s.find("://"); sep != std::string::npos) {
    s = s.substr(sep + 3);
  }
  s = s.substr(0, s.find_first_of("/?#"));
  if (const auto at = s.rfind('@'); at != std::string::npos) s = s.substr(at + 1);
  if (s.empty() || s.front() != '[') s = s.substr(0, s.find(':'));
  while (!s.empty() && s.back() == '.') s.pop_back();
  if (!ValidHost(s)) return {};
  return PublicSuffixList::Bundled().RegistrableDomain(s);
}

std::string RegistrableName(std::string_view domain) {
  const std::string host = Lower(domain);
  if (host.empty() || IsIpLiteral(host)) return host;
  const auto labels = Labels(host);
  const std::size_t suffix = PublicSuffixList::Bundled().SuffixLabels(host);
  if (suffix >= labels.size()) return std::string(labels.front());
  return std::string(labels[labels.size() - suffix - 1]);
}

}  // namespace newsrep
