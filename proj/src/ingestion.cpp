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

#include "newsrep/ingestion.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>

#include <nlohmann/json.hpp>

#include "newsrep/error.hpp"
#include "newsrep/parallel.hpp"
#include "newsrep/url.hpp"

namespace newsrep::ingestion {

namespace {

using nlohmann::json;

constexpr std::size_t kMaxReportedErrors = 10;

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) {
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  return out;
}

bool IsWordChar(char ch) {
  const auto u = static_cast<unsigned char>(ch);
  return std::isalnum(u) || u >= 0x80;
}

bool IsBlank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char ch) {
    return std::isspace(static_cast<unsigned char>(ch));
  });
}

std::optional<std::string> OptionalString(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw Error(ErrorCode::kCorruptInput,
                std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

void CheckMalformedFraction(const LoadStats& stats, const LoadOptions& options,
                            const std::string& path) {
  if (stats.lines == 0) return;
  const double fraction =
      static_cast<double>(stats.malformed) / static_cast<double>(stats.lines);
  if (fraction > options.max_malformed_fraction) {
    std::string message = path + ": " + std::to_string(stats.malformed) +
                          " of " + std::to_string(stats.lines) +
                          " lines malformed";
    if (!stats.errors.empty()) message += " (first: " + stats.errors.front() + ")";
    throw Error(ErrorCode::kCorruptInput, message);
  }
}

void NoteMalformed(LoadStats& stats, std::size_t line_no,
                   const std::string& why) {
  ++stats.malformed;
  if (stats.errors.size() < kMaxReportedErrors) {
    stats.errors.push_back("line " + std::to_string(line_no) + ": " + why);
  }
}

}  // namespace

ShareRecord ParseRecordLine(std::string_view line) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kCorruptInput, std::string("not JSON: ") + e.what());
  }
  if (!obj.is_object()) throw Error(ErrorCode::kCorruptInput, "not an object");

  ShareRecord record;
  auto user = OptionalString(obj, "user");
  auto url = OptionalString(obj, "url");
  if (!user || user->empty()) {
    throw Error(ErrorCode::kCorruptInput, "missing user");
  }
  if (!url || url->empty()) throw Error(ErrorCode::kCorruptInput, "missing url");
  record.user = std::move(*user);
  record.url = std::move(*url);

  auto ts = obj.find("ts");
  if (ts == obj.end() || !ts->is_number_integer()) {
    throw Error(ErrorCode::kCorruptInput, "ts must be an integer");
  }
  record.timestamp = ts->get<std::int64_t>();
  if (record.timestamp <= 0) {
    throw Error(ErrorCode::kCorruptInput, "ts must be positive");
  }
  record.title = OptionalString(obj, "title");
  record.description = OptionalString(obj, "description");
  if (auto vote = obj.find("vote"); vote != obj.end() && !vote->is_null()) {
    if (!vote->is_number_integer() ||
        (vote->get<int>() != 1 && vote->get<int>() != -1)) {
      throw Error(ErrorCode::kCorruptInput, "vote must be 1 or -1");
    }
    record.vote = vote->get<int>();
  }
  try {
    CanonicalizeUrl(record.url);
  } catch (const Error& e) {
    throw Error(ErrorCode::kCorruptInput, e.what());
  }
  return record;
}

std::string FormatRecordLine(const ShareRecord& record) {
  json obj;
  obj["user"] = record.user;
  obj["url"] = record.url;
  obj["ts"] = record.timestamp;
  if (record.title) obj["title"] = *record.title;
  if (record.description) obj["description"] = *record.description;
  if (record.vote) obj["vote"] = *record.vote;
  return obj.dump();
}

LoadStats ForEachRecord(const std::string& path,
                        const std::function<void(ShareRecord&&)>& sink,
                        const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  LoadStats stats;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    ++stats.lines;
    try {
      sink(ParseRecordLine(line));
      ++stats.records;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kCorruptInput) throw;
      NoteMalformed(stats, line_no, e.what());
    }
  }
  if (in.bad()) throw Error(ErrorCode::kIo, "read error on " + path);
  CheckMalformedFraction(stats, options, path);
  return stats;
}

std::vector<ShareRecord> LoadRecords(const std::string& path,
                                     const LoadOptions& options,
                                     LoadStats* stats) {
  std::vector<ShareRecord> records;
  LoadStats s = ForEachRecord(
      path, [&](ShareRecord&& r) { records.push_back(std::move(r)); },
      options);
  if (stats) *stats = std::move(s);
  return records;
}

std::vector<ShareRecord> LoadRecordFiles(std::span<const std::string> paths,
                                         unsigned threads,
                                         const LoadOptions& options) {
  std::vector<std::vector<ShareRecord>> parts(paths.size());
  std::vector<std::optional<Error>> failures(paths.size());
  ParallelFor(paths.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        parts[i] = LoadRecords(paths[i], options);
      } catch (const Error& e) {
        failures[i] = e;
      }
    }
  });
  for (auto& failure : failures) {
    if (failure) throw *failure;
  }
  std::vector<ShareRecord> merged;
  for (auto& part : parts) {
    std::move(part.begin(), part.end(), std::back_inserter(merged));
  }
  return merged;
}

void WriteRecords(std::ostream& out, std::span<const ShareRecord> records) {
  for (const ShareRecord& r : records) out << FormatRecordLine(r) << '\n';
}

SeedSiteList LoadSeedList(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  SeedSiteList list;
  auto slash = path.find_last_of('/');
  list.name = path.substr(slash == std::string::npos ? 0 : slash + 1);
  if (auto dot = list.name.rfind('.'); dot != std::string::npos && dot > 0) {
    list.name.resize(dot);
  }
  LoadStats stats;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = line.substr(0, line.find('#'));
    if (IsBlank(line)) continue;
    ++stats.lines;
    std::string domain = NormalizeDomain(line);
    if (domain.empty()) {
      NoteMalformed(stats, line_no, "no domain in '" + line + "'");
      continue;
    }
    ++stats.records;
    list.domains.insert(std::move(domain));
  }
  CheckMalformedFraction(stats, options, path);
  return list;
}

std::map<std::string, std::vector<std::string>> LoadAliases(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::map<std::string, std::vector<std::string>> aliases;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsBlank(line) || line.starts_with("#")) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    const std::string domain = NormalizeDomain(fields.front());
    if (domain.empty()) continue;
    auto& list = aliases[domain];
    for (std::size_t i = 1; i < fields.size(); ++i) {
      if (!fields[i].empty()) list.push_back(fields[i]);
    }
  }
  return aliases;
}

std::vector<std::string> SiteMentionPatterns(
    std::string_view domain, std::span<const std::string> aliases) {
  std::vector<std::string> patterns;
  auto add = [&](std::string_view p) {
    std::string lower = Lower(p);
    if (!lower.empty()) patterns.push_back(std::move(lower));
  };
  add(domain);
  if (!domain.empty()) add(RegistrableName(domain));
  for (const auto& alias : aliases) add(alias);
  // Longest first so "new york times" wins over "times".
  std::sort(patterns.begin(), patterns.end(),
            [](const std::string& a, const std::string& b) {
              return a.size() != b.size() ? a.size() > b.size() : a < b;
            });
  patterns.erase(std::unique(patterns.begin(), patterns.end()), patterns.end());
  return patterns;
}

std::string ScrubSiteMentions(std::string_view text, std::string_view domain,
                              std::span<const std::string> aliases) {
  const auto patterns = SiteMentionPatterns(domain, aliases);
  std::string current(text);
  bool changed = true;
  while (changed) {
    changed = false;
    const std::string lower = Lower(current);
    std::string next;
    next.reserve(current.size());
    std::size_t i = 0;
    while (i < current.size()) {
      bool removed = false;
      if (i == 0 || !IsWordChar(lower[i - 1])) {
        for (const auto& p : patterns) {
          if (lower.compare(i, p.size(), p) == 0) {
            const std::size_t end = i + p.size();
            if (end == lower.size() || !IsWordChar(lower[end])) {
              i = end;
              removed = true;
              changed = true;
              break;
            }
          }
        }
      }
      if (!removed) next += current[i++];
    }
    current = std::move(next);
  }
  return current;
}

std::vector<std::string> UrlBundle::Sharers() const {
  std::vector<std::string> users;
  for (const Share& s : shares) {
    if (!s.vote) users.push_back(s.user);
  }
  std::sort(users.begin(), users.end());
  users.erase(std::unique(users.begin(), users.end()), users.end());
  return users;
}

std::vector<UrlBundle> BundleRecords(std::span<const ShareRecord> records,
                                     std::size_t* skipped) {
  struct Text {
    std::int64_t timestamp;
    std::string value;
  };
  struct Acc {
    UrlBundle bundle;
    std::optional<Text> title;
    std::optional<Text> description;
  };
  // Title and description come from the earliest record carrying one; ties
  // break on the text itself so the choice is order-independent.
  auto offer = [](std::optional<Text>& slot, std::int64_t ts,
                  const std::optional<std::string>& value) {
    if (!value || value->empty()) return;
    if (!slot || ts < slot->timestamp ||
        (ts == slot->timestamp && *value < slot->value)) {
      slot = Text{ts, *value};
    }
  };

  std::map<std::string, Acc> by_url;
  std::size_t bad = 0;
  for (const ShareRecord& r : records) {
    std::string url;
    try {
      url = CanonicalizeUrl(r.url);
    } catch (const Error&) {
      ++bad;
      continue;
    }
    auto [it, inserted] = by_url.try_emplace(url);
    Acc& acc = it->second;
    if (inserted) {
      acc.bundle.url = url;
      acc.bundle.site = SiteOf(url);
      acc.bundle.first_seen = r.timestamp;
    }
    acc.bundle.first_seen = std::min(acc.bundle.first_seen, r.timestamp);
    acc.bundle.shares.push_back(Share{r.user, r.timestamp, r.vote});
    offer(acc.title, r.timestamp, r.title);
    offer(acc.description, r.timestamp, r.description);
  }
  if (skipped) *skipped = bad;

  std::vector<UrlBundle> out;
  out.reserve(by_url.size());
  for (auto& [url, acc] : by_url) {
    std::sort(acc.bundle.shares.begin(), acc.bundle.shares.end());
    if (acc.title) acc.bundle.title = std::move(acc.title->value);
    if (acc.description) {
      acc.bundle.description = std::move(acc.description->value);
    }
    out.push_back(std::move(acc.bundle));
  }
  return out;
}

std::int64_t ParseIsoDate(std::string_view text) {
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  char tail = 0;
  const std::string s(text);
  if (s.size() != 10 ||
      std::sscanf(s.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3) {
    throw Error(ErrorCode::kInvalidSpec, "expected YYYY-MM-DD, got '" + s + "'");
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{m},
                                        std::chrono::day{d}};
  if (!ymd.ok()) throw Error(ErrorCode::kInvalidSpec, "no such date: " + s);
  const auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
  return static_cast<std::int64_t>(days) * kSecondsPerDay;
}

std::string FormatIsoDate(std::int64_t epoch_seconds) {
  const auto day = std::chrono::floor<std::chrono::days>(
      std::chrono::sys_seconds{std::chrono::seconds{epoch_seconds}});
  const std::chrono::year_month_day ymd{day};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

void Validate(const SplitSpec& spec) {
  if (spec.train_first_seen_start > spec.train_first_seen_end) {
    throw Error(ErrorCode::kInvalidSpec, "train range ends before it starts");
  }
  if (spec.test_first_seen_start > spec.test_first_seen_end) {
    throw Error(ErrorCode::kInvalidSpec, "test range ends before it starts");
  }
  if (spec.train_first_seen_end >= spec.test_first_seen_start) {
    throw Error(ErrorCode::kInvalidSpec,
                "train range must precede the test range");
  }
  if (spec.train_tweet_cutoff < spec.train_first_seen_end) {
    throw Error(ErrorCode::kInvalidSpec,
                "train cutoff must not precede the last train day");
  }
}

SplitResult TemporalSplit(std::span<const ShareRecord> records,
                          const SplitSpec& spec) {
  Validate(spec);
  auto day_of = [](std::int64_t ts) {
    return ts >= 0 ? ts / kSecondsPerDay : (ts - kSecondsPerDay + 1) / kSecondsPerDay;
  };
  auto in_days = [&](std::int64_t ts, std::int64_t start, std::int64_t end) {
    const auto day = day_of(ts);
    return day >= day_of(start) && day <= day_of(end);
  };
  auto keep_alternate = [&](const Share& s, std::int64_t range_start) {
    return !spec.alternate_days ||
           (day_of(s.timestamp) - day_of(range_start)) % 2 == 0;
  };

  SplitResult result;
  for (UrlBundle& bundle : BundleRecords(records)) {
    if (in_days(bundle.first_seen, spec.train_first_seen_start,
                spec.train_first_seen_end)) {
      std::erase_if(bundle.shares, [&](const Share& s) {
        return s.timestamp >= spec.train_tweet_cutoff ||
               !keep_alternate(s, spec.train_first_seen_start);
      });
      if (!bundle.shares.empty()) result.train.push_back(std::move(bundle));
    } else if (in_days(bundle.first_seen, spec.test_first_seen_start,
                       spec.test_first_seen_end)) {
      std::erase_if(bundle.shares, [&](const Share& s) {
        return !keep_alternate(s, spec.test_first_seen_start);
      });
      if (!bundle.shares.empty()) result.test.push_back(std::move(bundle));
    }
  }
  return result;
}

std::size_t AddBundlesToGraph(ReputationGraph& graph,
                              std::span<const UrlBundle> bundles,
                              const GraphBuildOptions& options) {
  std::size_t inserted = 0;
  for (const UrlBundle& bundle : bundles) {
    const NodeId item = graph.AddItem(bundle.url);
    if (options.editorial_edges && !bundle.site.empty() &&
        !options.aggregator_sites.contains(bundle.site)) {
      const NodeId site = graph.AddSource(bundle.site, NodeKind::kSite);
      if (graph.AddEdge(item, site, 1, EdgeKind::kEditorial,
                        bundle.first_seen) == InsertResult::kInserted) {
        ++inserted;
      }
    }
    for (const Share& share : bundle.shares) {
      const NodeId user = graph.AddSource(share.user, NodeKind::kUser);
      const bool is_vote = share.vote.has_value();
      const auto result =
          graph.AddEdge(item, user, is_vote ? *share.vote : 1,
                        is_vote ? EdgeKind::kVote : EdgeKind::kTweet,
                        share.timestamp);
      if (result == InsertResult::kInserted) ++inserted;
    }
  }
  return inserted;
}

}  // namespace newsrep::ingestion
