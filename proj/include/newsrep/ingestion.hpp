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
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "newsrep/graph.hpp"

namespace newsrep::ingestion {

inline constexpr std::int64_t kSecondsPerDay = 86400;

// One tweet-like event. `vote`, when set, turns the record into an explicit
// vote (+1 reliable, -1 fake) instead of a share.
struct ShareRecord {
  std::string user;
  std::string url;
  std::int64_t timestamp = 0;
  std::optional<std::string> title;
  std::optional<std::string> description;
  std::optional<int> vote;

  friend bool operator==(const ShareRecord&, const ShareRecord&) = default;
};

// Parses one JSONL line: {"user", "url", "ts", "title"?, "description"?,
// "vote"?}. Throws kCorruptInput describing the problem.
ShareRecord ParseRecordLine(std::string_view line);
std::string FormatRecordLine(const ShareRecord& record);

struct LoadOptions {
  // Reject the file when malformed lines exceed this fraction of all lines.
  double max_malformed_fraction = 0.05;
};

struct LoadStats {
  std::size_t lines = 0;  // non-blank lines
  std::size_t records = 0;
  std::size_t malformed = 0;
  std::vector<std::string> errors;  // first few, "line N: why"
};

// Streams records one at a time; memory does not grow with the file. Throws
// kIo when unreadable and kCorruptInput when the malformed fraction is
// exceeded (checked once the whole file has been read).
LoadStats ForEachRecord(const std::string& path,
                        const std::function<void(ShareRecord&&)>& sink,
                        const LoadOptions& options = {});

std::vector<ShareRecord> LoadRecords(const std::string& path,
                                     const LoadOptions& options = {},
                                     LoadStats* stats = nullptr);

// Parses several files on up to `threads` workers and concatenates them in
// argument order.
std::vector<ShareRecord> LoadRecordFiles(std::span<const std::string> paths,
                                         unsigned threads,
                                         const LoadOptions& options = {});

void WriteRecords(std::ostream& out, std::span<const ShareRecord> records);

struct SeedSiteList {
  std::string name;
  std::set<std::string> domains;

  bool Contains(std::string_view domain) const {
    return domains.contains(std::string(domain));
  }
};

// One domain per line; blank lines and `#` comments are skipped. Entries are
// reduced to their registered domain. Lines that carry no host are counted
// as malformed under the same policy as record files.
SeedSiteList LoadSeedList(const std::string& path,
                          const LoadOptions& options = {});

// `domain<TAB>alias<TAB>alias...` per line.
std::map<std::string, std::vector<std::string>> LoadAliases(
    const std::string& path);

// Case-insensitive removal of whole-word occurrences of the domain, its
// registrable name ("nytimes" for "nytimes.com") and every alias. The removal
// repeats until nothing matches, so the result is a fixpoint.
std::string ScrubSiteMentions(std::string_view text, std::string_view domain,
                              std::span<const std::string> aliases);

// The lowercased strings ScrubSiteMentions removes for a site.
std::vector<std::string> SiteMentionPatterns(
    std::string_view domain, std::span<const std::string> aliases);

struct Share {
  std::string user;
  std::int64_t timestamp = 0;
  std::optional<int> vote;

  friend bool operator==(const Share&, const Share&) = default;
  friend auto operator<=>(const Share&, const Share&) = default;
};

// Everything known about one canonical URL.
struct UrlBundle {
  std::string url;
  std::string site;
  std::int64_t first_seen = 0;
  std::vector<Share> shares;  // sorted by (user, timestamp)
  std::string title;
  std::string description;

  // Distinct users with at least one non-vote share, ascending.
  std::vector<std::string> Sharers() const;

  friend bool operator==(const UrlBundle&, const UrlBundle&) = default;
};

// Groups records by canonical URL. The result is sorted by url and does not
// depend on record order. Records whose URL fails to canonicalize are skipped
// and counted in `skipped`.
std::vector<UrlBundle> BundleRecords(std::span<const ShareRecord> records,
                                     std::size_t* skipped = nullptr);

// "YYYY-MM-DD" at 00:00 UTC, in epoch seconds. Throws kInvalidSpec.
std::int64_t ParseIsoDate(std::string_view text);
std::string FormatIsoDate(std::int64_t epoch_seconds);

// Date ranges are inclusive whole UTC days, given as the epoch second of the
// day's midnight.
struct SplitSpec {
  std::int64_t train_first_seen_start = 0;
  std::int64_t train_first_seen_end = 0;
  std::int64_t train_tweet_cutoff = 0;  // train keeps shares strictly before
  std::int64_t test_first_seen_start = 0;
  std::int64_t test_first_seen_end = 0;
  // Keep only shares on even-numbered days counted from each range's start.
  bool alternate_days = false;
};

void Validate(const SplitSpec& spec);

struct SplitResult {
  std::vector<UrlBundle> train;
  std::vector<UrlBundle> test;
};

// Membership is decided by each URL's first-seen day. Train bundles keep only
// shares before the cutoff; test bundles keep all shares.
SplitResult TemporalSplit(std::span<const ShareRecord> records,
                          const SplitSpec& spec);

struct GraphBuildOptions {
  // Add an editorial edge from each item's site, except for these
  // aggregator sites.
  bool editorial_edges = false;
  std::set<std::string> aggregator_sites = {"youtube.com", "instagram.com",
                                            "facebook.com", "twitter.com",
                                            "reddit.com"};
};

// Inserts items, users, sites and edges for the given bundles. Returns the
// number of edges inserted (duplicates excluded).
std::size_t AddBundlesToGraph(ReputationGraph& graph,
                              std::span<const UrlBundle> bundles,
                              const GraphBuildOptions& options = {});

}  // namespace newsrep::ingestion
