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
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "newsrep/harmonic.hpp"
#include "newsrep/ingestion.hpp"

namespace newsrep::evaluation {

// url -> true when the classifier labeled it fake (low reputation).
using FlagTable = std::map<std::string, bool>;

FlagTable FlagsFromGraph(const ReputationGraph& graph,
                         std::span<const harmonic::Classification> labels);
// Reads any CSV with `url` and `label` columns (label fake|reliable), such
// as a classification or prediction table. Throws kCorruptInput.
FlagTable LoadFlagsCsv(const std::string& path);
// url -> registered domain for every url in the table.
std::map<std::string, std::string> SitesOf(const FlagTable& flags);

// hits / total. Percent() is nullopt for an empty denominator, which is how
// an undefined metric is reported.
struct Ratio {
  std::size_t hits = 0;
  std::size_t total = 0;

  std::optional<double> Fraction() const;
  std::optional<double> Percent() const;
};

std::string FormatMetric(const std::optional<double>& value);

struct RecallReport {
  Ratio fake;     // seed-list URLs labeled fake
  Ratio nonfake;  // other URLs labeled reliable
};

// Throws kInvalidInput when a test URL has no classification.
RecallReport ComputeRecall(const FlagTable& flags,
                           const std::set<std::string>& fake_seed_sites,
                           std::span<const std::string> test_urls);

struct SiteFlag {
  std::string site;
  std::size_t total = 0;
  std::size_t flagged = 0;
  double rate_pct = 0.0;
};

struct SiteFlagReport {
  std::vector<SiteFlag> sites;  // ascending by site
};

SiteFlagReport SiteFlagRates(const FlagTable& flags,
                             const std::map<std::string, std::string>& url_site,
                             std::size_t min_urls);

struct CrossListReport {
  std::size_t diff_urls = 0;
  Ratio direct_url;       // diff URLs flagged
  Ratio suspicious_site;  // diff sites with >= min_urls URLs that are suspicious
  Ratio suspicious_url;   // diff URLs whose site is suspicious
  std::vector<std::string> suspicious_sites;
};

inline constexpr std::size_t kSuspiciousMinUrls = 20;
inline constexpr double kSuspiciousFlagPct = 5.0;

// Scores discovery of list_b-only sites by a classifier seeded with list_a.
// A site is suspicious when it has at least min_urls URLs and strictly more
// than flag_pct percent of them are flagged.
CrossListReport CrossListDetection(
    const FlagTable& flags, const std::set<std::string>& list_a,
    const std::set<std::string>& list_b,
    const std::map<std::string, std::string>& url_site,
    std::size_t min_urls = kSuspiciousMinUrls,
    double flag_pct = kSuspiciousFlagPct);

// Cosine of the per-user tweet-count vectors of two sites:
// T_ab / sqrt(T_a * T_b). Votes are not tweets and are ignored. Zero when
// either site has no tweets.
double SiteCorrelation(std::span<const ingestion::ShareRecord> records,
                       const std::string& site_a, const std::string& site_b);

// Full symmetric matrix over `sites`, row-major.
std::vector<double> CorrelationMatrix(
    std::span<const ingestion::ShareRecord> records,
    std::span<const std::string> sites);

// Fraction of positions where |before - after| < threshold; 1 when empty.
double AgreementFraction(std::span<const double> before,
                         std::span<const double> after, double threshold);

struct CategoryAgreement {
  std::size_t count = 0;
  std::size_t within = 0;

  // Vacuously 1 for an empty category.
  double Fraction() const {
    return count == 0 ? 1.0
                      : static_cast<double>(within) / static_cast<double>(count);
  }
};

struct IntervalAgreement {
  std::int64_t start = 0;
  std::int64_t end = 0;
  std::size_t edges = 0;
  CategoryAgreement new_items;
  CategoryAgreement tweeted_items;  // includes new items
  CategoryAgreement all_items;
};

struct AgreementReport {
  std::vector<IntervalAgreement> intervals;

  // Counts summed over all intervals.
  CategoryAgreement PooledNew() const;
  CategoryAgreement PooledTweeted() const;
  CategoryAgreement PooledAll() const;
};

struct SeedUrls {
  std::set<std::string> fake;
  std::set<std::string> nonfake;
};

struct ReplayOptions {
  harmonic::EngineConfig config;
  ingestion::GraphBuildOptions graph;
  // Records before this time build the initial graph and fixpoint.
  std::int64_t warmup_end = 0;
  // 0 refreshes the state to the fixpoint after every edge instead of
  // propagating online.
  std::int64_t interval_seconds = ingestion::kSecondsPerDay;
  double threshold = 0.1;
};

// Replays a timestamp-sorted stream through online propagation. At each
// interval boundary the online q of every non-seed item is compared with a
// fresh fixpoint, which then replaces the online state. Throws
// kInvalidStream on unsorted input.
AgreementReport ReplayAgreement(std::span<const ingestion::ShareRecord> stream,
                                const SeedUrls& seeds,
                                const ReplayOptions& options);

void WriteRecallCsv(std::ostream& out, const RecallReport& report);
void WriteSiteFlagsCsv(std::ostream& out, const SiteFlagReport& report);
void WriteCrossListCsv(std::ostream& out, const CrossListReport& report);
void WriteAgreementCsv(std::ostream& out, const AgreementReport& report);
void WriteCorrelationCsv(std::ostream& out, std::span<const std::string> sites,
                         std::span<const double> matrix);

std::string RecallSummary(const RecallReport& report);
std::string CrossListSummary(const CrossListReport& report);
std::string AgreementSummary(const AgreementReport& report);

}  // namespace newsrep::evaluation
