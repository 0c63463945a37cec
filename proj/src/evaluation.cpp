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

#include "newsrep/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "newsrep/csv.hpp"
#include "newsrep/error.hpp"
#include "newsrep/url.hpp"

namespace newsrep::evaluation {

namespace {

std::string PercentCell(const Ratio& r) { return FormatMetric(r.Percent()); }

std::optional<std::string> SiteOfRecord(const ingestion::ShareRecord& r) {
  try {
    return SiteOf(CanonicalizeUrl(r.url));
  } catch (const Error&) {
    return std::nullopt;
  }
}

using UserCounts = std::unordered_map<std::string, double>;

// Per-user tweet counts for each site of interest.
std::unordered_map<std::string, UserCounts> CountTweets(
    std::span<const ingestion::ShareRecord> records,
    std::span<const std::string> sites) {
  std::unordered_map<std::string, UserCounts> counts;
  for (const auto& site : sites) counts.try_emplace(site);
  for (const auto& r : records) {
    if (r.vote) continue;
    const auto site = SiteOfRecord(r);
    if (!site) continue;
    if (auto it = counts.find(*site); it != counts.end()) {
      it->second[r.user] += 1.0;
    }
  }
  return counts;
}

double Cosine(const UserCounts& a, const UserCounts& b) {
  // Sum in user order so the value is independent of hash iteration order.
  auto sorted = [](const UserCounts& m) {
    std::vector<std::pair<std::string, double>> v(m.begin(), m.end());
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto va = sorted(a);
  const auto vb = sorted(b);
  double cross = 0.0;
  double norm_a = 0.0;
  double norm_b = 0.0;
  for (const auto& [user, t] : va) {
    norm_a += t * t;
    if (auto it = b.find(user); it != b.end()) cross += t * it->second;
  }
  for (const auto& [user, t] : vb) norm_b += t * t;
  if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
  return cross / std::sqrt(norm_a * norm_b);
}

}  // namespace

FlagTable FlagsFromGraph(const ReputationGraph& graph,
                         std::span<const harmonic::Classification> labels) {
  FlagTable flags;
  for (std::uint32_t i = 0; i < labels.size(); ++i) {
    flags[graph.Key(NodeId{i, NodeKind::kItem})] =
        labels[i].label == harmonic::Label::kFake;
  }
  return flags;
}

FlagTable LoadFlagsCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kCorruptInput, path + ": missing header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = SplitCsvLine(line);
  const auto column = [&](const char* name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw Error(ErrorCode::kCorruptInput,
                  path + ": no '" + name + "' column");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t url_col = column("url");
  const std::size_t label_col = column("label");
  FlagTable flags;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = SplitCsvLine(line);
    const auto where = path + ":" + std::to_string(line_no) + ": ";
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kCorruptInput, where + "wrong field count");
    }
    const std::string& label = fields[label_col];
    if (label != "fake" && label != "reliable") {
      throw Error(ErrorCode::kCorruptInput, where + "bad label '" + label + "'");
    }
    flags[fields[url_col]] = label == "fake";
  }
  return flags;
}

std::map<std::string, std::string> SitesOf(const FlagTable& flags) {
  std::map<std::string, std::string> out;
  for (const auto& [url, _] : flags) out.emplace(url, SiteOf(url));
  return out;
}

std::optional<double> Ratio::Fraction() const {
  if (total == 0) return std::nullopt;
  return static_cast<double>(hits) / static_cast<double>(total);
}

std::optional<double> Ratio::Percent() const {
  auto f = Fraction();
  if (!f) return std::nullopt;
  return *f * 100.0;
}

std::string FormatMetric(const std::optional<double>& value) {
  return value ? FormatDouble(*value) : "undefined";
}

RecallReport ComputeRecall(const FlagTable& flags,
                           const std::set<std::string>& fake_seed_sites,
                           std::span<const std::string> test_urls) {
  RecallReport report;
  for (const auto& url : test_urls) {
    auto it = flags.find(url);
    if (it == flags.end()) {
      throw Error(ErrorCode::kInvalidInput, "no classification for " + url);
    }
    if (fake_seed_sites.contains(SiteOf(url))) {
      ++report.fake.total;
      report.fake.hits += it->second;
    } else {
      ++report.nonfake.total;
      report.nonfake.hits += !it->second;
    }
  }
  return report;
}

SiteFlagReport SiteFlagRates(const FlagTable& flags,
                             const std::map<std::string, std::string>& url_site,
                             std::size_t min_urls) {
  std::map<std::string, SiteFlag> by_site;
  for (const auto& [url, flagged] : flags) {
    auto site = url_site.find(url);
    if (site == url_site.end()) continue;
    SiteFlag& s = by_site[site->second];
    s.site = site->second;
    ++s.total;
    s.flagged += flagged;
  }
  SiteFlagReport report;
  for (auto& [site, s] : by_site) {
    if (s.total < min_urls) continue;
    s.rate_pct = 100.0 * static_cast<double>(s.flagged) /
                 static_cast<double>(s.total);
    report.sites.push_back(std::move(s));
  }
  return report;
}

CrossListReport CrossListDetection(
    const FlagTable& flags, const std::set<std::string>& list_a,
    const std::set<std::string>& list_b,
    const std::map<std::string, std::string>& url_site, std::size_t min_urls,
    double flag_pct) {
  std::set<std::string> diff;
  std::set_difference(list_b.begin(), list_b.end(), list_a.begin(),
                      list_a.end(), std::inserter(diff, diff.end()));
  struct Counts {
    std::size_t total = 0;
    std::size_t flagged = 0;
  };
  std::map<std::string, Counts> per_site;
  CrossListReport report;
  for (const auto& [url, flagged] : flags) {
    auto site = url_site.find(url);
    if (site == url_site.end() || !diff.contains(site->second)) continue;
    Counts& c = per_site[site->second];
    ++c.total;
    c.flagged += flagged;
    ++report.direct_url.total;
    report.direct_url.hits += flagged;
  }
  report.diff_urls = report.direct_url.total;
  report.suspicious_url.total = report.diff_urls;
  for (const auto& [site, c] : per_site) {
    if (c.total < min_urls) continue;
    ++report.suspicious_site.total;
    const bool suspicious = 100.0 * static_cast<double>(c.flagged) >
                            flag_pct * static_cast<double>(c.total);
    if (suspicious) {
      ++report.suspicious_site.hits;
      report.suspicious_url.hits += c.total;
      report.suspicious_sites.push_back(site);
    }
  }
  return report;
}

double SiteCorrelation(std::span<const ingestion::ShareRecord> records,
                       const std::string& site_a, const std::string& site_b) {
  const std::string sites[] = {site_a, site_b};
  const auto counts = CountTweets(records, sites);
  return Cosine(counts.at(site_a), counts.at(site_b));
}

std::vector<double> CorrelationMatrix(
    std::span<const ingestion::ShareRecord> records,
    std::span<const std::string> sites) {
  const auto counts = CountTweets(records, sites);
  const std::size_t n = sites.size();
  std::vector<double> matrix(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      matrix[i * n + j] = matrix[j * n + i] =
          Cosine(counts.at(sites[i]), counts.at(sites[j]));
    }
  }
  return matrix;
}

double AgreementFraction(std::span<const double> before,
                         std::span<const double> after, double threshold) {
  if (before.size() != after.size()) {
    throw Error(ErrorCode::kInvalidInput, "agreement vectors differ in size");
  }
  if (before.empty()) return 1.0;
  std::size_t within = 0;
  for (std::size_t i = 0; i < before.size(); ++i) {
    within += std::abs(before[i] - after[i]) < threshold;
  }
  return static_cast<double>(within) / static_cast<double>(before.size());
}

namespace {

CategoryAgreement Pool(const AgreementReport& report,
                       CategoryAgreement IntervalAgreement::*category) {
  CategoryAgreement total;
  for (const auto& i : report.intervals) {
    total.count += (i.*category).count;
    total.within += (i.*category).within;
  }
  return total;
}

}  // namespace

CategoryAgreement AgreementReport::PooledNew() const {
  return Pool(*this, &IntervalAgreement::new_items);
}

CategoryAgreement AgreementReport::PooledTweeted() const {
  return Pool(*this, &IntervalAgreement::tweeted_items);
}

CategoryAgreement AgreementReport::PooledAll() const {
  return Pool(*this, &IntervalAgreement::all_items);
}

namespace {

// Graph plus seed bookkeeping for stream replay.
class Replayer {
 public:
  Replayer(const SeedUrls& seeds, const ReplayOptions& options)
      : seeds_(seeds), options_(options), graph_(options.config.c) {}

  ReputationGraph& graph() { return graph_; }

  // Inserts one record. Returns the edges (new or vote-replaced) that need
  // online propagation.
  std::vector<Edge> Insert(const ingestion::ShareRecord& record) {
    std::vector<Edge> fresh;
    const std::string url = CanonicalizeUrl(record.url);
    const std::size_t before = graph_.ItemCount();
    const NodeId item = graph_.AddItem(url);
    if (graph_.ItemCount() != before) {
      new_items_.insert(item.index);
      if (seeds_.fake.contains(url)) {
        harmonic::SeedItem(graph_, item, SeedMark::kFake);
      } else if (seeds_.nonfake.contains(url)) {
        harmonic::SeedItem(graph_, item, SeedMark::kNonFake);
      }
      const std::string site = SiteOf(url);
      if (options_.graph.editorial_edges && !site.empty() &&
          !options_.graph.aggregator_sites.contains(site)) {
        const NodeId s = graph_.AddSource(site, NodeKind::kSite);
        graph_.AddEdge(item, s, 1, EdgeKind::kEditorial, record.timestamp);
        fresh.push_back({item, s, 1, EdgeKind::kEditorial, record.timestamp});
      }
    }
    const NodeId user = graph_.AddSource(record.user, NodeKind::kUser);
    const EdgeKind kind = record.vote ? EdgeKind::kVote : EdgeKind::kTweet;
    const int polarity = record.vote ? *record.vote : 1;
    if (kind == EdgeKind::kTweet) tweeted_.insert(item.index);
    if (graph_.AddEdge(item, user, polarity, kind, record.timestamp) ==
        InsertResult::kInserted) {
      fresh.push_back({item, user, static_cast<std::int8_t>(polarity), kind,
                       record.timestamp});
    }
    ++edges_;
    return fresh;
  }

  harmonic::SeedLabels Labels() const {
    harmonic::SeedLabels labels;
    for (std::uint32_t i = 0; i < graph_.ItemCount(); ++i) {
      const NodeId id{i, NodeKind::kItem};
      const auto& url = graph_.Key(id);
      if (seeds_.fake.contains(url)) {
        labels.fake_items.push_back(id);
      } else if (seeds_.nonfake.contains(url)) {
        labels.nonfake_items.push_back(id);
      }
    }
    return labels;
  }

  void Refresh() { harmonic::RunFixpoint(graph_, Labels(), options_.config); }

  // Compares the current (online) state with a fresh fixpoint, which then
  // becomes the current state.
  IntervalAgreement Close(std::int64_t start, std::int64_t end) {
    const auto items = graph_.States(NodeKind::kItem);
    std::vector<double> online(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) online[i] = items[i].q;
    Refresh();

    IntervalAgreement out;
    out.start = start;
    out.end = end;
    out.edges = edges_;
    for (std::uint32_t i = 0; i < items.size(); ++i) {
      if (graph_.IsSeed(NodeId{i, NodeKind::kItem})) continue;
      const bool within =
          std::abs(online[i] - items[i].q) < options_.threshold;
      auto count = [&](CategoryAgreement& c) {
        ++c.count;
        c.within += within;
      };
      count(out.all_items);
      if (new_items_.contains(i)) count(out.new_items);
      if (tweeted_.contains(i) || new_items_.contains(i)) {
        count(out.tweeted_items);
      }
    }
    new_items_.clear();
    tweeted_.clear();
    edges_ = 0;
    return out;
  }

  void ResetIntervalTracking() {
    new_items_.clear();
    tweeted_.clear();
    edges_ = 0;
  }

 private:
  const SeedUrls& seeds_;
  const ReplayOptions& options_;
  ReputationGraph graph_;
  std::unordered_set<std::uint32_t> new_items_;
  std::unordered_set<std::uint32_t> tweeted_;
  std::size_t edges_ = 0;
};

}  // namespace

AgreementReport ReplayAgreement(std::span<const ingestion::ShareRecord> stream,
                                const SeedUrls& seeds,
                                const ReplayOptions& options) {
  harmonic::Validate(options.config);
  if (options.interval_seconds < 0) {
    throw Error(ErrorCode::kInvalidInput, "interval must be non-negative");
  }
  for (std::size_t i = 1; i < stream.size(); ++i) {
    if (stream[i].timestamp < stream[i - 1].timestamp) {
      throw Error(ErrorCode::kInvalidStream,
                  "stream is not sorted by timestamp at record " +
                      std::to_string(i));
    }
  }

  AgreementReport report;
  Replayer replay(seeds, options);
  std::size_t next = 0;
  while (next < stream.size() && stream[next].timestamp < options.warmup_end) {
    replay.Insert(stream[next++]);
  }
  replay.Refresh();
  replay.ResetIntervalTracking();
  if (next == stream.size()) return report;

  if (options.interval_seconds == 0) {
    for (; next < stream.size(); ++next) {
      replay.Insert(stream[next]);
      replay.Refresh();
      report.intervals.push_back(
          replay.Close(stream[next].timestamp, stream[next].timestamp));
    }
    return report;
  }

  std::int64_t start = options.warmup_end > 0 ? options.warmup_end
                                              : stream[next].timestamp;
  std::int64_t end = start + options.interval_seconds;
  for (; next < stream.size(); ++next) {
    const auto& record = stream[next];
    while (record.timestamp >= end) {
      report.intervals.push_back(replay.Close(start, end));
      start = end;
      end += options.interval_seconds;
    }
    for (const Edge& edge : replay.Insert(record)) {
      harmonic::IngestEdgeOnline(replay.graph(), edge, options.config);
    }
  }
  report.intervals.push_back(replay.Close(start, end));
  return report;
}

void WriteRecallCsv(std::ostream& out, const RecallReport& report) {
  out << "class,total,correct,recall_pct\n"
      << "fake," << report.fake.total << ',' << report.fake.hits << ','
      << PercentCell(report.fake) << '\n'
      << "nonfake," << report.nonfake.total << ',' << report.nonfake.hits
      << ',' << PercentCell(report.nonfake) << '\n';
}

void WriteSiteFlagsCsv(std::ostream& out, const SiteFlagReport& report) {
  out << "site,total_urls,flagged_urls,flag_rate_pct\n";
  for (const auto& s : report.sites) {
    out << CsvField(s.site) << ',' << s.total << ',' << s.flagged << ','
        << FormatDouble(s.rate_pct) << '\n';
  }
}

void WriteCrossListCsv(std::ostream& out, const CrossListReport& report) {
  out << "metric,hits,total,pct\n"
      << "direct_url," << report.direct_url.hits << ','
      << report.direct_url.total << ',' << PercentCell(report.direct_url)
      << '\n'
      << "suspicious_site," << report.suspicious_site.hits << ','
      << report.suspicious_site.total << ','
      << PercentCell(report.suspicious_site) << '\n'
      << "suspicious_url," << report.suspicious_url.hits << ','
      << report.suspicious_url.total << ','
      << PercentCell(report.suspicious_url) << '\n';
}

void WriteAgreementCsv(std::ostream& out, const AgreementReport& report) {
  out << "interval_start,interval_end,edges,new_items,new_agreement,"
         "tweeted_items,tweeted_agreement,all_items,all_agreement\n";
  for (const auto& i : report.intervals) {
    out << i.start << ',' << i.end << ',' << i.edges << ','
        << i.new_items.count << ',' << FormatDouble(i.new_items.Fraction())
        << ',' << i.tweeted_items.count << ','
        << FormatDouble(i.tweeted_items.Fraction()) << ','
        << i.all_items.count << ',' << FormatDouble(i.all_items.Fraction())
        << '\n';
  }
}

void WriteCorrelationCsv(std::ostream& out, std::span<const std::string> sites,
                         std::span<const double> matrix) {
  out << "site";
  for (const auto& s : sites) out << ',' << CsvField(s);
  out << '\n';
  for (std::size_t i = 0; i < sites.size(); ++i) {
    out << CsvField(sites[i]);
    for (std::size_t j = 0; j < sites.size(); ++j) {
      out << ',' << FormatDouble(matrix[i * sites.size() + j]);
    }
    out << '\n';
  }
}

std::string RecallSummary(const RecallReport& report) {
  auto pct = [](const Ratio& r) {
    auto p = r.Percent();
    return p ? FormatPercent(*p) + "%" : std::string("undefined");
  };
  std::ostringstream out;
  out << "fake recall:     " << pct(report.fake) << " (" << report.fake.hits
      << "/" << report.fake.total << ")\n"
      << "non-fake recall: " << pct(report.nonfake) << " ("
      << report.nonfake.hits << "/" << report.nonfake.total << ")\n";
  return out.str();
}

std::string CrossListSummary(const CrossListReport& report) {
  auto pct = [](const Ratio& r) {
    auto p = r.Percent();
    return p ? FormatPercent(*p) + "%" : std::string("undefined");
  };
  std::ostringstream out;
  out << "URLs in diff:          " << report.diff_urls << '\n'
      << "direct URL detection:  " << pct(report.direct_url) << '\n'
      << "suspicious sites:      " << pct(report.suspicious_site) << " ("
      << report.suspicious_site.hits << "/" << report.suspicious_site.total
      << ")\n"
      << "suspicious URLs:       " << pct(report.suspicious_url) << '\n';
  return out.str();
}

std::string AgreementSummary(const AgreementReport& report) {
  std::ostringstream out;
  if (report.intervals.empty()) {
    out << "no intervals replayed\n";
    return out.str();
  }
  const auto& first = report.intervals.front();
  auto cell = [](const CategoryAgreement& c) {
    if (c.count == 0) return std::string("n/a (no items)");
    return FormatPercent(100.0 * c.Fraction()) + "% of " +
           std::to_string(c.count);
  };
  auto row = [&](const char* name, const CategoryAgreement& c,
                 const CategoryAgreement& pooled) {
    out << name << "first interval " << cell(c) << ", all intervals "
        << cell(pooled) << '\n';
  };
  out << "intervals: " << report.intervals.size() << '\n';
  row("new items:     ", first.new_items, report.PooledNew());
  row("tweeted items: ", first.tweeted_items, report.PooledTweeted());
  row("all items:     ", first.all_items, report.PooledAll());
  return out.str();
}

}  // namespace newsrep::evaluation
