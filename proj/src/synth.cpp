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

#include "newsrep/synth.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include "newsrep/config.hpp"
#include "newsrep/csv.hpp"
#include "newsrep/error.hpp"
#include "newsrep/rng.hpp"
#include "newsrep/url.hpp"

namespace newsrep::synth {

namespace {

constexpr const char* kSharedWords[] = {
    "report", "new", "today", "people", "state", "year", "week", "after",
    "says", "city", "update", "plan", "officials", "local", "story", "video"};
constexpr const char* kFakeWords[] = {
    "shocking", "exposed", "secret", "truth", "hoax", "banned", "cover",
    "miracle", "destroyed", "outrage", "they", "hiding"};
constexpr const char* kReliableWords[] = {
    "analysis", "study", "court", "senate", "economy", "data", "research",
    "election", "budget", "policy", "science", "interview"};

template <std::size_t N>
const char* Pick(Rng& rng, const char* const (&words)[N]) {
  return words[rng.Below(N)];
}

std::string MakeText(Rng& rng, bool fake, int words, const std::string& name) {
  std::string text;
  for (int w = 0; w < words; ++w) {
    if (!text.empty()) text += ' ';
    if (rng.Bernoulli(0.5)) {
      text += fake ? Pick(rng, kFakeWords) : Pick(rng, kReliableWords);
    } else {
      text += Pick(rng, kSharedWords);
    }
  }
  // Some titles mention their own site, which featurization must scrub.
  if (rng.Bernoulli(0.3)) text += " | " + name;
  return text;
}

}  // namespace

void Validate(const GeneratorSpec& spec) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kInvalidSpec, what);
  };
  require(spec.n_fake_items > 0 && spec.n_reliable_items > 0,
          "item counts must be positive");
  require(spec.n_spreaders > 0 && spec.n_honest > 0,
          "user counts must be positive");
  require(spec.shares_per_user > 0, "shares_per_user must be positive");
  require(spec.affinity >= 0.0 && spec.affinity <= 1.0,
          "affinity must be a probability");
  require(spec.seed_fraction >= 0.0 && spec.seed_fraction <= 1.0,
          "seed_fraction must be a probability");
  require(spec.sample_multiplier >= 0, "sample_multiplier must be >= 0");
  require(spec.n_fake_sites > 0 && spec.n_reliable_sites > 0,
          "site counts must be positive");
  require(spec.n_fake_sites <= spec.n_fake_items &&
              spec.n_reliable_sites <= spec.n_reliable_items,
          "more sites than items");
  require(spec.days > 0 && spec.start_ts > 0, "date range must be positive");
  require(spec.shares_per_user <= spec.n_fake_items + spec.n_reliable_items,
          "shares_per_user exceeds the number of items");
  const auto n_seed_fake = static_cast<long long>(spec.seed_fraction *
                                                  spec.n_fake_items);
  require(n_seed_fake * spec.sample_multiplier <= spec.n_reliable_items,
          "not enough reliable items for the requested seed sampling");
}

GeneratorSpec LoadGeneratorSpec(const std::string& path) {
  const auto file = KeyValueConfig::Load(path);
  file.RejectUnknown({"n_fake_items", "n_reliable_items", "n_spreaders",
                      "n_honest", "affinity", "shares_per_user",
                      "seed_fraction", "sample_multiplier", "n_fake_sites",
                      "n_reliable_sites", "start_ts", "start_date", "days",
                      "with_text", "rng_seed"});
  GeneratorSpec spec;
  auto int_field = [&](const char* key, int& out) {
    if (auto v = file.GetInt(key)) out = static_cast<int>(*v);
  };
  int_field("n_fake_items", spec.n_fake_items);
  int_field("n_reliable_items", spec.n_reliable_items);
  int_field("n_spreaders", spec.n_spreaders);
  int_field("n_honest", spec.n_honest);
  int_field("shares_per_user", spec.shares_per_user);
  int_field("sample_multiplier", spec.sample_multiplier);
  int_field("n_fake_sites", spec.n_fake_sites);
  int_field("n_reliable_sites", spec.n_reliable_sites);
  int_field("days", spec.days);
  if (auto v = file.GetDouble("affinity")) spec.affinity = *v;
  if (auto v = file.GetDouble("seed_fraction")) spec.seed_fraction = *v;
  if (auto v = file.GetInt("start_ts")) spec.start_ts = *v;
  if (auto v = file.GetString("start_date")) {
    spec.start_ts = ingestion::ParseIsoDate(*v);
  }
  if (auto v = file.GetBool("with_text")) spec.with_text = *v;
  if (auto v = file.GetInt("rng_seed")) spec.rng_seed = static_cast<std::uint64_t>(*v);
  Validate(spec);
  return spec;
}

SyntheticData Generate(const GeneratorSpec& spec) {
  Validate(spec);
  Rng rng(spec.rng_seed);
  SyntheticData data;
  PlantedTruth& truth = data.truth;

  const int n_items = spec.n_fake_items + spec.n_reliable_items;
  std::vector<std::string> site_of_item(n_items);
  std::vector<std::string> titles(n_items);
  std::vector<std::string> descriptions(n_items);
  for (int i = 0; i < n_items; ++i) {
    const bool fake = i < spec.n_fake_items;
    const int local = fake ? i : i - spec.n_fake_items;
    const std::string name =
        fake ? "hoaxwire" + std::to_string(local % spec.n_fake_sites)
             : "chronicle" + std::to_string(local % spec.n_reliable_sites);
    site_of_item[i] = name + ".com";
    truth.item_urls.push_back("https://www." + site_of_item[i] + "/story/" +
                              std::to_string(local));
    truth.item_fake.push_back(fake);
    if (fake) data.fake_sites.insert(site_of_item[i]);
    if (spec.with_text) {
      titles[i] = MakeText(rng, fake, 4, name);
      descriptions[i] = MakeText(rng, fake, 8, name);
    }
  }

  const int n_users = spec.n_spreaders + spec.n_honest;
  const std::int64_t span = static_cast<std::int64_t>(spec.days) *
                            ingestion::kSecondsPerDay;
  struct Pending {
    ingestion::ShareRecord record;
    std::size_t order;
  };
  std::vector<Pending> pending;
  pending.reserve(static_cast<std::size_t>(n_users) * spec.shares_per_user);
  std::vector<int> fake_pool(spec.n_fake_items);
  std::vector<int> reliable_pool(spec.n_reliable_items);
  for (int u = 0; u < n_users; ++u) {
    const bool spreader = u < spec.n_spreaders;
    const std::string handle = (spreader ? "s" : "h") + std::to_string(u);
    truth.users.push_back(handle);
    truth.user_spreader.push_back(spreader);
    // Each user's remaining candidates per class; drawing swaps the chosen
    // item to the tail so a user never shares the same item twice.
    for (int i = 0; i < spec.n_fake_items; ++i) fake_pool[i] = i;
    for (int i = 0; i < spec.n_reliable_items; ++i) {
      reliable_pool[i] = spec.n_fake_items + i;
    }
    std::size_t fake_left = fake_pool.size();
    std::size_t reliable_left = reliable_pool.size();
    for (int k = 0; k < spec.shares_per_user; ++k) {
      const bool aligned = rng.Bernoulli(spec.affinity);
      bool pick_fake = spreader ? aligned : !aligned;
      if (pick_fake && fake_left == 0) pick_fake = false;
      if (!pick_fake && reliable_left == 0) pick_fake = true;
      auto& pool = pick_fake ? fake_pool : reliable_pool;
      std::size_t& left = pick_fake ? fake_left : reliable_left;
      const std::size_t slot = rng.Below(left);
      const int item = pool[slot];
      std::swap(pool[slot], pool[--left]);

      ingestion::ShareRecord r;
      r.user = handle;
      r.url = truth.item_urls[item];
      r.timestamp = spec.start_ts + static_cast<std::int64_t>(
                                        rng.Below(static_cast<std::uint64_t>(span)));
      if (spec.with_text) {
        r.title = titles[item];
        r.description = descriptions[item];
      }
      pending.push_back({std::move(r), pending.size()});
    }
  }
  std::stable_sort(pending.begin(), pending.end(),
                   [](const Pending& a, const Pending& b) {
                     return a.record.timestamp < b.record.timestamp;
                   });
  data.records.reserve(pending.size());
  for (auto& p : pending) data.records.push_back(std::move(p.record));

  // Seeds: a fraction of the fake items plus sample_multiplier times as many
  // reliable ones. URLs are canonicalized so they match graph keys.
  std::vector<int> fake_ids(spec.n_fake_items);
  for (int i = 0; i < spec.n_fake_items; ++i) fake_ids[i] = i;
  std::vector<int> reliable_ids(spec.n_reliable_items);
  for (int i = 0; i < spec.n_reliable_items; ++i) {
    reliable_ids[i] = spec.n_fake_items + i;
  }
  rng.Shuffle(std::span<int>(fake_ids));
  rng.Shuffle(std::span<int>(reliable_ids));
  const auto n_seed_fake =
      static_cast<std::size_t>(spec.seed_fraction * spec.n_fake_items);
  const std::size_t n_seed_reliable =
      n_seed_fake * static_cast<std::size_t>(spec.sample_multiplier);
  for (std::size_t i = 0; i < n_seed_fake; ++i) {
    data.seeds.fake.insert(CanonicalizeUrl(truth.item_urls[fake_ids[i]]));
  }
  for (std::size_t i = 0; i < n_seed_reliable; ++i) {
    data.seeds.nonfake.insert(CanonicalizeUrl(truth.item_urls[reliable_ids[i]]));
  }
  return data;
}

void WriteTruthCsv(std::ostream& out, const SyntheticData& data) {
  out << "url,site,label,seed\n";
  const auto& t = data.truth;
  for (std::size_t i = 0; i < t.item_urls.size(); ++i) {
    const std::string url = CanonicalizeUrl(t.item_urls[i]);
    const char* seed = data.seeds.fake.contains(url)      ? "fake"
                       : data.seeds.nonfake.contains(url) ? "nonfake"
                                                          : "";
    out << CsvField(url) << ',' << SiteOf(url) << ','
        << (t.item_fake[i] ? "fake" : "reliable") << ',' << seed << '\n';
  }
}

void WriteSeedsCsv(std::ostream& out, const evaluation::SeedUrls& seeds) {
  out << "url,label\n";
  for (const auto& url : seeds.fake) out << CsvField(url) << ",fake\n";
  for (const auto& url : seeds.nonfake) out << CsvField(url) << ",nonfake\n";
}

evaluation::SeedUrls LoadSeedsCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  evaluation::SeedUrls seeds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = SplitCsvLine(line);
    if (line_no == 1 && !fields.empty() && fields[0] == "url") continue;
    if (fields.size() != 2) {
      throw Error(ErrorCode::kCorruptInput,
                  path + ":" + std::to_string(line_no) + ": expected url,label");
    }
    std::string url;
    try {
      url = CanonicalizeUrl(fields[0]);
    } catch (const Error& e) {
      throw Error(ErrorCode::kCorruptInput,
                  path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (fields[1] == "fake") {
      seeds.fake.insert(url);
    } else if (fields[1] == "nonfake" || fields[1] == "reliable") {
      seeds.nonfake.insert(url);
    } else {
      throw Error(ErrorCode::kCorruptInput,
                  path + ":" + std::to_string(line_no) + ": unknown label '" +
                      fields[1] + "'");
    }
  }
  for (const auto& url : seeds.fake) {
    if (seeds.nonfake.contains(url)) {
      throw Error(ErrorCode::kInvalidLabels,
                  "url is seeded both fake and non-fake: " + url);
    }
  }
  return seeds;
}

}  // namespace newsrep::synth
