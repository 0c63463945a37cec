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

#include <cmath>
#include <map>
#include <set>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "newsrep/error.hpp"
#include "newsrep/synth.hpp"
#include "newsrep/url.hpp"

using namespace newsrep;
using namespace newsrep::synth;

namespace {

GeneratorSpec Small() {
  GeneratorSpec spec;
  spec.n_fake_items = 40;
  spec.n_reliable_items = 160;
  spec.n_spreaders = 10;
  spec.n_honest = 40;
  spec.shares_per_user = 10;
  spec.n_fake_sites = 4;
  spec.n_reliable_sites = 8;
  spec.rng_seed = 5;
  return spec;
}

std::map<std::string, bool> FakeByUrl(const SyntheticData& data) {
  std::map<std::string, bool> out;
  for (std::size_t i = 0; i < data.truth.item_urls.size(); ++i) {
    out[data.truth.item_urls[i]] = data.truth.item_fake[i];
  }
  return out;
}

}  // namespace

TEST_CASE("generation is deterministic per seed") {
  const auto a = Generate(Small());
  const auto b = Generate(Small());
  CHECK(a.records == b.records);
  CHECK(a.seeds.fake == b.seeds.fake);
  auto other = Small();
  other.rng_seed = 6;
  CHECK(Generate(other).records != a.records);
}

TEST_CASE("edge counts and stream order") {
  const auto spec = Small();
  const auto data = Generate(spec);
  CHECK(data.records.size() ==
        static_cast<std::size_t>((spec.n_spreaders + spec.n_honest) * spec.shares_per_user));
  std::set<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < data.records.size(); ++i) {
    const auto& r = data.records[i];
    if (i > 0) CHECK(data.records[i - 1].timestamp <= r.timestamp);
    CHECK(r.timestamp >= spec.start_ts);
    CHECK(r.timestamp < spec.start_ts + spec.days * 86400);
    CHECK(pairs.emplace(r.user, r.url).second);
  }
}

TEST_CASE("affinity one means spreaders share only fake items") {
  auto spec = Small();
  spec.affinity = 1.0;
  const auto data = Generate(spec);
  const auto fake = FakeByUrl(data);
  for (const auto& r : data.records) {
    const bool spreader = r.user[0] == 's';
    CHECK(fake.at(r.url) == spreader);
  }
}

TEST_CASE("class exhaustion falls back to the other class") {
  auto spec = Small();
  spec.affinity = 1.0;
  spec.n_fake_items = 5;
  spec.n_fake_sites = 2;
  spec.seed_fraction = 0.0;
  const auto data = Generate(spec);
  CHECK(data.records.size() ==
        static_cast<std::size_t>((spec.n_spreaders + spec.n_honest) * spec.shares_per_user));
}

TEST_CASE("property: class-conditional share rates within 3 sigma") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto spec = Small();
    spec.rng_seed = seed;
    spec.affinity = 0.8;
    const auto data = Generate(spec);
    const auto fake = FakeByUrl(data);
    double n = 0, aligned = 0;
    for (const auto& r : data.records) {
      const bool spreader = r.user[0] == 's';
      n += 1;
      aligned += fake.at(r.url) == spreader;
    }
    const double sigma = std::sqrt(n * spec.affinity * (1 - spec.affinity));
    CHECK(std::abs(aligned - n * spec.affinity) <= 3 * sigma);
  }
}

TEST_CASE("seeds follow the fraction and multiplier") {
  const auto spec = Small();
  const auto data = Generate(spec);
  CHECK(data.seeds.fake.size() == 8);
  CHECK(data.seeds.nonfake.size() == 16);
  std::map<std::string, bool> fake;
  for (std::size_t i = 0; i < data.truth.item_urls.size(); ++i) {
    fake[CanonicalizeUrl(data.truth.item_urls[i])] = data.truth.item_fake[i];
  }
  for (const auto& url : data.seeds.fake) CHECK(fake.at(url));
  for (const auto& url : data.seeds.nonfake) CHECK_FALSE(fake.at(url));
}

TEST_CASE("infeasible specs are rejected") {
  auto spec = Small();
  spec.shares_per_user = 201;
  CHECK_THROWS_AS(Generate(spec), Error);
  spec = Small();
  spec.affinity = 1.5;
  CHECK_THROWS_AS(Validate(spec), Error);
  spec = Small();
  spec.n_honest = 0;
  CHECK_THROWS_AS(Validate(spec), Error);
}

TEST_CASE("seeds csv round-trip") {
  const auto data = Generate(Small());
  const std::string path = "test_synth_seeds.csv";
  {
    std::ofstream out(path);
    WriteSeedsCsv(out, data.seeds);
  }
  const auto loaded = LoadSeedsCsv(path);
  CHECK(loaded.fake == data.seeds.fake);
  CHECK(loaded.nonfake == data.seeds.nonfake);
  std::remove(path.c_str());

  std::ostringstream truth;
  WriteTruthCsv(truth, data);
  CHECK(truth.str().starts_with("url,site,label,seed\n"));
}
