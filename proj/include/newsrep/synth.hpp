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
#include <set>
#include <string>
#include <vector>

#include "newsrep/evaluation.hpp"
#include "newsrep/ingestion.hpp"

namespace newsrep::synth {

// Two user populations: spreaders share fake items with probability
// `affinity`, honest users share reliable items with that probability.
struct GeneratorSpec {
  int n_fake_items = 200;
  int n_reliable_items = 800;
  int n_spreaders = 40;
  int n_honest = 160;
  double affinity = 0.9;
  int shares_per_user = 25;
  double seed_fraction = 0.2;
  int sample_multiplier = 2;
  int n_fake_sites = 10;
  int n_reliable_sites = 40;
  std::int64_t start_ts = 1504224000;  // 2017-09-01T00:00:00Z
  int days = 30;
  bool with_text = true;
  std::uint64_t rng_seed = 1;
};

// Throws kInvalidSpec.
void Validate(const GeneratorSpec& spec);
GeneratorSpec LoadGeneratorSpec(const std::string& path);

struct PlantedTruth {
  std::vector<std::string> item_urls;
  std::vector<bool> item_fake;
  std::vector<std::string> users;
  std::vector<bool> user_spreader;
};

struct SyntheticData {
  std::vector<ingestion::ShareRecord> records;  // sorted by timestamp
  PlantedTruth truth;
  evaluation::SeedUrls seeds;
  std::set<std::string> fake_sites;
};

// Deterministic per rng_seed.
SyntheticData Generate(const GeneratorSpec& spec);

// url,site,label,seed
void WriteTruthCsv(std::ostream& out, const SyntheticData& data);
// url,label with label fake|nonfake
void WriteSeedsCsv(std::ostream& out, const evaluation::SeedUrls& seeds);
evaluation::SeedUrls LoadSeedsCsv(const std::string& path);

}  // namespace newsrep::synth
