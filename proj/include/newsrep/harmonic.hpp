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
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "newsrep/graph.hpp"

namespace newsrep::harmonic {

// Items whose label is fixed before propagation.
struct SeedLabels {
  std::vector<NodeId> fake_items;
  std::vector<NodeId> nonfake_items;
};

struct EngineConfig {
  double c = kDefaultRegularization;
  int iterations = 3;
  // Online propagation depth and the smallest change worth propagating.
  int propagation_depth = 1;
  double propagation_threshold = 0.02;
  bool include_editorial = false;
  bool include_votes = true;
  // Workers for the batch phases; results do not depend on it.
  unsigned threads = 1;

  bool Includes(EdgeKind kind) const {
    return kind == EdgeKind::kTweet ||
           (kind == EdgeKind::kEditorial && include_editorial) ||
           (kind == EdgeKind::kVote && include_votes);
  }
};

// Throws kInvalidInput when a field is out of range.
void Validate(const EngineConfig& config);

// Reads `key = value` lines; unknown keys are rejected. Missing keys keep
// their defaults.
EngineConfig LoadEngineConfig(const std::string& path);

enum class Label { kFake, kReliable };

std::string_view LabelName(Label label);

// Fake iff q < 0; q == 0 is reliable.
inline Label LabelFor(double q) { return q < 0.0 ? Label::kFake : Label::kReliable; }

struct Classification {
  Label label = Label::kReliable;
  double reputation = 0.0;
};

// Marks seeds and resets every node: seeds to q = +/-1, everything else to the
// fresh state (c, c, 0). Throws kInvalidLabels on overlap, duplicates, or
// non-item ids.
void Seed(ReputationGraph& graph, const SeedLabels& labels);

// Marks a single item as a seed (or clears it) and sets its state to match.
// Used when seed items first appear during stream replay.
void SeedItem(ReputationGraph& graph, NodeId item, SeedMark mark);

// Seeds the graph, then runs config.iterations rounds of (source phase, item
// phase). Returns one Classification per item, indexed by item index.
std::vector<Classification> RunFixpoint(ReputationGraph& graph,
                                        const SeedLabels& labels,
                                        const EngineConfig& config);

// Same iterations without re-seeding; the graph must already be seeded.
void IterateFixpoint(ReputationGraph& graph, const EngineConfig& config);

std::vector<Classification> Classify(const ReputationGraph& graph);

struct OnlineUpdate {
  std::vector<NodeId> flipped;  // items whose label changed, ascending
  std::size_t touched = 0;      // node updates performed
};

// Propagates the contribution of an already-inserted edge through the bounded,
// thresholded local update. Seed items are never written. Edges of a kind the
// config excludes are ignored. Throws kInconsistentState when the edge is not
// in the graph.
OnlineUpdate IngestEdgeOnline(ReputationGraph& graph, const Edge& edge,
                              const EngineConfig& config);

// Throws kNotFound for unknown urls.
Classification Reputation(const ReputationGraph& graph, std::string_view url);

// Fake seeds: every candidate item whose site is in fake_sites. Non-fake
// seeds: sample_multiplier times as many, drawn without replacement from the
// remaining candidates. An empty candidate span means every item.
SeedLabels SelectTrainingLabels(const ReputationGraph& graph,
                                const std::unordered_set<std::string>& fake_sites,
                                int sample_multiplier, std::uint64_t rng_seed,
                                std::span<const NodeId> candidates = {});

// url,q,label,degree
void WriteClassificationsCsv(std::ostream& out, const ReputationGraph& graph,
                             std::span<const Classification> classifications);

}  // namespace newsrep::harmonic
