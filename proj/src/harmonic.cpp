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

#include "newsrep/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include "newsrep/config.hpp"
#include "newsrep/csv.hpp"
#include "newsrep/error.hpp"
#include "newsrep/parallel.hpp"
#include "newsrep/rng.hpp"
#include "newsrep/url.hpp"

namespace newsrep::harmonic {

void Validate(const EngineConfig& config) {
  if (!(config.c > 0.0) || !std::isfinite(config.c)) {
    throw Error(ErrorCode::kInvalidInput, "c must be positive");
  }
  if (config.iterations < 1) {
    throw Error(ErrorCode::kInvalidInput, "iterations must be positive");
  }
  if (config.propagation_depth < 0) {
    throw Error(ErrorCode::kInvalidInput,
                "propagation_depth must be non-negative");
  }
  if (!(config.propagation_threshold > 0.0)) {
    throw Error(ErrorCode::kInvalidInput,
                "propagation_threshold must be positive");
  }
  if (config.threads < 1) {
    throw Error(ErrorCode::kInvalidInput, "threads must be at least 1");
  }
}

EngineConfig LoadEngineConfig(const std::string& path) {
  const auto file = KeyValueConfig::Load(path);
  file.RejectUnknown({"c", "iterations", "propagation_depth",
                      "propagation_threshold", "include_editorial",
                      "include_votes", "threads"});
  EngineConfig config;
  if (auto v = file.GetDouble("c")) config.c = *v;
  if (auto v = file.GetInt("iterations")) config.iterations = static_cast<int>(*v);
  if (auto v = file.GetInt("propagation_depth")) {
    config.propagation_depth = static_cast<int>(*v);
  }
  if (auto v = file.GetDouble("propagation_threshold")) {
    config.propagation_threshold = *v;
  }
  if (auto v = file.GetBool("include_editorial")) config.include_editorial = *v;
  if (auto v = file.GetBool("include_votes")) config.include_votes = *v;
  if (auto v = file.GetInt("threads")) {
    if (*v < 1) throw Error(ErrorCode::kInvalidInput, "threads must be >= 1");
    config.threads = static_cast<unsigned>(*v);
  }
  Validate(config);
  return config;
}

std::string_view LabelName(Label label) {
  return label == Label::kFake ? "fake" : "reliable";
}

void Seed(ReputationGraph& graph, const SeedLabels& labels) {
  const std::size_t n = graph.ItemCount();
  std::vector<SeedMark> marks(n, SeedMark::kNone);
  auto mark = [&](const std::vector<NodeId>& ids, SeedMark value) {
    for (NodeId id : ids) {
      if (id.kind != NodeKind::kItem || id.index >= n) {
        throw Error(ErrorCode::kInvalidLabels,
                    "seed label refers to a node that is not an item");
      }
      if (marks[id.index] != SeedMark::kNone) {
        throw Error(ErrorCode::kInvalidLabels,
                    marks[id.index] == value
                        ? "item seeded twice: " + graph.Key(id)
                        : "item is both fake and non-fake: " + graph.Key(id));
      }
      marks[id.index] = value;
    }
  };
  mark(labels.fake_items, SeedMark::kFake);
  mark(labels.nonfake_items, SeedMark::kNonFake);

  for (std::uint32_t i = 0; i < n; ++i) {
    const NodeId id{i, NodeKind::kItem};
    SeedItem(graph, id, marks[i]);
  }
  const double c = graph.regularization();
  for (NodeKind kind : {NodeKind::kUser, NodeKind::kSite}) {
    for (BetaState& s : graph.States(kind)) s = BetaState::Fresh(c);
  }
}

void SeedItem(ReputationGraph& graph, NodeId item, SeedMark mark) {
  graph.SetSeed(item, mark);
  const double c = graph.regularization();
  BetaState& s = graph.MutableState(item);
  switch (mark) {
    case SeedMark::kFake: s = {c, 1.0 + c, -1.0}; break;
    case SeedMark::kNonFake: s = {1.0 + c, c, 1.0}; break;
    case SeedMark::kNone: s = BetaState::Fresh(c); break;
  }
}

namespace {

// Recomputes every node of `target` from the current q's of the opposite side.
// Each node is written by exactly one worker and the per-node summation order
// is the adjacency order, so the result does not depend on the worker count.
void RunPhase(ReputationGraph& graph, NodeKind target,
              const EngineConfig& config) {
  const auto adjacency = graph.Adjacency(target);
  auto states = graph.States(target);
  const auto items = graph.States(NodeKind::kItem);
  const auto users = graph.States(NodeKind::kUser);
  const auto sites = graph.States(NodeKind::kSite);
  const double c = config.c;
  const bool item_phase = target == NodeKind::kItem;
  const ReputationGraph& view = graph;

  ParallelFor(states.size(), config.threads, [&](std::size_t begin,
                                                 std::size_t end) {
    for (std::size_t v = begin; v < end; ++v) {
      if (item_phase &&
          view.Seed(NodeId{static_cast<std::uint32_t>(v), NodeKind::kItem}) !=
              SeedMark::kNone) {
        continue;
      }
      double positive = 0.0;
      double negative = 0.0;
      for (const Incidence& inc : adjacency[v]) {
        if (!config.Includes(inc.kind)) continue;
        double other_q;
        switch (inc.other_kind) {
          case NodeKind::kItem: other_q = items[inc.other].q; break;
          case NodeKind::kUser: other_q = users[inc.other].q; break;
          default: other_q = sites[inc.other].q; break;
        }
        const double contribution = inc.polarity * other_q;
        if (contribution > 0.0) {
          positive += contribution;
        } else if (contribution < 0.0) {
          negative -= contribution;
        }
      }
      const double alpha = c + positive;
      const double beta = c + negative;
      states[v] = {alpha, beta, BetaState::Reputation(alpha, beta)};
    }
  });
}

}  // namespace

void IterateFixpoint(ReputationGraph& graph, const EngineConfig& config) {
  Validate(config);
  if (config.c != graph.regularization()) {
    throw Error(ErrorCode::kInvalidInput,
                "engine c differs from the graph's regularization constant");
  }
  for (int it = 0; it < config.iterations; ++it) {
    RunPhase(graph, NodeKind::kUser, config);
    if (config.include_editorial) RunPhase(graph, NodeKind::kSite, config);
    RunPhase(graph, NodeKind::kItem, config);
  }
}

std::vector<Classification> RunFixpoint(ReputationGraph& graph,
                                        const SeedLabels& labels,
                                        const EngineConfig& config) {
  Validate(config);
  Seed(graph, labels);
  IterateFixpoint(graph, config);
  return Classify(graph);
}

std::vector<Classification> Classify(const ReputationGraph& graph) {
  const auto items = graph.States(NodeKind::kItem);
  std::vector<Classification> out;
  out.reserve(items.size());
  for (const BetaState& s : items) out.push_back({LabelFor(s.q), s.q});
  return out;
}

OnlineUpdate IngestEdgeOnline(ReputationGraph& graph, const Edge& edge,
                              const EngineConfig& config) {
  Validate(config);
  const auto found = graph.FindEdge(edge.item, edge.source, edge.kind);
  if (!found) {
    throw Error(ErrorCode::kInconsistentState,
                "edge is not present in the graph");
  }
  OnlineUpdate result;
  if (!config.Includes(edge.kind)) return result;
  const Edge& stored = graph.EdgeAt(*found);

  struct Pending {
    NodeId node;
    double delta;
    int depth;
  };
  // Explicit depth-first worklist; children are pushed in reverse so they pop
  // in adjacency order, matching the recursive formulation.
  std::vector<Pending> stack;
  stack.push_back({stored.item, stored.polarity * graph.State(stored.source).q,
                   config.propagation_depth});
  std::unordered_map<std::uint32_t, Label> initial_labels;

  while (!stack.empty()) {
    const Pending work = stack.back();
    stack.pop_back();
    if (work.node.kind == NodeKind::kItem) {
      if (graph.IsSeed(work.node)) continue;
      initial_labels.try_emplace(work.node.index,
                                 LabelFor(graph.State(work.node).q));
    }
    BetaState& s = graph.MutableState(work.node);
    if (work.delta > 0.0) {
      s.alpha += work.delta;
    } else if (work.delta < 0.0) {
      s.beta -= work.delta;
    }
    const double updated = BetaState::Reputation(s.alpha, s.beta);
    const double change = updated - s.q;
    s.q = updated;
    ++result.touched;

    if (work.depth > 0 && std::abs(change) >= config.propagation_threshold) {
      const auto neighbors = graph.Neighbors(work.node);
      for (auto it = neighbors.rbegin(); it != neighbors.rend(); ++it) {
        if (!config.Includes(it->kind)) continue;
        stack.push_back({NodeId{it->other, it->other_kind},
                         change * it->polarity, work.depth - 1});
      }
    }
  }

  for (const auto& [index, before] : initial_labels) {
    const NodeId id{index, NodeKind::kItem};
    if (LabelFor(graph.State(id).q) != before) result.flipped.push_back(id);
  }
  std::sort(result.flipped.begin(), result.flipped.end());
  return result;
}

Classification Reputation(const ReputationGraph& graph, std::string_view url) {
  const auto id = graph.FindItem(url);
  if (!id) {
    throw Error(ErrorCode::kNotFound, "unknown url: " + std::string(url));
  }
  const double q = graph.State(*id).q;
  return {LabelFor(q), q};
}

SeedLabels SelectTrainingLabels(
    const ReputationGraph& graph,
    const std::unordered_set<std::string>& fake_sites, int sample_multiplier,
    std::uint64_t rng_seed, std::span<const NodeId> candidates) {
  if (sample_multiplier < 1) {
    throw Error(ErrorCode::kInvalidInput,
                "sample_multiplier must be a positive integer");
  }
  std::vector<NodeId> pool;
  if (candidates.empty()) {
    pool.reserve(graph.ItemCount());
    for (std::uint32_t i = 0; i < graph.ItemCount(); ++i) {
      pool.push_back({i, NodeKind::kItem});
    }
  } else {
    pool.assign(candidates.begin(), candidates.end());
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  }

  SeedLabels labels;
  std::vector<NodeId> rest;
  for (NodeId id : pool) {
    if (id.kind != NodeKind::kItem) {
      throw Error(ErrorCode::kInvalidInput, "training candidate is not an item");
    }
    if (fake_sites.contains(SiteOf(graph.Key(id)))) {
      labels.fake_items.push_back(id);
    } else {
      rest.push_back(id);
    }
  }
  const std::size_t wanted =
      labels.fake_items.size() * static_cast<std::size_t>(sample_multiplier);
  if (rest.size() < wanted) {
    throw Error(ErrorCode::kInsufficientCandidates,
                "need " + std::to_string(wanted) + " non-fake candidates, have " +
                    std::to_string(rest.size()));
  }
  // Partial Fisher-Yates: the first `wanted` slots become the sample.
  Rng rng(rng_seed);
  for (std::size_t i = 0; i < wanted; ++i) {
    std::swap(rest[i], rest[i + rng.Below(rest.size() - i)]);
  }
  labels.nonfake_items.assign(rest.begin(), rest.begin() + wanted);
  std::sort(labels.nonfake_items.begin(), labels.nonfake_items.end());
  return labels;
}

void WriteClassificationsCsv(std::ostream& out, const ReputationGraph& graph,
                             std::span<const Classification> classifications) {
  out << "url,q,label,degree\n";
  for (std::uint32_t i = 0; i < classifications.size(); ++i) {
    const NodeId id{i, NodeKind::kItem};
    out << CsvField(graph.Key(id)) << ','
        << FormatDouble(classifications[i].reputation) << ','
        << LabelName(classifications[i].label) << ',' << graph.Degree(id)
        << '\n';
  }
}

}  // namespace newsrep::harmonic
