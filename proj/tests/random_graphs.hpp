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

// Hand-rolled generators shared by the property tests and the acceptance
// binary.

#include <cmath>
#include <string>
#include <vector>

#include "newsrep/graph.hpp"
#include "newsrep/harmonic.hpp"
#include "newsrep/rng.hpp"

namespace newsrep::testing {

struct RandomGraph {
  ReputationGraph graph;
  harmonic::SeedLabels labels;
};

struct RandomGraphShape {
  std::size_t max_items = 30;
  std::size_t max_users = 20;
  std::size_t max_edges = 200;
  bool votes = false;
  bool sites = false;
};

inline RandomGraph MakeRandomGraph(Rng& rng, const RandomGraphShape& shape) {
  RandomGraph out;
  const std::size_t n_items = 1 + rng.Below(shape.max_items);
  const std::size_t n_users = 1 + rng.Below(shape.max_users);
  for (std::size_t i = 0; i < n_items; ++i) {
    out.graph.AddItem("https://x" + std::to_string(i % 7) + ".test/" +
                      std::to_string(i));
  }
  for (std::size_t u = 0; u < n_users; ++u) {
    out.graph.AddSource("u" + std::to_string(u), NodeKind::kUser);
  }
  if (shape.sites) {
    for (int s = 0; s < 7; ++s) {
      out.graph.AddSource("x" + std::to_string(s) + ".test", NodeKind::kSite);
    }
  }
  const std::size_t n_edges = rng.Below(shape.max_edges + 1);
  for (std::size_t e = 0; e < n_edges; ++e) {
    const NodeId item{static_cast<std::uint32_t>(rng.Below(n_items)),
                      NodeKind::kItem};
    const std::uint64_t roll = rng.Below(10);
    if (shape.sites && roll == 0) {
      out.graph.AddEdge(item, NodeId{item.index % 7, NodeKind::kSite}, 1,
                        EdgeKind::kEditorial, static_cast<std::int64_t>(e));
      continue;
    }
    const NodeId user{static_cast<std::uint32_t>(rng.Below(n_users)),
                      NodeKind::kUser};
    if (shape.votes && roll < 3) {
      out.graph.AddEdge(item, user, rng.Bernoulli(0.5) ? 1 : -1,
                        EdgeKind::kVote, static_cast<std::int64_t>(e));
    } else {
      out.graph.AddEdge(item, user, 1, EdgeKind::kTweet,
                        static_cast<std::int64_t>(e));
    }
  }
  for (std::uint32_t i = 0; i < n_items; ++i) {
    const std::uint64_t roll = rng.Below(5);
    if (roll == 0) out.labels.fake_items.push_back({i, NodeKind::kItem});
    if (roll == 1) out.labels.nonfake_items.push_back({i, NodeKind::kItem});
  }
  return out;
}

// Direct transcription of the update equations with no shared code paths:
// string-keyed maps, edges re-scanned per node.
struct NaiveResult {
  std::vector<double> item_q;
  std::vector<double> user_q;
};

inline NaiveResult NaiveFixpoint(const ReputationGraph& graph,
                                 const harmonic::SeedLabels& labels, double c,
                                 int iterations) {
  const std::size_t n_items = graph.ItemCount();
  const std::size_t n_users = graph.UserCount();
  std::vector<double> q_item(n_items, 0.0);
  std::vector<int> fixed(n_items, 0);
  for (NodeId id : labels.fake_items) {
    q_item[id.index] = -1.0;
    fixed[id.index] = 1;
  }
  for (NodeId id : labels.nonfake_items) {
    q_item[id.index] = 1.0;
    fixed[id.index] = 1;
  }
  std::vector<double> q_user(n_users, 0.0);
  const auto edges = graph.Edges();
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t u = 0; u < n_users; ++u) {
      double a = c;
      double b = c;
      for (const Edge& e : edges) {
        if (e.kind == EdgeKind::kEditorial) continue;
        if (e.source.index != u || e.source.kind != NodeKind::kUser) continue;
        const double t = e.polarity * q_item[e.item.index];
        if (t > 0) a += t;
        if (t < 0) b -= t;
      }
      q_user[u] = (a - b) / (a + b);
    }
    for (std::size_t i = 0; i < n_items; ++i) {
      if (fixed[i]) continue;
      double a = c;
      double b = c;
      for (const Edge& e : edges) {
        if (e.kind == EdgeKind::kEditorial) continue;
        if (e.item.index != i) continue;
        const double t = e.polarity * q_user[e.source.index];
        if (t > 0) a += t;
        if (t < 0) b -= t;
      }
      q_item[i] = (a - b) / (a + b);
    }
  }
  return {q_item, q_user};
}

}  // namespace newsrep::testing
