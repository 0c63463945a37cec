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
#include <unordered_set>

#include "doctest.h"
#include "newsrep/error.hpp"
#include "newsrep/harmonic.hpp"
#include "newsrep/rng.hpp"
#include "newsrep/url.hpp"
#include "random_graphs.hpp"

using namespace newsrep;
using harmonic::EngineConfig;
using harmonic::Label;
using harmonic::SeedLabels;

namespace {

struct MicroGraph {
  ReputationGraph g;
  NodeId i1, i2, i3, u1, u2;
  SeedLabels labels;
};

// i1 seeded fake, i2 seeded non-fake, i3 unlabeled; u1 tweets {i1, i3},
// u2 tweets {i2}.
MicroGraph MakeMicroGraph() {
  MicroGraph m;
  m.i1 = m.g.AddItem("https://f.test/1");
  m.i2 = m.g.AddItem("https://r.test/2");
  m.i3 = m.g.AddItem("https://x.test/3");
  m.u1 = m.g.AddSource("u1", NodeKind::kUser);
  m.u2 = m.g.AddSource("u2", NodeKind::kUser);
  m.g.AddEdge(m.i1, m.u1, 1, EdgeKind::kTweet, 1);
  m.g.AddEdge(m.i3, m.u1, 1, EdgeKind::kTweet, 2);
  m.g.AddEdge(m.i2, m.u2, 1, EdgeKind::kTweet, 3);
  m.labels.fake_items = {m.i1};
  m.labels.nonfake_items = {m.i2};
  return m;
}

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kUsage;
}

}  // namespace

TEST_CASE("seeding fixes seeds at +/-1 and resets the rest") {
  auto m = MakeMicroGraph();
  m.g.MutableState(m.i3) = {3.0, 1.0, 0.5};
  harmonic::Seed(m.g, m.labels);
  CHECK(m.g.State(m.i1).q == -1.0);
  CHECK(m.g.State(m.i2).q == 1.0);
  CHECK(m.g.State(m.i1).alpha == 0.02);
  CHECK(m.g.State(m.i1).beta == 1.02);
  CHECK(m.g.State(m.i3).q == 0.0);
  CHECK(m.g.State(m.i3).alpha == 0.02);
}

TEST_CASE("seeding rejects overlap and non-items") {
  auto m = MakeMicroGraph();
  SeedLabels overlap{{m.i1}, {m.i1}};
  CHECK(CodeOf([&] { harmonic::Seed(m.g, overlap); }) ==
        ErrorCode::kInvalidLabels);
  SeedLabels user{{m.u1}, {}};
  CHECK(CodeOf([&] { harmonic::Seed(m.g, user); }) == ErrorCode::kInvalidLabels);
  SeedLabels unknown{{NodeId{99, NodeKind::kItem}}, {}};
  CHECK(CodeOf([&] { harmonic::Seed(m.g, unknown); }) ==
        ErrorCode::kInvalidLabels);
}

TEST_CASE("worked example matches a scalar oracle") {
  auto m = MakeMicroGraph();
  EngineConfig config;
  config.iterations = 1;
  const auto result = harmonic::RunFixpoint(m.g, m.labels, config);

  const double c = 0.02;
  const double alpha_u1 = c;
  const double beta_u1 = c + 1.0;
  const double q_u1 = (alpha_u1 - beta_u1) / (alpha_u1 + beta_u1);
  const double alpha_i3 = c;
  const double beta_i3 = c - q_u1;
  const double q_i3 = (alpha_i3 - beta_i3) / (alpha_i3 + beta_i3);

  CHECK(m.g.State(m.u1).q == doctest::Approx(q_u1).epsilon(1e-15));
  CHECK(m.g.State(m.u1).q == doctest::Approx(-0.96154).epsilon(1e-5));
  CHECK(m.g.State(m.u2).q == doctest::Approx(0.96154).epsilon(1e-5));
  CHECK(result[m.i3.index].reputation == doctest::Approx(q_i3).epsilon(1e-15));
  CHECK(std::abs(result[m.i3.index].reputation - -0.96006) < 1e-4);
  CHECK(result[m.i3.index].label == Label::kFake);
  CHECK(result[m.i1.index].reputation == -1.0);
  CHECK(result[m.i2.index].reputation == 1.0);

  const auto rep = harmonic::Reputation(m.g, "https://x.test/3");
  CHECK(rep.label == Label::kFake);
  CHECK(rep.reputation == result[m.i3.index].reputation);
  CHECK(harmonic::Reputation(m.g, "https://f.test/1").reputation == -1.0);
}

TEST_CASE("isolated item stays at zero and is reliable") {
  ReputationGraph g;
  g.AddItem("https://a.test/1");
  const auto result = harmonic::RunFixpoint(g, {}, EngineConfig{});
  CHECK(result[0].reputation == 0.0);
  CHECK(result[0].label == Label::kReliable);
}

TEST_CASE("reputation of an unknown url is not-found") {
  ReputationGraph g;
  CHECK(CodeOf([&] { harmonic::Reputation(g, "https://nope.test/"); }) ==
        ErrorCode::kNotFound);
}

TEST_CASE("engine config validation") {
  EngineConfig config;
  config.c = 0.0;
  CHECK_THROWS_AS(harmonic::Validate(config), Error);
  config = {};
  config.propagation_threshold = 0.0;
  CHECK_THROWS_AS(harmonic::Validate(config), Error);
  config = {};
  config.iterations = 0;
  CHECK_THROWS_AS(harmonic::Validate(config), Error);
  ReputationGraph g(0.05);
  CHECK_THROWS_AS(harmonic::IterateFixpoint(g, EngineConfig{}), Error);
}

TEST_CASE("property: fixpoint matches the naive oracle") {
  Rng rng(2024);
  for (int round = 0; round < 200; ++round) {
    testing::RandomGraphShape shape;
    shape.max_items = 30;
    shape.max_users = 20;
    shape.votes = round % 2 == 0;
    auto rg = testing::MakeRandomGraph(rng, shape);
    EngineConfig config;
    config.iterations = 1 + static_cast<int>(rng.Below(4));
    harmonic::RunFixpoint(rg.graph, rg.labels, config);
    const auto oracle = testing::NaiveFixpoint(rg.graph, rg.labels, config.c,
                                               config.iterations);
    for (std::uint32_t i = 0; i < rg.graph.ItemCount(); ++i) {
      CHECK(std::abs(rg.graph.State({i, NodeKind::kItem}).q - oracle.item_q[i]) <
            1e-9);
    }
    for (std::uint32_t u = 0; u < rg.graph.UserCount(); ++u) {
      CHECK(std::abs(rg.graph.State({u, NodeKind::kUser}).q - oracle.user_q[u]) <
            1e-9);
    }
  }
}

TEST_CASE("property: swapping seeds negates every reputation") {
  Rng rng(99);
  for (int round = 0; round < 50; ++round) {
    testing::RandomGraphShape shape;
    shape.max_items = 200;
    shape.max_users = 100;
    shape.max_edges = 2000;
    auto rg = testing::MakeRandomGraph(rng, shape);
    ReputationGraph swapped = rg.graph;
    harmonic::RunFixpoint(rg.graph, rg.labels, EngineConfig{});
    harmonic::RunFixpoint(swapped,
                          SeedLabels{rg.labels.nonfake_items, rg.labels.fake_items},
                          EngineConfig{});
    for (NodeKind kind : {NodeKind::kItem, NodeKind::kUser}) {
      const auto a = rg.graph.States(kind);
      const auto b = swapped.States(kind);
      for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(std::abs(a[i].q + b[i].q) <= 1e-12);
      }
    }
  }
}

TEST_CASE("property: bounds and seed immutability after batch phases") {
  Rng rng(5);
  for (int round = 0; round < 50; ++round) {
    testing::RandomGraphShape shape;
    shape.votes = true;
    shape.sites = true;
    auto rg = testing::MakeRandomGraph(rng, shape);
    EngineConfig config;
    config.include_editorial = round % 2 == 0;
    harmonic::RunFixpoint(rg.graph, rg.labels, config);
    CHECK(rg.graph.Audit().empty());
    for (NodeId id : rg.labels.fake_items) CHECK(rg.graph.State(id).q == -1.0);
    for (NodeId id : rg.labels.nonfake_items) CHECK(rg.graph.State(id).q == 1.0);
  }
}

TEST_CASE("parallel phases are bit-identical to sequential") {
  Rng rng(3);
  testing::RandomGraphShape shape;
  shape.max_items = 3000;
  shape.max_users = 1000;
  shape.max_edges = 20000;
  shape.votes = true;
  auto rg = testing::MakeRandomGraph(rng, shape);
  ReputationGraph parallel = rg.graph;
  EngineConfig config;
  harmonic::RunFixpoint(rg.graph, rg.labels, config);
  config.threads = 4;
  harmonic::RunFixpoint(parallel, rg.labels, config);
  for (NodeKind kind : {NodeKind::kItem, NodeKind::kUser}) {
    const auto a = rg.graph.States(kind);
    const auto b = parallel.States(kind);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].alpha == b[i].alpha);
      CHECK(a[i].beta == b[i].beta);
      CHECK(a[i].q == b[i].q);
    }
  }
}

TEST_CASE("excluded editorial edges behave as if sites were absent") {
  Rng rng(17);
  for (int round = 0; round < 30; ++round) {
    testing::RandomGraphShape shape;
    shape.sites = true;
    auto rg = testing::MakeRandomGraph(rng, shape);
    ReputationGraph without;
    for (std::uint32_t i = 0; i < rg.graph.ItemCount(); ++i) {
      without.AddItem(rg.graph.Key({i, NodeKind::kItem}));
    }
    for (std::uint32_t u = 0; u < rg.graph.UserCount(); ++u) {
      without.AddSource(rg.graph.Key({u, NodeKind::kUser}), NodeKind::kUser);
    }
    for (const Edge& e : rg.graph.Edges()) {
      if (e.kind == EdgeKind::kEditorial) continue;
      without.AddEdge(e.item, e.source, e.polarity, e.kind, e.timestamp);
    }
    harmonic::RunFixpoint(rg.graph, rg.labels, EngineConfig{});
    harmonic::RunFixpoint(without, rg.labels, EngineConfig{});
    for (NodeKind kind : {NodeKind::kItem, NodeKind::kUser}) {
      const auto a = rg.graph.States(kind);
      const auto b = without.States(kind);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].q == b[i].q);
    }
  }
}

TEST_CASE("online update of a fresh item from a positive user") {
  ReputationGraph g;
  const NodeId i = g.AddItem("https://a.test/1");
  const NodeId u = g.AddSource("u", NodeKind::kUser);
  const NodeId w = g.AddSource("w", NodeKind::kUser);
  g.MutableState(u) = {0.75, 0.25, 0.5};
  g.AddEdge(i, w, 1, EdgeKind::kTweet, 1);
  g.AddEdge(i, u, 1, EdgeKind::kTweet, 2);
  const auto w_before = g.State(w);
  const auto u_before = g.State(u);

  const auto update = harmonic::IngestEdgeOnline(g, g.EdgeAt(1), EngineConfig{});
  CHECK(g.State(i).alpha == doctest::Approx(0.52));
  CHECK(g.State(i).beta == 0.02);
  const double q_i = 0.5 / 0.54;
  CHECK(g.State(i).q == doctest::Approx(q_i).epsilon(1e-15));
  // One item update plus one UpdateUser per neighbor with depth 0.
  CHECK(update.touched == 3);
  CHECK(g.State(w).alpha == doctest::Approx(w_before.alpha + q_i));
  CHECK(g.State(u).alpha == doctest::Approx(u_before.alpha + q_i));
  CHECK(update.flipped.empty());
}

TEST_CASE("online update from a neutral user changes nothing") {
  ReputationGraph g;
  const NodeId i = g.AddItem("https://a.test/1");
  const NodeId u = g.AddSource("u", NodeKind::kUser);
  g.AddEdge(i, u, 1, EdgeKind::kTweet, 1);
  const auto update = harmonic::IngestEdgeOnline(g, g.EdgeAt(0), EngineConfig{});
  CHECK(g.State(i).alpha == 0.02);
  CHECK(g.State(i).beta == 0.02);
  CHECK(g.State(i).q == 0.0);
  CHECK(update.touched == 1);
  CHECK(g.State(u).alpha == 0.02);
}

TEST_CASE("online update reports label flips and skips seeds") {
  ReputationGraph g;
  const NodeId i = g.AddItem("https://a.test/1");
  const NodeId seed = g.AddItem("https://a.test/seed");
  const NodeId u = g.AddSource("u", NodeKind::kUser);
  harmonic::Seed(g, SeedLabels{{seed}, {}});
  g.MutableState(u) = {0.1, 0.9, -0.8};
  g.AddEdge(i, u, 1, EdgeKind::kTweet, 1);
  auto update = harmonic::IngestEdgeOnline(g, g.EdgeAt(0), EngineConfig{});
  REQUIRE(update.flipped.size() == 1);
  CHECK(update.flipped[0] == i);

  g.AddEdge(seed, u, 1, EdgeKind::kTweet, 2);
  update = harmonic::IngestEdgeOnline(g, g.EdgeAt(1), EngineConfig{});
  CHECK(update.touched == 0);
  CHECK(g.State(seed).q == -1.0);
}

TEST_CASE("online update of a missing edge is inconsistent state") {
  ReputationGraph g;
  const NodeId i = g.AddItem("https://a.test/1");
  const NodeId u = g.AddSource("u", NodeKind::kUser);
  const Edge e{i, u, 1, EdgeKind::kTweet, 0};
  CHECK(CodeOf([&] { harmonic::IngestEdgeOnline(g, e, EngineConfig{}); }) ==
        ErrorCode::kInconsistentState);
}

TEST_CASE("property: online updates keep bounds, seeds and monotonicity") {
  Rng rng(31);
  for (int round = 0; round < 20; ++round) {
    testing::RandomGraphShape shape;
    shape.max_items = 60;
    shape.max_users = 40;
    shape.max_edges = 300;
    auto rg = testing::MakeRandomGraph(rng, shape);
    EngineConfig config;
    config.propagation_depth = static_cast<int>(rng.Below(3));
    harmonic::RunFixpoint(rg.graph, rg.labels, config);
    auto& g = rg.graph;
    std::size_t max_degree = 0;
    for (int e = 0; e < 500; ++e) {
      const NodeId item{static_cast<std::uint32_t>(rng.Below(g.ItemCount())),
                        NodeKind::kItem};
      const NodeId user =
          g.AddSource("u" + std::to_string(rng.Below(60)), NodeKind::kUser);
      const bool vote = rng.Bernoulli(0.3);
      const int polarity = vote && rng.Bernoulli(0.5) ? -1 : 1;
      const auto kind = vote ? EdgeKind::kVote : EdgeKind::kTweet;
      if (g.FindEdge(item, user, kind)) continue;
      g.AddEdge(item, user, polarity, kind, e);
      for (NodeKind k : {NodeKind::kItem, NodeKind::kUser}) {
        for (std::uint32_t n = 0; n < g.NodeCount(k); ++n) {
          max_degree = std::max(max_degree, g.Degree({n, k}));
        }
      }
      const double before = g.State(item).q;
      const double user_q = g.State(user).q;
      const auto update =
          harmonic::IngestEdgeOnline(g, g.EdgeAt(g.Edges().size() - 1), config);
      // Deeper propagation can return to the item through a vote edge of the
      // opposite sign, so monotonicity is only claimed up to depth 1.
      if (!g.IsSeed(item) && polarity > 0 && user_q > 0 &&
          config.propagation_depth <= 1) {
        CHECK(g.State(item).q >= before);
        if (user_q > 1e-9 && before < 1.0 - 1e-9) CHECK(g.State(item).q > before);
      }
      std::size_t bound = 0;
      std::size_t power = 1;
      for (int d = 0; d <= config.propagation_depth; ++d) {
        bound += power;
        power *= max_degree;
      }
      CHECK(update.touched <= bound);
    }
    CHECK(g.Audit().empty());
    for (NodeId id : rg.labels.fake_items) CHECK(g.State(id).q == -1.0);
    for (NodeId id : rg.labels.nonfake_items) CHECK(g.State(id).q == 1.0);
  }
}

TEST_CASE("select_training_labels") {
  ReputationGraph g;
  for (int i = 0; i < 10; ++i) g.AddItem("https://fake.test/" + std::to_string(i));
  for (int i = 0; i < 25; ++i) g.AddItem("https://real.test/" + std::to_string(i));
  const std::unordered_set<std::string> fake{"fake.test"};
  const auto a = harmonic::SelectTrainingLabels(g, fake, 2, 42);
  CHECK(a.fake_items.size() == 10);
  CHECK(a.nonfake_items.size() == 20);
  const auto b = harmonic::SelectTrainingLabels(g, fake, 2, 42);
  CHECK(a.nonfake_items == b.nonfake_items);
  for (NodeId id : a.nonfake_items) CHECK(SiteOf(g.Key(id)) == "real.test");
  CHECK(CodeOf([&] { harmonic::SelectTrainingLabels(g, fake, 3, 42); }) ==
        ErrorCode::kInsufficientCandidates);
}
