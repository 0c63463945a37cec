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

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "doctest.h"
#include "newsrep/error.hpp"
#include "newsrep/graph.hpp"
#include "newsrep/rng.hpp"
#include "random_graphs.hpp"

using namespace newsrep;

TEST_CASE("add_item is idempotent and starts fresh") {
  ReputationGraph g;
  const NodeId a = g.AddItem("https://a.example/x");
  const NodeId b = g.AddItem("https://a.example/x");
  CHECK(a == b);
  CHECK(g.ItemCount() == 1);
  CHECK(g.State(a).alpha == 0.02);
  CHECK(g.State(a).beta == 0.02);
  CHECK(g.State(a).q == 0.0);
  CHECK(g.Key(a) == "https://a.example/x");
}

TEST_CASE("empty keys are rejected") {
  ReputationGraph g;
  CHECK_THROWS_AS(g.AddItem(""), Error);
  CHECK_THROWS_AS(g.AddSource("", NodeKind::kUser), Error);
  try {
    g.AddItem("");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidInput);
  }
}

TEST_CASE("sources are unique per kind") {
  ReputationGraph g;
  const NodeId site = g.AddSource("nytimes.com", NodeKind::kSite);
  CHECK(g.FindSource("nytimes.com", NodeKind::kSite) == site);
  CHECK_FALSE(g.FindSource("nytimes.com", NodeKind::kUser).has_value());
  const NodeId as_user = g.AddSource("u1", NodeKind::kUser);
  const NodeId as_site = g.AddSource("u1", NodeKind::kSite);
  CHECK(as_user != as_site);
  CHECK(g.State(as_user).q == 0.0);
}

TEST_CASE("duplicate tweets are ignored") {
  ReputationGraph g;
  const NodeId i = g.AddItem("https://a.example/x");
  const NodeId u = g.AddSource("u", NodeKind::kUser);
  CHECK(g.AddEdge(i, u, 1, EdgeKind::kTweet, 10) == InsertResult::kInserted);
  CHECK(g.AddEdge(i, u, 1, EdgeKind::kTweet, 20) == InsertResult::kDuplicate);
  CHECK(g.Degree(i) == 1);
  CHECK(g.Degree(u) == 1);
  CHECK(g.EdgeAt(0).timestamp == 10);
}

TEST_CASE("editorial edge puts the site in the item's neighborhood") {
  ReputationGraph g;
  const NodeId i = g.AddItem("https://a.example/x");
  const NodeId s = g.AddSource("a.example", NodeKind::kSite);
  CHECK(g.AddEdge(i, s, 1, EdgeKind::kEditorial, 1) == InsertResult::kInserted);
  const auto nb = g.Neighbors(i);
  REQUIRE(nb.size() == 1);
  CHECK(nb[0].other == s.index);
  CHECK(nb[0].other_kind == NodeKind::kSite);
}

TEST_CASE("latest vote wins") {
  ReputationGraph g;
  const NodeId i = g.AddItem("https://a.example/x");
  const NodeId u = g.AddSource("u", NodeKind::kUser);
  CHECK(g.AddEdge(i, u, 1, EdgeKind::kVote, 1) == InsertResult::kInserted);
  CHECK(g.AddEdge(i, u, -1, EdgeKind::kVote, 2) == InsertResult::kInserted);
  CHECK(g.Degree(i) == 1);
  CHECK(g.EdgeAt(0).polarity == -1);
  CHECK(g.EdgeAt(0).timestamp == 2);
  CHECK(g.Neighbors(i)[0].polarity == -1);
  CHECK(g.Neighbors(u)[0].polarity == -1);
  CHECK(g.Audit().empty());
}

TEST_CASE("a tweet and a vote from the same user are separate edges") {
  ReputationGraph g;
  const NodeId i = g.AddItem("https://a.example/x");
  const NodeId u = g.AddSource("u", NodeKind::kUser);
  g.AddEdge(i, u, 1, EdgeKind::kTweet, 1);
  g.AddEdge(i, u, -1, EdgeKind::kVote, 2);
  CHECK(g.Degree(i) == 2);
}

TEST_CASE("invalid edges") {
  ReputationGraph g;
  const NodeId i = g.AddItem("https://a.example/x");
  const NodeId u = g.AddSource("u", NodeKind::kUser);
  const NodeId s = g.AddSource("a.example", NodeKind::kSite);
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kUsage;
  };
  CHECK(code_of([&] { g.AddEdge(i, s, 1, EdgeKind::kTweet, 0); }) ==
        ErrorCode::kInvalidEdge);
  CHECK(code_of([&] { g.AddEdge(i, u, 1, EdgeKind::kEditorial, 0); }) ==
        ErrorCode::kInvalidEdge);
  CHECK(code_of([&] { g.AddEdge(i, u, -1, EdgeKind::kTweet, 0); }) ==
        ErrorCode::kInvalidEdge);
  CHECK(code_of([&] { g.AddEdge(i, s, -1, EdgeKind::kEditorial, 0); }) ==
        ErrorCode::kInvalidEdge);
  CHECK(code_of([&] { g.AddEdge(u, u, 1, EdgeKind::kTweet, 0); }) ==
        ErrorCode::kInvalidEdge);
  CHECK(code_of([&] { g.AddEdge(i, u, 0, EdgeKind::kVote, 0); }) ==
        ErrorCode::kInvalidEdge);
  CHECK(g.Edges().empty());
}

TEST_CASE("node kind and edge kind names round-trip") {
  for (NodeKind k : {NodeKind::kItem, NodeKind::kUser, NodeKind::kSite}) {
    CHECK(ParseNodeKind(NodeKindName(k)) == k);
  }
  for (EdgeKind k : {EdgeKind::kTweet, EdgeKind::kEditorial, EdgeKind::kVote}) {
    CHECK(ParseEdgeKind(EdgeKindName(k)) == k);
  }
  CHECK_THROWS_AS(ParseEdgeKind("retweet"), Error);
}

namespace {

using EdgeTuple = std::tuple<std::string, std::string, NodeKind, int, EdgeKind>;

std::multiset<EdgeTuple> EdgeSet(const ReputationGraph& g) {
  std::multiset<EdgeTuple> out;
  for (const Edge& e : g.Edges()) {
    out.emplace(g.Key(e.item), g.Key(e.source), e.source.kind, e.polarity,
                e.kind);
  }
  return out;
}

}  // namespace

TEST_CASE("property: audit holds and degrees match references") {
  Rng rng(7);
  for (int round = 0; round < 40; ++round) {
    testing::RandomGraphShape shape;
    shape.max_items = 400;
    shape.max_users = 300;
    shape.max_edges = 10000;
    shape.votes = true;
    shape.sites = true;
    auto rg = testing::MakeRandomGraph(rng, shape);
    const auto& g = rg.graph;
    CHECK(g.Audit().empty());
    std::map<NodeId, std::size_t> refs;
    for (const Edge& e : g.Edges()) {
      ++refs[e.item];
      ++refs[e.source];
    }
    for (NodeKind kind : {NodeKind::kItem, NodeKind::kUser, NodeKind::kSite}) {
      for (std::uint32_t i = 0; i < g.NodeCount(kind); ++i) {
        const NodeId id{i, kind};
        CHECK(g.Degree(id) == refs[id]);
        CHECK(g.FindSource(g.Key(id), kind).value_or(id) == id);
      }
    }
  }
}

TEST_CASE("property: insertion order does not change the graph") {
  Rng rng(11);
  for (int round = 0; round < 30; ++round) {
    struct Raw {
      std::string url, user;
      int polarity;
      EdgeKind kind;
      std::int64_t ts;
    };
    std::vector<Raw> raw;
    const std::size_t n = rng.Below(300);
    for (std::size_t e = 0; e < n; ++e) {
      const bool vote = rng.Bernoulli(0.2);
      raw.push_back({"https://s.test/" + std::to_string(rng.Below(20)),
                     "u" + std::to_string(rng.Below(15)),
                     vote && rng.Bernoulli(0.5) ? -1 : 1,
                     vote ? EdgeKind::kVote : EdgeKind::kTweet,
                     static_cast<std::int64_t>(e)});
    }
    // Votes replace by arrival, so only non-vote edges and the last vote per
    // pair are order-independent; keep one vote per pair.
    std::set<std::pair<std::string, std::string>> voted;
    std::erase_if(raw, [&](const Raw& r) {
      return r.kind == EdgeKind::kVote && !voted.emplace(r.url, r.user).second;
    });
    auto build = [](const std::vector<Raw>& list) {
      ReputationGraph g;
      for (const Raw& r : list) {
        g.AddEdge(g.AddItem(r.url), g.AddSource(r.user, NodeKind::kUser),
                  r.polarity, r.kind, r.ts);
      }
      return g;
    };
    auto shuffled = raw;
    rng.Shuffle(std::span<Raw>(shuffled));
    const auto a = build(raw);
    const auto b = build(shuffled);
    CHECK(EdgeSet(a) == EdgeSet(b));
    CHECK(a.ItemCount() == b.ItemCount());
    CHECK(a.UserCount() == b.UserCount());
    for (std::uint32_t i = 0; i < a.ItemCount(); ++i) {
      const NodeId ia{i, NodeKind::kItem};
      const NodeId ib = *b.FindItem(a.Key(ia));
      CHECK(a.State(ia).q == b.State(ib).q);
      CHECK(a.Degree(ia) == b.Degree(ib));
    }
  }
}
