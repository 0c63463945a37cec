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

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace newsrep {

inline constexpr double kDefaultRegularization = 0.02;

enum class NodeKind : std::uint8_t { kItem, kUser, kSite };
enum class EdgeKind : std::uint8_t { kTweet, kEditorial, kVote };

std::string_view NodeKindName(NodeKind kind);
std::string_view EdgeKindName(EdgeKind kind);
// Inverse of the *Name functions; throws kInvalidInput on unknown names.
NodeKind ParseNodeKind(std::string_view name);
EdgeKind ParseEdgeKind(std::string_view name);

// Dense per-kind index. (kind, index) is globally unique.
struct NodeId {
  std::uint32_t index = 0;
  NodeKind kind = NodeKind::kItem;

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

struct Edge {
  NodeId item;
  NodeId source;
  std::int8_t polarity = 1;
  EdgeKind kind = EdgeKind::kTweet;
  std::int64_t timestamp = 0;
};

// Beta-distribution parameters of a node and the derived reputation
// q = (alpha - beta) / (alpha + beta).
struct BetaState {
  double alpha = 0.0;
  double beta = 0.0;
  double q = 0.0;

  static BetaState Fresh(double c) { return {c, c, 0.0}; }
  static double Reputation(double alpha, double beta) {
    const double total = alpha + beta;
    return total > 0.0 ? (alpha - beta) / total : 0.0;
  }
};

// One side of an edge as seen from a node's adjacency list.
struct Incidence {
  std::uint32_t other = 0;  // index of the opposite node
  NodeKind other_kind = NodeKind::kItem;
  EdgeKind kind = EdgeKind::kTweet;
  std::int8_t polarity = 1;
  std::uint32_t edge = 0;  // position in ReputationGraph::edges()
};

enum class InsertResult { kInserted, kDuplicate };

// Seed status of an item, fixed by harmonic::Seed.
enum class SeedMark : std::int8_t { kFake = -1, kNone = 0, kNonFake = 1 };

// Bipartite graph of items and sources (users and sites) with signed, typed
// edges and per-node beta state. Nodes are addressed by dense indices; string
// keys resolve through side tables only at the boundary.
//
// Single writer. Concurrent readers are fine as long as no mutation runs.
class ReputationGraph {
 public:
  explicit ReputationGraph(double c = kDefaultRegularization);

  double regularization() const { return c_; }

  // Idempotent. Throws kInvalidInput on an empty url.
  NodeId AddItem(std::string_view url);
  // Idempotent per (key, kind); kind must be kUser or kSite.
  NodeId AddSource(std::string_view key, NodeKind kind);

  // Tweet and Editorial duplicates are no-ops returning kDuplicate. A repeated
  // Vote overwrites the stored polarity and timestamp and returns kInserted.
  // Throws kInvalidEdge on kind/source mismatch or negative non-vote polarity.
  InsertResult AddEdge(NodeId item, NodeId source, int polarity, EdgeKind kind,
                       std::int64_t timestamp);

  std::optional<NodeId> FindItem(std::string_view url) const;
  std::optional<NodeId> FindSource(std::string_view key, NodeKind kind) const;
  std::optional<std::uint32_t> FindEdge(NodeId item, NodeId source,
                                        EdgeKind kind) const;

  const std::string& Key(NodeId node) const;
  const BetaState& State(NodeId node) const;
  BetaState& MutableState(NodeId node);
  std::span<const Incidence> Neighbors(NodeId node) const;
  std::size_t Degree(NodeId node) const { return Neighbors(node).size(); }

  std::size_t ItemCount() const { return items_.keys.size(); }
  std::size_t UserCount() const { return users_.keys.size(); }
  std::size_t SiteCount() const { return sites_.keys.size(); }
  std::size_t NodeCount(NodeKind kind) const;

  std::span<const Edge> Edges() const { return edges_; }
  const Edge& EdgeAt(std::uint32_t index) const { return edges_.at(index); }

  SeedMark Seed(NodeId item) const { return item_seed_.at(item.index); }
  void SetSeed(NodeId item, SeedMark mark);
  bool IsSeed(NodeId item) const { return Seed(item) != SeedMark::kNone; }

  // Direct state arrays for the fixpoint's inner loops.
  std::span<BetaState> States(NodeKind kind);
  std::span<const BetaState> States(NodeKind kind) const;
  std::span<const std::vector<Incidence>> Adjacency(NodeKind kind) const;

  // Checks adjacency symmetry, index round-trips and state bounds. Returns an
  // empty string when consistent, otherwise a description of the first
  // violation.
  std::string Audit() const;

 private:
  struct NodeTable {
    std::vector<std::string> keys;
    std::vector<BetaState> states;
    std::vector<std::vector<Incidence>> adjacency;
    std::unordered_map<std::string, std::uint32_t> index;
  };

  NodeTable& Table(NodeKind kind);
  const NodeTable& Table(NodeKind kind) const;
  NodeId Intern(NodeTable& table, std::string_view key, NodeKind kind);
  void CheckNode(NodeId node) const;
  static std::uint64_t EdgeKeyOf(NodeId item, NodeId source, EdgeKind kind);

  double c_;
  NodeTable items_;
  NodeTable users_;
  NodeTable sites_;
  std::vector<SeedMark> item_seed_;
  std::vector<Edge> edges_;
  // Position of each edge inside its item's and its source's adjacency list.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_slots_;
  std::unordered_map<std::uint64_t, std::uint32_t> edge_index_;
};

}  // namespace newsrep
