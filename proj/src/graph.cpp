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

#include "newsrep/graph.hpp"

#include <cmath>
#include <sstream>

#include "newsrep/error.hpp"

namespace newsrep {

namespace {

constexpr std::uint32_t kMaxSourceIndex = (1u << 30) - 1;

}  // namespace

std::string_view NodeKindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kItem: return "item";
    case NodeKind::kUser: return "user";
    case NodeKind::kSite: return "site";
  }
  return "?";
}

std::string_view EdgeKindName(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kTweet: return "tweet";
    case EdgeKind::kEditorial: return "editorial";
    case EdgeKind::kVote: return "vote";
  }
  return "?";
}

NodeKind ParseNodeKind(std::string_view name) {
  if (name == "item") return NodeKind::kItem;
  if (name == "user") return NodeKind::kUser;
  if (name == "site") return NodeKind::kSite;
  throw Error(ErrorCode::kInvalidInput,
              "unknown node kind '" + std::string(name) + "'");
}

EdgeKind ParseEdgeKind(std::string_view name) {
  if (name == "tweet") return EdgeKind::kTweet;
  if (name == "editorial") return EdgeKind::kEditorial;
  if (name == "vote") return EdgeKind::kVote;
  throw Error(ErrorCode::kInvalidInput,
              "unknown edge kind '" + std::string(name) + "'");
}

ReputationGraph::ReputationGraph(double c) : c_(c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::kInvalidInput,
                "regularization constant must be positive");
  }
}

ReputationGraph::NodeTable& ReputationGraph::Table(NodeKind kind) {
  switch (kind) {
    case NodeKind::kItem: return items_;
    case NodeKind::kUser: return users_;
    case NodeKind::kSite: return sites_;
  }
  throw Error(ErrorCode::kInvalidInput, "bad node kind");
}

const ReputationGraph::NodeTable& ReputationGraph::Table(NodeKind kind) const {
  return const_cast<ReputationGraph*>(this)->Table(kind);
}

NodeId ReputationGraph::Intern(NodeTable& table, std::string_view key,
                               NodeKind kind) {
  auto [it, inserted] = table.index.try_emplace(
      std::string(key), static_cast<std::uint32_t>(table.keys.size()));
  if (inserted) {
    if (kind != NodeKind::kItem && table.keys.size() > kMaxSourceIndex) {
      table.index.erase(it);
      throw Error(ErrorCode::kInvalidInput, "too many source nodes");
    }
    table.keys.emplace_back(key);
    table.states.push_back(BetaState::Fresh(c_));
    table.adjacency.emplace_back();
    if (kind == NodeKind::kItem) item_seed_.push_back(SeedMark::kNone);
  }
  return NodeId{it->second, kind};
}

NodeId ReputationGraph::AddItem(std::string_view url) {
  if (url.empty()) throw Error(ErrorCode::kInvalidInput, "empty item url");
  return Intern(items_, url, NodeKind::kItem);
}

NodeId ReputationGraph::AddSource(std::string_view key, NodeKind kind) {
  if (key.empty()) throw Error(ErrorCode::kInvalidInput, "empty source key");
  if (kind == NodeKind::kItem) {
    throw Error(ErrorCode::kInvalidInput, "source kind must be user or site");
  }
  return Intern(Table(kind), key, kind);
}

std::uint64_t ReputationGraph::EdgeKeyOf(NodeId item, NodeId source,
                                         EdgeKind kind) {
  return (static_cast<std::uint64_t>(item.index) << 32) |
         (static_cast<std::uint64_t>(source.index) << 2) |
         static_cast<std::uint64_t>(kind);
}

void ReputationGraph::CheckNode(NodeId node) const {
  if (node.index >= Table(node.kind).keys.size()) {
    throw Error(ErrorCode::kInvalidInput,
                "unknown " + std::string(NodeKindName(node.kind)) + " node " +
                    std::to_string(node.index));
  }
}

InsertResult ReputationGraph::AddEdge(NodeId item, NodeId source, int polarity,
                                      EdgeKind kind, std::int64_t timestamp) {
  if (item.kind != NodeKind::kItem) {
    throw Error(ErrorCode::kInvalidEdge, "edge target must be an item");
  }
  const NodeKind expected =
      kind == EdgeKind::kEditorial ? NodeKind::kSite : NodeKind::kUser;
  if (source.kind != expected) {
    throw Error(ErrorCode::kInvalidEdge,
                std::string(EdgeKindName(kind)) + " edge requires a " +
                    std::string(NodeKindName(expected)) + " source");
  }
  if (polarity != 1 && polarity != -1) {
    throw Error(ErrorCode::kInvalidEdge, "polarity must be +1 or -1");
  }
  if (polarity == -1 && kind != EdgeKind::kVote) {
    throw Error(ErrorCode::kInvalidEdge,
                std::string(EdgeKindName(kind)) + " edges are always positive");
  }
  CheckNode(item);
  CheckNode(source);

  const std::uint64_t key = EdgeKeyOf(item, source, kind);
  if (auto found = edge_index_.find(key); found != edge_index_.end()) {
    if (kind != EdgeKind::kVote) return InsertResult::kDuplicate;
    const std::uint32_t e = found->second;
    const auto p = static_cast<std::int8_t>(polarity);
    edges_[e].polarity = p;
    edges_[e].timestamp = timestamp;
    items_.adjacency[item.index][edge_slots_[e].first].polarity = p;
    Table(source.kind).adjacency[source.index][edge_slots_[e].second].polarity =
        p;
    return InsertResult::kInserted;
  }

  const auto e = static_cast<std::uint32_t>(edges_.size());
  edges_.push_back(Edge{item, source, static_cast<std::int8_t>(polarity), kind,
                        timestamp});
  auto& item_adj = items_.adjacency[item.index];
  auto& source_adj = Table(source.kind).adjacency[source.index];
  edge_slots_.emplace_back(static_cast<std::uint32_t>(item_adj.size()),
                           static_cast<std::uint32_t>(source_adj.size()));
  item_adj.push_back(Incidence{source.index, source.kind, kind,
                               static_cast<std::int8_t>(polarity), e});
  source_adj.push_back(Incidence{item.index, NodeKind::kItem, kind,
                                 static_cast<std::int8_t>(polarity), e});
  edge_index_.emplace(key, e);
  return InsertResult::kInserted;
}

std::optional<NodeId> ReputationGraph::FindItem(std::string_view url) const {
  auto it = items_.index.find(std::string(url));
  if (it == items_.index.end()) return std::nullopt;
  return NodeId{it->second, NodeKind::kItem};
}

std::optional<NodeId> ReputationGraph::FindSource(std::string_view key,
                                                  NodeKind kind) const {
  if (kind == NodeKind::kItem) return std::nullopt;
  const auto& table = Table(kind);
  auto it = table.index.find(std::string(key));
  if (it == table.index.end()) return std::nullopt;
  return NodeId{it->second, kind};
}

std::optional<std::uint32_t> ReputationGraph::FindEdge(NodeId item,
                                                       NodeId source,
                                                       EdgeKind kind) const {
  auto it = edge_index_.find(EdgeKeyOf(item, source, kind));
  if (it == edge_index_.end()) return std::nullopt;
  const Edge& e = edges_[it->second];
  if (e.item != item || e.source != source) return std::nullopt;
  return it->second;
}

const std::string& ReputationGraph::Key(NodeId node) const {
  CheckNode(node);
  return Table(node.kind).keys[node.index];
}

const BetaState& ReputationGraph::State(NodeId node) const {
  CheckNode(node);
  return Table(node.kind).states[node.index];
}

BetaState& ReputationGraph::MutableState(NodeId node) {
  CheckNode(node);
  return Table(node.kind).states[node.index];
}

std::span<const Incidence> ReputationGraph::Neighbors(NodeId node) const {
  CheckNode(node);
  return Table(node.kind).adjacency[node.index];
}

std::size_t ReputationGraph::NodeCount(NodeKind kind) const {
  return Table(kind).keys.size();
}

void ReputationGraph::SetSeed(NodeId item, SeedMark mark) {
  if (item.kind != NodeKind::kItem) {
    throw Error(ErrorCode::kInvalidLabels, "only items can be seeded");
  }
  CheckNode(item);
  item_seed_[item.index] = mark;
}

std::span<BetaState> ReputationGraph::States(NodeKind kind) {
  return Table(kind).states;
}

std::span<const BetaState> ReputationGraph::States(NodeKind kind) const {
  return Table(kind).states;
}

std::span<const std::vector<Incidence>> ReputationGraph::Adjacency(
    NodeKind kind) const {
  return Table(kind).adjacency;
}

std::string ReputationGraph::Audit() const {
  std::ostringstream out;
  std::vector<std::uint32_t> seen(edges_.size(), 0);
  for (NodeKind kind : {NodeKind::kItem, NodeKind::kUser, NodeKind::kSite}) {
    const auto& table = Table(kind);
    for (std::uint32_t i = 0; i < table.keys.size(); ++i) {
      auto it = table.index.find(table.keys[i]);
      if (it == table.index.end() || it->second != i) {
        out << NodeKindName(kind) << " " << i << " key does not round-trip";
        return out.str();
      }
      const BetaState& s = table.states[i];
      if (!(s.q >= -1.0 && s.q <= 1.0) || !(s.alpha >= c_) ||
          !(s.beta >= c_)) {
        out << NodeKindName(kind) << " " << i << " state out of bounds";
        return out.str();
      }
      for (const Incidence& inc : table.adjacency[i]) {
        if (inc.edge >= edges_.size()) {
          out << NodeKindName(kind) << " " << i << " dangling edge";
          return out.str();
        }
        const Edge& e = edges_[inc.edge];
        const NodeId self{i, kind};
        const NodeId other{inc.other, inc.other_kind};
        const bool matches =
            kind == NodeKind::kItem
                ? (e.item == self && e.source == other)
                : (e.source == self && e.item == other);
        if (!matches || e.polarity != inc.polarity || e.kind != inc.kind) {
          out << NodeKindName(kind) << " " << i << " incidence mismatch";
          return out.str();
        }
        ++seen[inc.edge];
      }
    }
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (seen[e] != 2) {
      out << "edge " << e << " referenced " << seen[e] << " times";
      return out.str();
    }
  }
  if (edge_index_.size() != edges_.size()) return "edge index size mismatch";
  return {};
}

}  // namespace newsrep
