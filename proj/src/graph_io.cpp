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

#include "newsrep/graph_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "newsrep/error.hpp"

namespace newsrep {

namespace {

constexpr const char* kHeader = "#newsrep-graph 1";

std::string Hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

[[noreturn]] void Corrupt(std::size_t line_no, const std::string& why) {
  throw Error(ErrorCode::kCorruptInput,
              "graph line " + std::to_string(line_no) + ": " + why);
}

double ParseDouble(const std::string& text, std::size_t line_no) {
  if (text.empty()) Corrupt(line_no, "empty number");
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) Corrupt(line_no, "bad number '" + text + "'");
  return v;
}

long long ParseInteger(const std::string& text, std::size_t line_no) {
  if (text.empty()) Corrupt(line_no, "empty integer");
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (end != text.c_str() + text.size()) Corrupt(line_no, "bad integer '" + text + "'");
  return v;
}

}  // namespace

void SaveGraph(std::ostream& out, const ReputationGraph& graph) {
  out << kHeader << '\n';
  out << "C\t" << Hex(graph.regularization()) << '\n';
  for (NodeKind kind : {NodeKind::kItem, NodeKind::kUser, NodeKind::kSite}) {
    const auto states = graph.States(kind);
    for (std::uint32_t i = 0; i < states.size(); ++i) {
      const NodeId id{i, kind};
      const auto& s = states[i];
      const int seed = kind == NodeKind::kItem
                           ? static_cast<int>(graph.Seed(id))
                           : 0;
      out << "N\t" << NodeKindName(kind) << '\t' << graph.Key(id) << '\t'
          << Hex(s.alpha) << '\t' << Hex(s.beta) << '\t' << Hex(s.q) << '\t'
          << seed << '\n';
    }
  }
  for (const Edge& e : graph.Edges()) {
    out << "E\t" << graph.Key(e.item) << '\t' << graph.Key(e.source) << '\t'
        << NodeKindName(e.source.kind) << '\t' << (e.polarity > 0 ? "+1" : "-1")
        << '\t' << EdgeKindName(e.kind) << '\t' << e.timestamp << '\n';
  }
}

ReputationGraph LoadGraph(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line != kHeader) {
    Corrupt(line_no, "missing header");
  }
  ++line_no;
  if (!std::getline(in, line)) Corrupt(line_no, "missing regularization");
  auto fields = SplitTabs(line);
  if (fields.size() != 2 || fields[0] != "C") Corrupt(line_no, "expected C line");
  const double c = ParseDouble(fields[1], line_no);
  if (!(c > 0.0)) Corrupt(line_no, "regularization must be positive");
  ReputationGraph graph(c);
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      fields = SplitTabs(line);
      if (fields[0] == "E") {
        if (fields.size() != 7) Corrupt(line_no, "expected 7 fields");
        const NodeId item = graph.AddItem(fields[1]);
        const NodeId source = graph.AddSource(fields[2], ParseNodeKind(fields[3]));
        int polarity = 0;
        if (fields[4] == "+1") {
          polarity = 1;
        } else if (fields[4] == "-1") {
          polarity = -1;
        } else {
          Corrupt(line_no, "bad polarity");
        }
        graph.AddEdge(item, source, polarity, ParseEdgeKind(fields[5]),
                      ParseInteger(fields[6], line_no));
      } else if (fields[0] == "N") {
        if (fields.size() != 7) Corrupt(line_no, "expected 7 fields");
        const NodeKind kind = ParseNodeKind(fields[1]);
        const NodeId id = kind == NodeKind::kItem ? graph.AddItem(fields[2])
                                                  : graph.AddSource(fields[2], kind);
        BetaState s{ParseDouble(fields[3], line_no), ParseDouble(fields[4], line_no),
                    ParseDouble(fields[5], line_no)};
        const long long seed = ParseInteger(fields[6], line_no);
        if (seed < -1 || seed > 1 || (seed != 0 && kind != NodeKind::kItem)) {
          Corrupt(line_no, "bad seed mark");
        }
        if (kind == NodeKind::kItem) graph.SetSeed(id, static_cast<SeedMark>(seed));
        graph.MutableState(id) = s;
      } else {
        Corrupt(line_no, "unknown record '" + fields[0] + "'");
      }
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kCorruptInput) throw;
    Corrupt(line_no, e.what());
  }
  if (auto problem = graph.Audit(); !problem.empty()) {
    throw Error(ErrorCode::kCorruptInput, "graph audit failed: " + problem);
  }
  return graph;
}

}  // namespace newsrep
