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

#include <sstream>

#include "doctest.h"
#include "newsrep/error.hpp"
#include "newsrep/graph_io.hpp"
#include "newsrep/harmonic.hpp"
#include "random_graphs.hpp"

using namespace newsrep;

TEST_CASE("graph snapshot round-trips exactly") {
  Rng rng(2);
  for (int round = 0; round < 20; ++round) {
    testing::RandomGraphShape shape;
    shape.votes = true;
    shape.sites = true;
    auto rg = testing::MakeRandomGraph(rng, shape);
    harmonic::RunFixpoint(rg.graph, rg.labels, harmonic::EngineConfig{});
    std::stringstream buf;
    SaveGraph(buf, rg.graph);
    const std::string text = buf.str();
    const auto loaded = LoadGraph(buf);
    std::stringstream again;
    SaveGraph(again, loaded);
    CHECK(again.str() == text);
    for (std::uint32_t i = 0; i < loaded.ItemCount(); ++i) {
      const NodeId id{i, NodeKind::kItem};
      CHECK(loaded.State(id).q == rg.graph.State(id).q);
      CHECK(loaded.Seed(id) == rg.graph.Seed(id));
    }
  }
}

TEST_CASE("corrupt snapshots are rejected") {
  for (const char* bad :
       {"", "#other 1\n", "#newsrep-graph 1\nC\t0x1p-1\nE\tu\n",
        "#newsrep-graph 1\nC\t0x1p-1\nE\thttps://a\tu\tuser\t-1\ttweet\t1\n",
        "#newsrep-graph 1\nC\t0x1p-1\nX\n",
        "#newsrep-graph 1\nC\t0x1p-1\nN\tuser\tu\t1\t1\t0\t1\n"}) {
    CAPTURE(bad);
    std::stringstream in(bad);
    try {
      LoadGraph(in);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kCorruptInput);
    }
  }
}
