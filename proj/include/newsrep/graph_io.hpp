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

#include <iosfwd>

#include "newsrep/graph.hpp"

namespace newsrep {

// Text snapshot of a graph: a `#newsrep-graph 1` header, a `C` line with the
// regularization, then tab-separated node lines in index order
//   N item|user|site key alpha beta q seed
// then edge lines in insertion order
//   E url source user|site +1|-1 tweet|editorial|vote timestamp
// Doubles are hexfloat so a round trip is exact, and loading reproduces node
// indices and adjacency order.
void SaveGraph(std::ostream& out, const ReputationGraph& graph);
// Throws kCorruptInput on malformed input.
ReputationGraph LoadGraph(std::istream& in);

}  // namespace newsrep
