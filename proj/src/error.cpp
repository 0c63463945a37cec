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

#include "newsrep/error.hpp"

namespace newsrep {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kInvalidEdge: return "invalid-edge";
    case ErrorCode::kInvalidLabels: return "invalid-labels";
    case ErrorCode::kInconsistentState: return "inconsistent-state";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kInsufficientCandidates: return "insufficient-candidates";
    case ErrorCode::kDegenerateTraining: return "degenerate-training";
    case ErrorCode::kInvalidUrl: return "invalid-url";
    case ErrorCode::kInvalidSpec: return "invalid-spec";
    case ErrorCode::kInvalidStream: return "invalid-stream";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kCorruptInput: return "corrupt-input";
    case ErrorCode::kUsage: return "usage";
  }
  return "unknown";
}

}  // namespace newsrep
