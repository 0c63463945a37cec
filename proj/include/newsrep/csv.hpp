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

#include <string>
#include <string_view>
#include <vector>

namespace newsrep {

// Quotes a field when it holds a comma, quote or line break.
std::string CsvField(std::string_view value);

// Splits one CSV line, honoring double-quoted fields. Throws kCorruptInput on
// an unterminated quote.
std::vector<std::string> SplitCsvLine(std::string_view line);

// Shortest text that parses back to the same double ("%.17g").
std::string FormatDouble(double value);

// Fixed two-decimal percentage, for human-readable summaries.
std::string FormatPercent(double value);

}  // namespace newsrep
