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

#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "newsrep/config.hpp"
#include "newsrep/error.hpp"
#include "newsrep/harmonic.hpp"

using namespace newsrep;

TEST_CASE("key-value parsing") {
  const auto cfg = KeyValueConfig::Parse(
      "# comment\n"
      "c = 0.05\n"
      "name = \"quoted # not a comment\"\n"
      "[engine]\n"
      "iterations = 4  # trailing\n"
      "flag = true\n",
      "inline");
  CHECK(cfg.GetDouble("c") == 0.05);
  CHECK(cfg.GetString("name") == "quoted # not a comment");
  CHECK(cfg.GetInt("engine.iterations") == 4);
  CHECK(cfg.GetBool("engine.flag") == true);
  CHECK_FALSE(cfg.Has("iterations"));
  CHECK_THROWS_AS(cfg.RejectUnknown({"c", "name"}), Error);
  CHECK_NOTHROW(cfg.RejectUnknown({"c", "name", "engine.iterations", "engine.flag"}));
}

TEST_CASE("malformed config values") {
  CHECK_THROWS_AS(KeyValueConfig::Parse("novalue\n", "x"), Error);
  const auto cfg = KeyValueConfig::Parse("n = abc\n", "x");
  CHECK_THROWS_AS(cfg.GetInt("n"), Error);
  CHECK_THROWS_AS(cfg.GetDouble("n"), Error);
  CHECK_THROWS_AS(cfg.GetBool("n"), Error);
  CHECK_THROWS_AS(KeyValueConfig::Load("/nonexistent/newsrep.toml"), Error);
}

TEST_CASE("engine config file keeps defaults for missing keys") {
  const std::string path = "test_config_engine.toml";
  {
    std::ofstream out(path);
    out << "iterations = 5\npropagation_threshold = 0.05\n";
  }
  const auto config = harmonic::LoadEngineConfig(path);
  CHECK(config.iterations == 5);
  CHECK(config.propagation_threshold == 0.05);
  CHECK(config.c == 0.02);
  CHECK(config.propagation_depth == 1);
  CHECK_FALSE(config.include_editorial);
  {
    std::ofstream out(path);
    out << "bogus = 1\n";
  }
  CHECK_THROWS_AS(harmonic::LoadEngineConfig(path), Error);
  {
    std::ofstream out(path);
    out << "c = -1\n";
  }
  CHECK_THROWS_AS(harmonic::LoadEngineConfig(path), Error);
  std::remove(path.c_str());
}
