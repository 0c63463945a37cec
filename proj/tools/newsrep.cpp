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

// Command-line entry point. Each subcommand wires library calls into one
// pipeline step and writes a metadata file next to its outputs.

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "newsrep/csv.hpp"
#include "newsrep/error.hpp"
#include "newsrep/evaluation.hpp"
#include "newsrep/graph.hpp"
#include "newsrep/graph_io.hpp"
#include "newsrep/harmonic.hpp"
#include "newsrep/ingestion.hpp"
#include "newsrep/logistic.hpp"
#include "newsrep/synth.hpp"
#include "newsrep/url.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace newsrep;

namespace {

enum ExitCode {
  kExitOk = 0,
  kExitOther = 1,
  kExitUsage = 2,
  kExitIo = 3,
  kExitInvalid = 4,
  kExitNotFound = 5,
  kExitCorrupt = 6,
};

int ExitFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage: return kExitUsage;
    case ErrorCode::kIo: return kExitIo;
    case ErrorCode::kNotFound: return kExitNotFound;
    case ErrorCode::kCorruptInput: return kExitCorrupt;
    default: return kExitInvalid;
  }
}

void ErrorLine(std::string_view code, const std::string& message) {
  std::cerr << json{{"error", code}, {"message", message}}.dump() << '\n';
}

std::string Sha256File(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char byte[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

std::ofstream OpenOut(const std::string& path) {
  if (auto parent = fs::path(path).parent_path(); !parent.empty()) {
    std::error_code ec;
    fs::create_directories(parent, ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  return out;
}

// Collects what a run read and how it was configured.
struct RunInfo {
  explicit RunInfo(std::string name) : command(std::move(name)) {}
  std::string command;
  std::vector<std::string> inputs;
  std::map<std::string, std::uint64_t> seeds;
  json extra = json::object();
};

void WriteMetadata(const std::string& path, const RunInfo& info,
                   const CLI::App& sub) {
  json meta;
  meta["tool"] = "newsrep";
  meta["version"] = NEWSREP_VERSION;
  meta["command"] = info.command;
  meta["config"] = sub.config_to_str(true, false);
  meta["public_suffix_snapshot"] = PublicSuffixList::Bundled().version();
  json digests = json::object();
  for (const auto& input : info.inputs) digests[input] = Sha256File(input);
  meta["input_sha256"] = digests;
  meta["rng_seeds"] = info.seeds;
  meta["details"] = info.extra;
  const auto now = std::chrono::system_clock::now();
  meta["finished_at_unix"] =
      std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch())
          .count();
  auto out = OpenOut(path);
  out << meta.dump(2) << '\n';
}

// "1d", "8h", "30m", "90s", a bare number of seconds, or "edge" (0).
std::int64_t ParseInterval(const std::string& text) {
  if (text == "edge" || text == "every-edge") return 0;
  std::size_t used = 0;
  long long value = 0;
  try {
    value = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kUsage, "bad interval '" + text + "'");
  }
  const std::string unit = text.substr(used);
  std::int64_t scale = 1;
  if (unit == "d") {
    scale = 86400;
  } else if (unit == "h") {
    scale = 3600;
  } else if (unit == "m") {
    scale = 60;
  } else if (!unit.empty() && unit != "s") {
    throw Error(ErrorCode::kUsage, "bad interval unit in '" + text + "'");
  }
  if (value < 0) throw Error(ErrorCode::kUsage, "interval must be >= 0");
  return value * scale;
}

// A bare integer is epoch seconds; anything else must be YYYY-MM-DD.
std::int64_t ParseTime(const std::string& text) {
  if (!text.empty() &&
      text.find_first_not_of("0123456789") == std::string::npos) {
    return std::stoll(text);
  }
  return ingestion::ParseIsoDate(text);
}

// Engine flags shared by several subcommands; unset flags fall back to the
// engine config file, then to built-in defaults.
struct EngineFlags {
  std::string file;
  std::optional<double> c;
  std::optional<int> iterations;
  std::optional<int> depth;
  std::optional<double> kappa;
  bool editorial = false;
  bool no_votes = false;

  void Register(CLI::App* app) {
    app->add_option("--engine-config", file, "Engine config file (key = value)");
    app->add_option("--c", c, "Regularization constant");
    app->add_option("--iterations", iterations, "Fixpoint iterations");
    app->add_option("--depth", depth, "Online propagation depth");
    app->add_option("--kappa", kappa, "Online propagation threshold");
    app->add_flag("--include-editorial", editorial,
                  "Use editorial site edges in propagation");
    app->add_flag("--exclude-votes", no_votes, "Ignore vote edges");
  }

  harmonic::EngineConfig Resolve(unsigned threads, RunInfo& info) const {
    harmonic::EngineConfig config;
    if (!file.empty()) {
      config = harmonic::LoadEngineConfig(file);
      info.inputs.push_back(file);
    }
    if (c) config.c = *c;
    if (iterations) config.iterations = *iterations;
    if (depth) config.propagation_depth = *depth;
    if (kappa) config.propagation_threshold = *kappa;
    if (editorial) config.include_editorial = true;
    if (no_votes) config.include_votes = false;
    config.threads = threads;
    harmonic::Validate(config);
    info.extra["engine"] = {
        {"c", config.c},
        {"iterations", config.iterations},
        {"propagation_depth", config.propagation_depth},
        {"propagation_threshold", config.propagation_threshold},
        {"include_editorial", config.include_editorial},
        {"include_votes", config.include_votes}};
    return config;
  }
};

std::unordered_set<std::string> ToUnordered(const std::set<std::string>& s) {
  return {s.begin(), s.end()};
}

std::string DefaultMeta(const std::string& out) {
  return out == "-" ? "newsrep.meta.json" : out + ".meta.json";
}

std::ostream& OutOrStdout(const std::string& path, std::ofstream& file) {
  if (path == "-") return std::cout;
  file = OpenOut(path);
  return file;
}

struct Options {
  unsigned threads = 1;
  std::string metadata;
};

// ---------------------------------------------------------------- commands

struct SynthCmd {
  std::string spec_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;

  void Register(CLI::App* app) {
    app->add_option("--spec", spec_path, "Generator spec file (key = value)");
    app->add_option("--seed", seed, "Override rng_seed from --spec");
    app->add_option("--out", out_dir, "Output directory")->required();
  }

  int Run(const Options& opt, CLI::App* app) {
    RunInfo info{"synth"};
    synth::GeneratorSpec spec;
    if (!spec_path.empty()) {
      spec = synth::LoadGeneratorSpec(spec_path);
      info.inputs.push_back(spec_path);
    }
    if (seed) spec.rng_seed = *seed;
    const auto data = synth::Generate(spec);
    const fs::path dir(out_dir);
    {
      auto out = OpenOut((dir / "records.jsonl").string());
      ingestion::WriteRecords(out, data.records);
    }
    {
      auto out = OpenOut((dir / "seeds.csv").string());
      synth::WriteSeedsCsv(out, data.seeds);
    }
    {
      auto out = OpenOut((dir / "truth.csv").string());
      synth::WriteTruthCsv(out, data);
    }
    {
      auto out = OpenOut((dir / "fake_sites.txt").string());
      for (const auto& site : data.fake_sites) out << site << '\n';
    }
    info.seeds["generator"] = spec.rng_seed;
    info.extra["records"] = data.records.size();
    WriteMetadata(opt.metadata.empty() ? (dir / "metadata.json").string()
                                       : opt.metadata,
                  info, *app);
    std::cout << "wrote " << data.records.size() << " records to " << out_dir
              << '\n';
    return kExitOk;
  }
};

struct IngestCmd {
  std::vector<std::string> records;
  std::string out_dir;
  bool editorial = false;
  double max_malformed = 0.05;
  std::string train_start, train_end, cutoff, test_start, test_end;
  bool alternate_days = false;

  void Register(CLI::App* app) {
    app->add_option("--records", records, "JSONL record files")
        ->required();
    app->add_option("--out", out_dir, "Output directory")->required();
    app->add_flag("--editorial-edges", editorial,
                  "Add site editorial edges to the graph");
    app->add_option("--max-malformed", max_malformed,
                    "Largest tolerated fraction of malformed lines")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--train-start", train_start, "First train day (YYYY-MM-DD)");
    app->add_option("--train-end", train_end, "Last train day");
    app->add_option("--cutoff", cutoff, "Train shares strictly before this day");
    app->add_option("--test-start", test_start, "First test day");
    app->add_option("--test-end", test_end, "Last test day");
    app->add_flag("--alternate-days", alternate_days,
                  "Keep shares on every other day only");
  }

  int Run(const Options& opt, CLI::App* app) {
    RunInfo info{"ingest"};
    info.inputs = records;
    ingestion::LoadOptions load;
    load.max_malformed_fraction = max_malformed;
    auto all = ingestion::LoadRecordFiles(records, opt.threads, load);
    const fs::path dir(out_dir);

    const bool split = !train_start.empty() || !train_end.empty() ||
                       !cutoff.empty() || !test_start.empty() || !test_end.empty();
    std::vector<ingestion::UrlBundle> graph_bundles;
    if (split) {
      if (train_start.empty() || train_end.empty() || cutoff.empty() ||
          test_start.empty() || test_end.empty()) {
        throw Error(ErrorCode::kUsage,
                    "a split needs --train-start, --train-end, --cutoff, "
                    "--test-start and --test-end");
      }
      ingestion::SplitSpec spec;
      spec.train_first_seen_start = ingestion::ParseIsoDate(train_start);
      spec.train_first_seen_end = ingestion::ParseIsoDate(train_end);
      spec.train_tweet_cutoff = ingestion::ParseIsoDate(cutoff);
      spec.test_first_seen_start = ingestion::ParseIsoDate(test_start);
      spec.test_first_seen_end = ingestion::ParseIsoDate(test_end);
      spec.alternate_days = alternate_days;
      auto result = ingestion::TemporalSplit(all, spec);
      WriteBundles((dir / "train.jsonl").string(), result.train);
      WriteBundles((dir / "test.jsonl").string(), result.test);
      info.extra["train_urls"] = result.train.size();
      info.extra["test_urls"] = result.test.size();
      graph_bundles = std::move(result.train);
    } else {
      graph_bundles = ingestion::BundleRecords(all);
    }
    WriteBundles((dir / "records.jsonl").string(), ingestion::BundleRecords(all));

    ReputationGraph graph;
    ingestion::GraphBuildOptions build;
    build.editorial_edges = editorial;
    const std::size_t edges = ingestion::AddBundlesToGraph(graph, graph_bundles, build);
    {
      auto out = OpenOut((dir / "graph.txt").string());
      SaveGraph(out, graph);
    }
    info.extra["records"] = all.size();
    info.extra["edges"] = edges;
    WriteMetadata(opt.metadata.empty() ? (dir / "metadata.json").string()
                                       : opt.metadata,
                  info, *app);
    std::cout << "records: " << all.size() << "\nitems: " << graph.ItemCount()
              << "\nusers: " << graph.UserCount() << "\nedges: " << edges
              << '\n';
    return kExitOk;
  }

  // Canonical, timestamp-sorted records rebuilt from bundles.
  static void WriteBundles(const std::string& path,
                           const std::vector<ingestion::UrlBundle>& bundles) {
    std::vector<ingestion::ShareRecord> out;
    for (const auto& b : bundles) {
      for (const auto& s : b.shares) {
        ingestion::ShareRecord r;
        r.user = s.user;
        r.url = b.url;
        r.timestamp = s.timestamp;
        r.vote = s.vote;
        if (!b.title.empty()) r.title = b.title;
        if (!b.description.empty()) r.description = b.description;
        out.push_back(std::move(r));
      }
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return std::tie(a.timestamp, a.url, a.user) <
             std::tie(b.timestamp, b.url, b.user);
    });
    auto file = OpenOut(path);
    ingestion::WriteRecords(file, out);
  }
};

// Seeds come either from a url,label CSV or from a fake-site list plus
// random non-fake sampling.
struct SeedFlags {
  std::string seeds_csv;
  std::string fake_sites;
  int multiplier = 2;
  std::uint64_t seed = 1;

  void Register(CLI::App* app) {
    auto* csv = app->add_option("--seeds", seeds_csv, "Seed labels CSV (url,label)");
    auto* sites = app->add_option("--fake-sites", fake_sites,
                                  "Fake site list; non-fake seeds are sampled");
    csv->excludes(sites);
    app->add_option("--multiplier", multiplier,
                    "Non-fake seeds per fake seed when sampling")
        ->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "Sampling rng seed");
  }

  harmonic::SeedLabels Resolve(const ReputationGraph& graph, RunInfo& info) const {
    if (!seeds_csv.empty()) {
      info.inputs.push_back(seeds_csv);
      const auto urls = synth::LoadSeedsCsv(seeds_csv);
      harmonic::SeedLabels labels;
      for (std::uint32_t i = 0; i < graph.ItemCount(); ++i) {
        const NodeId id{i, NodeKind::kItem};
        if (urls.fake.contains(graph.Key(id))) labels.fake_items.push_back(id);
        if (urls.nonfake.contains(graph.Key(id))) labels.nonfake_items.push_back(id);
      }
      return labels;
    }
    if (fake_sites.empty()) {
      throw Error(ErrorCode::kUsage, "one of --seeds or --fake-sites is required");
    }
    info.inputs.push_back(fake_sites);
    info.seeds["seed_sampling"] = seed;
    const auto list = ingestion::LoadSeedList(fake_sites);
    return harmonic::SelectTrainingLabels(graph, ToUnordered(list.domains),
                                          multiplier, seed);
  }
};

struct TrainHarmonicCmd {
  std::string records;
  std::string out = "classifications.csv";
  std::string graph_out;
  bool editorial_edges = false;
  SeedFlags seeds;
  EngineFlags engine;

  void Register(CLI::App* app) {
    app->add_option("--records", records, "JSONL records")
        ->required();
    app->add_option("--out", out, "Classification CSV");
    app->add_option("--graph-out", graph_out, "Write the fixpoint graph snapshot");
    app->add_flag("--editorial-edges", editorial_edges,
                  "Add site editorial edges to the graph");
    seeds.Register(app);
    engine.Register(app);
  }

  int Run(const Options& opt, CLI::App* app) {
    RunInfo info{"train-harmonic"};
    info.inputs.push_back(records);
    const auto config = engine.Resolve(opt.threads, info);
    ReputationGraph graph(config.c);
    ingestion::GraphBuildOptions build;
    build.editorial_edges = editorial_edges;
    ingestion::AddBundlesToGraph(
        graph, ingestion::BundleRecords(ingestion::LoadRecords(records)), build);
    const auto labels = seeds.Resolve(graph, info);
    const auto result = harmonic::RunFixpoint(graph, labels, config);
    {
      std::ofstream file;
      harmonic::WriteClassificationsCsv(OutOrStdout(out, file), graph, result);
    }
    if (!graph_out.empty()) {
      auto file = OpenOut(graph_out);
      SaveGraph(file, graph);
    }
    std::size_t fake = 0;
    for (const auto& c : result) fake += c.label == harmonic::Label::kFake;
    info.extra["items"] = graph.ItemCount();
    info.extra["fake_seeds"] = labels.fake_items.size();
    info.extra["nonfake_seeds"] = labels.nonfake_items.size();
    info.extra["labeled_fake"] = fake;
    WriteMetadata(opt.metadata.empty() ? DefaultMeta(out) : opt.metadata, info,
                  *app);
    std::cerr << "items: " << graph.ItemCount() << ", labeled fake: " << fake
              << '\n';
    return kExitOk;
  }
};

struct TrainLogisticCmd {
  std::string train;
  std::string test;
  std::string fake_sites;
  std::string aliases;
  std::string mode = "U";
  std::string out = "model.tsv";
  std::string predictions;
  logistic::Hyperparams hp;
  bool no_class_weights = false;

  void Register(CLI::App* app) {
    app->add_option("--train", train, "Training JSONL records")
        ->required();
    app->add_option("--fake-sites", fake_sites, "Fake site list (labels)")
        ->required();
    app->add_option("--aliases", aliases, "Site aliases (domain<TAB>alias...)");
    app->add_option("--mode", mode, "Feature mode")
        ->check(CLI::IsMember({"U", "UT", "T"}));
    app->add_option("--out", out, "Model file");
    app->add_option("--test", test, "Test JSONL records to score");
    app->add_option("--predictions", predictions, "Prediction CSV for --test");
    app->add_option("--learning-rate", hp.learning_rate)->check(CLI::PositiveNumber);
    app->add_option("--epochs", hp.epochs)->check(CLI::PositiveNumber);
    app->add_option("--batch-size", hp.batch_size)->check(CLI::PositiveNumber);
    app->add_option("--l2", hp.l2)->check(CLI::NonNegativeNumber);
    app->add_flag("--no-class-weights", no_class_weights);
    app->add_option("--seed", hp.rng_seed, "Shuffling rng seed");
  }

  int Run(const Options& opt, CLI::App* app) {
    RunInfo info{"train-logistic"};
    info.inputs = {train, fake_sites};
    hp.class_weighting = !no_class_weights;
    const auto m = logistic::ParseMode(mode);
    const auto list = ingestion::LoadSeedList(fake_sites);
    std::map<std::string, std::vector<std::string>> alias_map;
    if (!aliases.empty()) {
      alias_map = ingestion::LoadAliases(aliases);
      info.inputs.push_back(aliases);
    }
    auto featurize = [&](const ingestion::UrlBundle& b) {
      auto it = alias_map.find(b.site);
      return it == alias_map.end()
                 ? logistic::Featurize(b, m)
                 : logistic::Featurize(b, m, it->second);
    };
    std::vector<logistic::LabeledExample> examples;
    for (const auto& b : ingestion::BundleRecords(ingestion::LoadRecords(train))) {
      examples.push_back({featurize(b), list.Contains(b.site)
                                            ? logistic::ClassLabel::kFake
                                            : logistic::ClassLabel::kNonFake});
    }
    const auto model = logistic::Train(examples, m, hp);
    {
      auto file = OpenOut(out);
      logistic::SaveModel(file, model);
    }
    info.seeds["training_shuffle"] = hp.rng_seed;
    info.extra["examples"] = examples.size();
    if (!test.empty()) {
      info.inputs.push_back(test);
      const std::string pred_path =
          predictions.empty() ? out + ".predictions.csv" : predictions;
      auto file = OpenOut(pred_path);
      file << "url,score,label\n";
      for (const auto& b : ingestion::BundleRecords(ingestion::LoadRecords(test))) {
        const auto p = logistic::Predict(model, featurize(b));
        file << CsvField(b.url) << ',' << FormatDouble(p.score) << ','
             << (p.label == logistic::ClassLabel::kFake ? "fake" : "reliable")
             << '\n';
      }
    }
    WriteMetadata(opt.metadata.empty() ? DefaultMeta(out) : opt.metadata, info,
                  *app);
    return kExitOk;
  }
};

struct ClassifyCmd {
  std::string graph_path;
  std::string model_path;
  std::vector<std::string> urls;
  std::string records;
  std::string out = "-";

  void Register(CLI::App* app) {
    auto* g = app->add_option("--graph", graph_path, "Graph snapshot (harmonic)");
    auto* m = app->add_option("--model", model_path, "Logistic model");
    g->excludes(m);
    app->add_option("--url", urls, "URL to classify (repeatable)");
    app->add_option("--records", records, "JSONL records to score (logistic)");
    app->add_option("--out", out, "Output CSV, - for stdout");
  }

  int Run(const Options& opt, CLI::App* app) {
    RunInfo info{"classify"};
    std::ofstream file;
    std::ostringstream buffer;
    if (!graph_path.empty()) {
      info.inputs.push_back(graph_path);
      std::ifstream in(graph_path, std::ios::binary);
      const auto graph = LoadGraph(in);
      buffer << "url,q,label\n";
      for (const auto& raw : urls) {
        const auto rep = harmonic::Reputation(graph, CanonicalizeUrl(raw));
        buffer << CsvField(CanonicalizeUrl(raw)) << ','
               << FormatDouble(rep.reputation) << ','
               << harmonic::LabelName(rep.label) << '\n';
      }
    } else if (!model_path.empty()) {
      info.inputs.push_back(model_path);
      std::ifstream in(model_path, std::ios::binary);
      const auto model = logistic::LoadModel(in);
      if (records.empty()) {
        throw Error(ErrorCode::kUsage, "--model needs --records");
      }
      info.inputs.push_back(records);
      buffer << "url,score,label\n";
      for (const auto& b : ingestion::BundleRecords(ingestion::LoadRecords(records))) {
        const auto p = logistic::Predict(model, logistic::Featurize(b, model.mode()));
        buffer << CsvField(b.url) << ',' << FormatDouble(p.score) << ','
               << (p.label == logistic::ClassLabel::kFake ? "fake" : "reliable")
               << '\n';
      }
    } else {
      throw Error(ErrorCode::kUsage, "one of --graph or --model is required");
    }
    // Nothing is written until every lookup succeeded.
    OutOrStdout(out, file) << buffer.str();
    WriteMetadata(opt.metadata.empty() ? DefaultMeta(out) : opt.metadata, info,
                  *app);
    return kExitOk;
  }
};

struct StreamCmd {
  std::string graph_path;
  std::string records;
  std::string out = "flips.csv";
  std::string graph_out;
  EngineFlags engine;

  void Register(CLI::App* app) {
    app->add_option("--graph", graph_path, "Graph snapshot with a prior fixpoint")
        ->required();
    app->add_option("--records", records, "JSONL records, sorted by time")
        ->required();
    app->add_option("--out", out, "Label flip log CSV");
    app->add_option("--graph-out", graph_out, "Write the updated snapshot");
    engine.Register(app);
  }

  int Run(const Options& opt, CLI::App* app) {
    RunInfo info{"stream"};
    info.inputs = {graph_path, records};
    std::ifstream in(graph_path, std::ios::binary);
    auto graph = LoadGraph(in);
    auto config = engine.Resolve(opt.threads, info);
    if (!engine.c) config.c = graph.regularization();
    std::ofstream file;
    auto& log = OutOrStdout(out, file);
    log << "ts,user,url,q,label\n";
    std::int64_t last = 0;
    std::size_t processed = 0;
    std::size_t flips = 0;
    ingestion::ForEachRecord(records, [&](ingestion::ShareRecord&& r) {
      if (r.timestamp < last) {
        throw Error(ErrorCode::kInvalidStream, "records are not sorted by time");
      }
      last = r.timestamp;
      const std::string url = CanonicalizeUrl(r.url);
      const NodeId item = graph.AddItem(url);
      const NodeId user = graph.AddSource(r.user, NodeKind::kUser);
      const auto kind = r.vote ? EdgeKind::kVote : EdgeKind::kTweet;
      if (graph.AddEdge(item, user, r.vote.value_or(1), kind, r.timestamp) ==
          InsertResult::kDuplicate) {
        return;
      }
      const auto edge_index = *graph.FindEdge(item, user, kind);
      const auto update =
          harmonic::IngestEdgeOnline(graph, graph.EdgeAt(edge_index), config);
      ++processed;
      flips += update.flipped.size();
      for (NodeId id : update.flipped) {
        log << r.timestamp << ',' << CsvField(r.user) << ','
            << CsvField(graph.Key(id)) << ',' << FormatDouble(graph.State(id).q)
            << ',' << harmonic::LabelName(harmonic::LabelFor(graph.State(id).q))
            << '\n';
      }
    });
    if (!graph_out.empty()) {
      auto g = OpenOut(graph_out);
      SaveGraph(g, graph);
    }
    info.extra["edges"] = processed;
    info.extra["flips"] = flips;
    WriteMetadata(opt.metadata.empty() ? DefaultMeta(out) : opt.metadata, info,
                  *app);
    std::cerr << "edges: " << processed << ", label flips: " << flips << '\n';
    return kExitOk;
  }
};

struct EvalRecallCmd {
  std::string classifications;
  std::string fake_sites;
  std::string exclude;
  std::string out = "recall.csv";

  void Register(CLI::App* app) {
    app->add_option("--classifications", classifications,
                    "CSV with url and label columns")
        ->required();
    app->add_option("--fake-sites", fake_sites, "Seed fake site list")
        ->required();
    app->add_option("--exclude-seeds", exclude,
                    "Seed CSV whose URLs are left out of the test set");
    app->add_option("--out", out, "Recall CSV");
  }

  int Run(const Options& opt, CLI::App* app) {
    RunInfo info{"eval-recall"};
    info.inputs = {classifications, fake_sites};
    const auto flags = evaluation::LoadFlagsCsv(classifications);
    const auto list = ingestion::LoadSeedList(fake_sites);
    evaluation::SeedUrls skip;
    if (!exclude.empty()) {
      info.inputs.push_back(exclude);
      skip = synth::LoadSeedsCsv(exclude);
    }
    std::vector<std::string> test;
    for (const auto& [url, _] : flags) {
      if (!skip.fake.contains(url) && !skip.nonfake.contains(url)) {
        test.push_back(url);
      }
    }
    const auto report = evaluation::ComputeRecall(flags, list.domains, test);
    std::ofstream file;
    evaluation::WriteRecallCsv(OutOrStdout(out, file), report);
    WriteMetadata(opt.metadata.empty() ? DefaultMeta(out) : opt.metadata, info,
                  *app);
    std::cout << evaluation::RecallSummary(report);
    return kExitOk;
  }
};

struct EvalSitesCmd {
  std::string classifications;
  std::size_t min_urls = evaluation::kSuspiciousMinUrls;
  std::string out = "site_flags.csv";

  void Register(CLI::App* app) {
    app->add_option("--classifications", classifications,
                    "CSV with url and label columns")
        ->required();
    app->add_option("--min-urls", min_urls, "Omit sites with fewer URLs");
    app->add_option("--out", out, "Per-site CSV");
  }

  int Run(const Options& opt, CLI::App* app) {
    RunInfo info{"eval-sites"};
    info.inputs = {classifications};
    const auto flags = evaluation::LoadFlagsCsv(classifications);
    const auto report =
        evaluation::SiteFlagRates(flags, evaluation::SitesOf(flags), min_urls);
    std::ofstream file;
    evaluation::WriteSiteFlagsCsv(OutOrStdout(out, file), report);
    WriteMetadata(opt.metadata.empty() ? DefaultMeta(out) : opt.metadata, info,
                  *app);
    std::cout << "sites reported: " << report.sites.size() << '\n';
    return kExitOk;
  }
};

struct EvalCrossListCmd {
  std::string classifications;
  std::string list_a;
  std::string list_b;
  std::size_t min_urls = evaluation::kSuspiciousMinUrls;
  double flag_pct = evaluation::kSuspiciousFlagPct;
  std::string out = "crosslist.csv";

  void Register(CLI::App* app) {
    app->add_option("--classifications", classifications,
                    "CSV of a classifier seeded with list A")
        ->required();
    app->add_option("--list-a", list_a, "Seed site list")
        ->required();
    app->add_option("--list-b", list_b, "Other site list")
        ->required();
    app->add_option("--min-urls", min_urls, "URLs needed to judge a site");
    app->add_option("--flag-pct", flag_pct,
                    "A site is suspicious above this flagged percentage");
    app->add_option("--out", out, "Cross-list CSV");
  }

  int Run(const Options& opt, CLI::App* app) {
    RunInfo info{"eval-crosslist"};
    info.inputs = {classifications, list_a, list_b};
    const auto flags = evaluation::LoadFlagsCsv(classifications);
    const auto report = evaluation::CrossListDetection(
        flags, ingestion::LoadSeedList(list_a).domains,
        ingestion::LoadSeedList(list_b).domains, evaluation::SitesOf(flags),
        min_urls, flag_pct);
    std::ofstream file;
    evaluation::WriteCrossListCsv(OutOrStdout(out, file), report);
    WriteMetadata(opt.metadata.empty() ? DefaultMeta(out) : opt.metadata, info,
                  *app);
    std::cout << evaluation::CrossListSummary(report);
    return kExitOk;
  }
};

struct EvalCorrelationCmd {
  std::string records;
  std::vector<std::string> sites;
  std::size_t top = 20;
  std::string out = "correlation.csv";

  void Register(CLI::App* app) {
    app->add_option("--records", records, "JSONL records")
        ->required();
    app->add_option("--sites", sites, "Sites to correlate")->delimiter(',');
    app->add_option("--top", top, "Without --sites, use the N most tweeted sites");
    app->add_option("--out", out, "Correlation matrix CSV");
  }

  int Run(const Options& opt, CLI::App* app) {
    RunInfo info{"eval-correlation"};
    info.inputs = {records};
    const auto all = ingestion::LoadRecords(records);
    std::vector<std::string> chosen;
    for (const auto& s : sites) chosen.push_back(NormalizeDomain(s));
    if (chosen.empty()) {
      std::map<std::string, std::size_t> counts;
      for (const auto& r : all) {
        if (!r.vote) ++counts[SiteOf(CanonicalizeUrl(r.url))];
      }
      std::vector<std::pair<std::size_t, std::string>> ranked;
      for (const auto& [site, n] : counts) ranked.emplace_back(n, site);
      std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
      });
      for (std::size_t i = 0; i < ranked.size() && i < top; ++i) {
        chosen.push_back(ranked[i].second);
      }
    }
    const auto matrix = evaluation::CorrelationMatrix(all, chosen);
    std::ofstream file;
    evaluation::WriteCorrelationCsv(OutOrStdout(out, file), chosen, matrix);
    WriteMetadata(opt.metadata.empty() ? DefaultMeta(out) : opt.metadata, info,
                  *app);
    return kExitOk;
  }
};

struct EvalAgreementCmd {
  std::string records;
  std::string seeds;
  std::string interval = "1d";
  double threshold = 0.1;
  std::string warmup_end;
  std::string out = "agreement.csv";
  bool editorial_edges = false;
  EngineFlags engine;

  void Register(CLI::App* app) {
    app->add_option("--records", records, "JSONL records, sorted by time")
        ->required();
    app->add_option("--seeds", seeds, "Seed labels CSV (url,label)")
        ->required();
    app->add_option("--interval", interval,
                    "Recompute interval: 1d, 8h, 30m, seconds, or edge");
    app->add_option("--threshold", threshold, "Agreement tolerance on |dq|")
        ->check(CLI::PositiveNumber);
    app->add_option("--warmup-end", warmup_end,
                    "Records before this day (or epoch second) seed the graph");
    app->add_option("--out", out, "Per-interval agreement CSV");
    app->add_flag("--editorial-edges", editorial_edges,
                  "Add site editorial edges to the graph");
    engine.Register(app);
  }

  int Run(const Options& opt, CLI::App* app) {
    RunInfo info{"eval-agreement"};
    info.inputs = {records, seeds};
    evaluation::ReplayOptions options;
    options.config = engine.Resolve(opt.threads, info);
    options.interval_seconds = ParseInterval(interval);
    options.threshold = threshold;
    options.graph.editorial_edges = editorial_edges;
    if (!warmup_end.empty()) options.warmup_end = ParseTime(warmup_end);
    const auto stream = ingestion::LoadRecords(records);
    const auto report =
        evaluation::ReplayAgreement(stream, synth::LoadSeedsCsv(seeds), options);
    std::ofstream file;
    evaluation::WriteAgreementCsv(OutOrStdout(out, file), report);
    WriteMetadata(opt.metadata.empty() ? DefaultMeta(out) : opt.metadata, info,
                  *app);
    std::cout << evaluation::AgreementSummary(report);
    return kExitOk;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"newsrep: reputation engine for shared news items"};
  app.set_version_flag("--version", std::string(NEWSREP_VERSION));
  app.set_config("--config", "", "TOML config; command-line flags take precedence");
  app.require_subcommand(1);
  Options opt;
  app.add_option("--threads", opt.threads, "Worker threads (1 for audits)")
      ->check(CLI::PositiveNumber);
  app.add_option("--metadata", opt.metadata,
                 "Metadata file path (defaults next to the main output)");

  SynthCmd synth_cmd;
  IngestCmd ingest_cmd;
  TrainHarmonicCmd harmonic_cmd;
  TrainLogisticCmd logistic_cmd;
  ClassifyCmd classify_cmd;
  StreamCmd stream_cmd;
  EvalRecallCmd recall_cmd;
  EvalSitesCmd sites_cmd;
  EvalCrossListCmd crosslist_cmd;
  EvalCorrelationCmd correlation_cmd;
  EvalAgreementCmd agreement_cmd;

  std::function<int()> run;
  auto add = [&](const char* name, const char* help, auto& cmd) {
    CLI::App* sub = app.add_subcommand(name, help);
    cmd.Register(sub);
    sub->callback([&run, &cmd, &opt, sub] {
      run = [&cmd, &opt, sub] { return cmd.Run(opt, sub); };
    });
  };
  add("synth", "Generate a planted-truth synthetic dataset", synth_cmd);
  add("ingest", "Canonicalize records, split, and build a graph", ingest_cmd);
  add("train-harmonic", "Run the harmonic fixpoint and classify items",
      harmonic_cmd);
  add("train-logistic", "Train the sparse logistic baseline", logistic_cmd);
  add("classify", "Look up reputations or score records", classify_cmd);
  add("stream", "Apply new records with online propagation", stream_cmd);
  add("eval-recall", "Fake and non-fake recall", recall_cmd);
  add("eval-sites", "Per-site flag rates", sites_cmd);
  add("eval-crosslist", "Discovery of sites from a second list", crosslist_cmd);
  add("eval-correlation", "Site co-sharing correlation matrix", correlation_cmd);
  add("eval-agreement", "Online versus fixpoint agreement by stream replay",
      agreement_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::FileError& e) {
    ErrorLine("io", e.what());
    return kExitIo;
  } catch (const CLI::ParseError& e) {
    ErrorLine("usage", e.what());
    return kExitUsage;
  }

  try {
    return run();
  } catch (const Error& e) {
    ErrorLine(ErrorCodeName(e.code()), e.what());
    return ExitFor(e.code());
  } catch (const std::exception& e) {
    ErrorLine("internal", e.what());
    return kExitOther;
  }
}
