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

#include "newsrep/logistic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "newsrep/csv.hpp"
#include "newsrep/error.hpp"
#include "newsrep/rng.hpp"

namespace newsrep::logistic {

namespace {

constexpr double kWeightGrid = 0x1.0p-24;
constexpr double kWeightLimit = 1024.0;
constexpr std::string_view kUserPrefix = "user:";
constexpr std::string_view kTokenPrefix = "token:";
constexpr std::string_view kFormatTag = "newsrep-logistic-v1";

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

bool IsUserFeature(std::string_view key) { return key.starts_with(kUserPrefix); }

}  // namespace

std::string_view ModeName(Mode mode) {
  switch (mode) {
    case Mode::kU: return "U";
    case Mode::kUT: return "UT";
    case Mode::kT: return "T";
  }
  return "?";
}

Mode ParseMode(std::string_view name) {
  if (name == "U" || name == "u") return Mode::kU;
  if (name == "UT" || name == "ut") return Mode::kUT;
  if (name == "T" || name == "t") return Mode::kT;
  throw Error(ErrorCode::kInvalidInput,
              "unknown feature mode '" + std::string(name) + "'");
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto u = static_cast<unsigned char>(ch);
    if (std::isalnum(u) || u >= 0x80) {
      current += static_cast<char>(std::tolower(u));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

FeatureVector Featurize(const ingestion::UrlBundle& bundle, Mode mode,
                        std::span<const std::string> aliases) {
  FeatureVector fv;
  if (mode != Mode::kT) {
    for (const auto& user : bundle.Sharers()) {
      fv.keys.push_back(std::string(kUserPrefix) + user);
    }
  }
  if (mode != Mode::kU) {
    const auto names = ingestion::SiteMentionPatterns(bundle.site, aliases);
    auto mentions_site = [&](const std::string& token) {
      return std::any_of(names.begin(), names.end(), [&](const std::string& n) {
        return token.find(n) != std::string::npos;
      });
    };
    for (const std::string* text : {&bundle.title, &bundle.description}) {
      const std::string scrubbed =
          ingestion::ScrubSiteMentions(*text, bundle.site, aliases);
      for (auto& token : Tokenize(scrubbed)) {
        if (!mentions_site(token)) {
          fv.keys.push_back(std::string(kTokenPrefix) + token);
        }
      }
    }
  }
  std::sort(fv.keys.begin(), fv.keys.end());
  fv.keys.erase(std::unique(fv.keys.begin(), fv.keys.end()), fv.keys.end());
  return fv;
}

ClassWeights ComputeClassWeights(std::size_t n_fake, std::size_t n_nonfake) {
  if (n_fake == 0 || n_nonfake == 0) {
    throw Error(ErrorCode::kDegenerateTraining,
                "both classes must be present to weight them");
  }
  const double n = static_cast<double>(n_fake + n_nonfake);
  return {n / (2.0 * static_cast<double>(n_fake)),
          n / (2.0 * static_cast<double>(n_nonfake))};
}

double QuantizeWeight(double w) {
  if (!std::isfinite(w)) {
    throw Error(ErrorCode::kInvalidInput, "non-finite model weight");
  }
  const double clamped = std::clamp(w, -kWeightLimit, kWeightLimit);
  return std::nearbyint(clamped / kWeightGrid) * kWeightGrid;
}

SparseModel::SparseModel(Mode mode, double bias,
                         std::unordered_map<std::string, double> weights,
                         Hyperparams hyperparams)
    : mode_(mode),
      bias_(QuantizeWeight(bias)),
      weights_(std::move(weights)),
      hyperparams_(hyperparams) {
  for (auto& [key, w] : weights_) w = QuantizeWeight(w);
}

double SparseModel::Weight(std::string_view key) const {
  auto it = weights_.find(std::string(key));
  return it == weights_.end() ? 0.0 : it->second;
}

SparseModel Train(std::span<const LabeledExample> examples, Mode mode,
                  const Hyperparams& hp) {
  if (hp.epochs < 1 || hp.batch_size < 1 || !(hp.learning_rate > 0.0) ||
      hp.l2 < 0.0) {
    throw Error(ErrorCode::kInvalidInput, "invalid training hyperparameters");
  }
  std::size_t n_fake = 0;
  for (const auto& ex : examples) n_fake += ex.label == ClassLabel::kFake;
  const std::size_t n_nonfake = examples.size() - n_fake;
  if (n_fake == 0 || n_nonfake == 0) {
    throw Error(ErrorCode::kDegenerateTraining,
                "training data has a single class");
  }
  const ClassWeights cw = hp.class_weighting
                              ? ComputeClassWeights(n_fake, n_nonfake)
                              : ClassWeights{1.0, 1.0};

  // Dense feature ids in key order, so the result does not depend on hashing.
  std::map<std::string, std::uint32_t> ids;
  for (const auto& ex : examples) {
    for (const auto& key : ex.features.keys) ids.try_emplace(key, 0);
  }
  std::vector<std::string> keys;
  keys.reserve(ids.size());
  for (auto& [key, id] : ids) {
    id = static_cast<std::uint32_t>(keys.size());
    keys.push_back(key);
  }
  std::vector<std::vector<std::uint32_t>> rows(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    for (const auto& key : examples[i].features.keys) {
      rows[i].push_back(ids.at(key));
    }
  }

  // w = scale * v, so the L2 shrink of every weight is one multiply.
  std::vector<double> v(keys.size(), 0.0);
  double scale = 1.0;
  double bias = 0.0;
  std::vector<double> grad(keys.size(), 0.0);
  std::vector<char> marked(keys.size(), 0);
  std::vector<std::uint32_t> touched;
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(hp.rng_seed);
  const auto batch = static_cast<std::size_t>(hp.batch_size);

  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    rng.Shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      double bias_grad = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t i = order[k];
        double z = 0.0;
        for (std::uint32_t f : rows[i]) z += v[f];
        z = bias + scale * z;
        const bool fake = examples[i].label == ClassLabel::kFake;
        const double g =
            (fake ? cw.fake : cw.nonfake) * (Sigmoid(z) - (fake ? 1.0 : 0.0));
        bias_grad += g;
        for (std::uint32_t f : rows[i]) {
          if (!marked[f]) {
            marked[f] = 1;
            touched.push_back(f);
          }
          grad[f] += g;
        }
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      scale *= 1.0 - hp.learning_rate * hp.l2;
      for (std::uint32_t f : touched) {
        v[f] -= hp.learning_rate * grad[f] * inv / scale;
        grad[f] = 0.0;
        marked[f] = 0;
      }
      touched.clear();
      bias -= hp.learning_rate * bias_grad * inv;
      if (scale < 1e-6) {
        for (double& x : v) x *= scale;
        scale = 1.0;
      }
    }
  }

  std::unordered_map<std::string, double> weights;
  for (std::size_t f = 0; f < keys.size(); ++f) {
    const double w = QuantizeWeight(scale * v[f]);
    if (w != 0.0) weights.emplace(keys[f], w);
  }
  return SparseModel(mode, bias, std::move(weights), hp);
}

Prediction Predict(const SparseModel& model, const FeatureVector& features) {
  double score = model.bias();
  for (const auto& key : features.keys) score += model.Weight(key);
  return {score, LabelForScore(score)};
}

double InitialScore(const SparseModel& model, const FeatureVector& features) {
  double score = model.bias();
  for (const auto& key : features.keys) {
    if (!IsUserFeature(key)) score += model.Weight(key);
  }
  return score;
}

double OnlineUpdate(const SparseModel& model, double running_score,
                    std::string_view new_sharer) {
  return running_score +
         model.Weight(std::string(kUserPrefix) + std::string(new_sharer));
}

void SaveModel(std::ostream& out, const SparseModel& model) {
  const Hyperparams& hp = model.hyperparams();
  out << "#format\t" << kFormatTag << '\n'
      << "#mode\t" << ModeName(model.mode()) << '\n'
      << "#bias\t" << FormatDouble(model.bias()) << '\n'
      << "#learning_rate\t" << FormatDouble(hp.learning_rate) << '\n'
      << "#epochs\t" << hp.epochs << '\n'
      << "#batch_size\t" << hp.batch_size << '\n'
      << "#l2\t" << FormatDouble(hp.l2) << '\n'
      << "#class_weighting\t" << (hp.class_weighting ? "true" : "false")
      << '\n'
      << "#rng_seed\t" << hp.rng_seed << '\n';
  std::vector<std::pair<std::string, double>> sorted(model.weights().begin(),
                                                     model.weights().end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [key, w] : sorted) {
    out << key << '\t' << FormatDouble(w) << '\n';
  }
}

SparseModel LoadModel(std::istream& in) {
  std::map<std::string, std::string> header;
  std::unordered_map<std::string, double> weights;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kCorruptInput,
                "model line " + std::to_string(line_no) + ": " + why);
  };
  auto number = [&](const std::string& text) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(text, &used);
    } catch (const std::exception&) {
      fail("not a number: " + text);
    }
    if (used != text.size()) fail("not a number: " + text);
    return value;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) fail("expected key<TAB>value");
    std::string key = line.substr(0, tab);
    std::string value = line.substr(tab + 1);
    if (key.starts_with("#")) {
      header[key.substr(1)] = value;
    } else {
      weights[key] = number(value);
    }
  }
  if (header["format"] != kFormatTag) fail("missing or unknown format header");
  if (!header.contains("mode") || !header.contains("bias")) {
    fail("missing mode or bias header");
  }
  Hyperparams hp;
  if (header.contains("learning_rate")) hp.learning_rate = number(header["learning_rate"]);
  if (header.contains("epochs")) hp.epochs = static_cast<int>(number(header["epochs"]));
  if (header.contains("batch_size")) hp.batch_size = static_cast<int>(number(header["batch_size"]));
  if (header.contains("l2")) hp.l2 = number(header["l2"]);
  if (header.contains("class_weighting")) hp.class_weighting = header["class_weighting"] == "true";
  if (header.contains("rng_seed")) hp.rng_seed = std::stoull(header["rng_seed"]);
  return SparseModel(ParseMode(header["mode"]), number(header["bias"]),
                     std::move(weights), hp);
}

}  // namespace newsrep::logistic
