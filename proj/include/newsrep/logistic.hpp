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

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "newsrep/ingestion.hpp"

namespace newsrep::logistic {

// Feature families: users only, users and title/description tokens, tokens
// only.
enum class Mode { kU, kUT, kT };

std::string_view ModeName(Mode mode);
Mode ParseMode(std::string_view name);

// Binary features keyed "user:<handle>" or "token:<word>", sorted and unique.
struct FeatureVector {
  std::vector<std::string> keys;
};

// Lowercase, split on anything that is not an ASCII letter/digit (bytes >= 0x80
// stay inside words).
std::vector<std::string> Tokenize(std::string_view text);

// Scrubs the bundle's site and `aliases` from the title and description, then
// drops any remaining token that contains one of those names.
FeatureVector Featurize(const ingestion::UrlBundle& bundle, Mode mode,
                        std::span<const std::string> aliases = {});

enum class ClassLabel { kFake, kNonFake };

struct LabeledExample {
  FeatureVector features;
  ClassLabel label = ClassLabel::kNonFake;
};

struct Hyperparams {
  double learning_rate = 0.5;
  int epochs = 30;
  int batch_size = 32;
  double l2 = 1e-4;
  bool class_weighting = true;
  std::uint64_t rng_seed = 1;
};

// Per-class weight N / (2 * N_class).
struct ClassWeights {
  double fake = 1.0;
  double nonfake = 1.0;
};
ClassWeights ComputeClassWeights(std::size_t n_fake, std::size_t n_nonfake);

// Weights live on a 2^-24 grid and are clamped to +/-1024, so any sum of a
// model's weights over up to 2^19 features is exact in double precision and
// independent of summation order. Online and batch scores therefore agree
// bit for bit.
double QuantizeWeight(double w);

class SparseModel {
 public:
  SparseModel() = default;
  SparseModel(Mode mode, double bias,
              std::unordered_map<std::string, double> weights,
              Hyperparams hyperparams);

  Mode mode() const { return mode_; }
  double bias() const { return bias_; }
  const Hyperparams& hyperparams() const { return hyperparams_; }
  const std::unordered_map<std::string, double>& weights() const {
    return weights_;
  }
  // Zero for unknown features.
  double Weight(std::string_view key) const;

 private:
  Mode mode_ = Mode::kU;
  double bias_ = 0.0;
  std::unordered_map<std::string, double> weights_;
  Hyperparams hyperparams_;
};

// Mini-batch gradient descent on the class-weighted logistic loss with L2.
// Positive scores mean fake. Throws kDegenerateTraining when one class is
// missing.
SparseModel Train(std::span<const LabeledExample> examples, Mode mode,
                  const Hyperparams& hyperparams);

struct Prediction {
  double score = 0.0;
  ClassLabel label = ClassLabel::kNonFake;  // kFake iff score > 0
};

Prediction Predict(const SparseModel& model, const FeatureVector& features);

// Starting point for online scoring: bias plus every non-user feature.
double InitialScore(const SparseModel& model, const FeatureVector& features);

// running_score + weight(user:new_sharer).
double OnlineUpdate(const SparseModel& model, double running_score,
                    std::string_view new_sharer);

inline ClassLabel LabelForScore(double score) {
  return score > 0.0 ? ClassLabel::kFake : ClassLabel::kNonFake;
}

// Header lines `#key<TAB>value` (format, mode, bias, hyperparameters), then
// one `feature<TAB>weight` line per feature in key order.
void SaveModel(std::ostream& out, const SparseModel& model);
SparseModel LoadModel(std::istream& in);

}  // namespace newsrep::logistic
