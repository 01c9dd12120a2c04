// Copyright 2026 The VKG Authors.
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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vkg/vec/embedding.hpp"

namespace vkg::vec {

// Skip-gram with negative sampling.
struct TrainingConfig {
  std::size_t dimension = 100;
  // Context tokens on each side of the center token.
  std::size_t window = 7;
  // Tokens rarer than this are dropped from the vocabulary.
  std::uint64_t min_count = 1;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  // Initial rate, decayed linearly to 1e-4 of itself over training.
  double learning_rate = 0.025;
  std::uint64_t seed = 1;

  // Throws InvalidConfig.
  void validate() const;
};

// One document per entry. Context windows never cross document boundaries.
using Corpus = std::vector<std::vector<std::string>>;

// Deterministic for a fixed config (single-threaded).
// Throws EmptyVocabulary when no token reaches min_count.
EmbeddingModel train(const Corpus& corpus, const TrainingConfig& config);

// Vocabulary in training order: descending count, then token.
std::vector<VocabEntry> build_vocabulary(const Corpus& corpus, std::uint64_t min_count);

// -log sigmoid(context . center) - sum_n log sigmoid(-negative_n . center).
// `negatives` is row-major (n * D).
double sgns_pair_loss(std::span<const double> center, std::span<const double> context,
                      std::span<const double> negatives);

// Analytic gradient of sgns_pair_loss with respect to every argument.
void sgns_pair_gradient(std::span<const double> center, std::span<const double> context,
                        std::span<const double> negatives, std::span<double> d_center,
                        std::span<double> d_context, std::span<double> d_negatives);

// One SGD step of size `lr` on the pair, in place. Returns the loss before
// the step.
double sgns_step(std::span<double> center, std::span<double> context,
                 std::span<double> negatives, double lr);

}  // namespace vkg::vec
