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

#include "vkg/vec/sgns.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "vkg/error.hpp"

namespace vkg::vec {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// -log sigmoid(x), numerically stable.
double neg_log_sigmoid(double x) {
  return x > 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

// Shared by the public step and the training loop. The center gradient is
// accumulated from pre-update output rows; each output row is updated as soon
// as its coefficient is known.
template <class RowAt>
double step_rows(double* center, double* context, std::size_t n_neg, RowAt negative_row,
                 std::size_t dim, double lr, std::vector<double>& d_center) {
  d_center.assign(dim, 0.0);
  double loss = 0.0;
  auto apply = [&](double* out_row, double label) {
    const double x = dot(out_row, center, dim);
    loss += label > 0 ? neg_log_sigmoid(x) : neg_log_sigmoid(-x);
    const double coeff = sigmoid(x) - label;
    for (std::size_t i = 0; i < dim; ++i) d_center[i] += coeff * out_row[i];
    for (std::size_t i = 0; i < dim; ++i) out_row[i] -= lr * coeff * center[i];
  };
  apply(context, 1.0);
  for (std::size_t n = 0; n < n_neg; ++n) apply(negative_row(n), 0.0);
  for (std::size_t i = 0; i < dim; ++i) center[i] -= lr * d_center[i];
  return loss;
}

void check_shapes(std::size_t center, std::size_t context, std::size_t negatives) {
  if (center == 0 || center != context || negatives % center != 0)
    throw Error(ErrorCode::DimensionMismatch, "inconsistent vector lengths");
}

// 53-bit uniform in [0, 1) from the raw engine output, identical on every
// standard library.
double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

void TrainingConfig::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (dimension < 1) fail("dimension must be >= 1");
  if (window < 1) fail("window must be >= 1");
  if (min_count < 1) fail("min_count must be >= 1");
  if (negatives < 1) fail("negatives must be >= 1");
  if (epochs < 1) fail("epochs must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) fail("learning_rate must be positive");
}

double sgns_pair_loss(std::span<const double> center, std::span<const double> context,
                      std::span<const double> negatives) {
  check_shapes(center.size(), context.size(), negatives.size());
  const std::size_t dim = center.size();
  double loss = neg_log_sigmoid(dot(context.data(), center.data(), dim));
  for (std::size_t off = 0; off < negatives.size(); off += dim)
    loss += neg_log_sigmoid(-dot(negatives.data() + off, center.data(), dim));
  return loss;
}

void sgns_pair_gradient(std::span<const double> center, std::span<const double> context,
                        std::span<const double> negatives, std::span<double> d_center,
                        std::span<double> d_context, std::span<double> d_negatives) {
  check_shapes(center.size(), context.size(), negatives.size());
  const std::size_t dim = center.size();
  if (d_center.size() != dim || d_context.size() != dim || d_negatives.size() != negatives.size())
    throw Error(ErrorCode::DimensionMismatch, "gradient buffers have the wrong size");
  const double pos = sigmoid(dot(context.data(), center.data(), dim)) - 1.0;
  for (std::size_t i = 0; i < dim; ++i) {
    d_center[i] = pos * context[i];
    d_context[i] = pos * center[i];
  }
  for (std::size_t off = 0; off < negatives.size(); off += dim) {
    const double neg = sigmoid(dot(negatives.data() + off, center.data(), dim));
    for (std::size_t i = 0; i < dim; ++i) {
      d_center[i] += neg * negatives[off + i];
      d_negatives[off + i] = neg * center[i];
    }
  }
}

double sgns_step(std::span<double> center, std::span<double> context, std::span<double> negatives,
                 double lr) {
  check_shapes(center.size(), context.size(), negatives.size());
  const std::size_t dim = center.size();
  std::vector<double> scratch;
  return step_rows(center.data(), context.data(), negatives.size() / dim,
                   [&](std::size_t n) { return negatives.data() + n * dim; }, dim, lr, scratch);
}

std::vector<VocabEntry> build_vocabulary(const Corpus& corpus, std::uint64_t min_count) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& doc : corpus)
    for (const auto& tok : doc) ++counts[tok];
  std::vector<VocabEntry> vocab;
  for (auto& [tok, n] : counts)
    if (n >= min_count) vocab.push_back({tok, n});
  std::stable_sort(vocab.begin(), vocab.end(),
                   [](const VocabEntry& a, const VocabEntry& b) { return a.count > b.count; });
  return vocab;
}

EmbeddingModel train(const Corpus& corpus, const TrainingConfig& config) {
  config.validate();
  std::vector<VocabEntry> vocab = build_vocabulary(corpus, config.min_count);
  if (vocab.empty())
    throw Error(ErrorCode::EmptyVocabulary,
                "no token occurs at least " + std::to_string(config.min_count) + " times");

  std::map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < vocab.size(); ++i) index.emplace(vocab[i].token, i);

  std::vector<std::vector<std::size_t>> docs;
  docs.reserve(corpus.size());
  std::size_t total_tokens = 0;
  for (const auto& doc : corpus) {
    std::vector<std::size_t> ids;
    for (const auto& tok : doc)
      if (auto it = index.find(tok); it != index.end()) ids.push_back(it->second);
    total_tokens += ids.size();
    if (ids.size() > 1) docs.push_back(std::move(ids));
  }

  const std::size_t dim = config.dimension;
  const std::size_t vsize = vocab.size();
  std::mt19937_64 rng(config.seed);
  std::vector<double> input(vsize * dim);
  std::vector<double> output(vsize * dim, 0.0);
  for (double& x : input) x = (uniform(rng) - 0.5) / static_cast<double>(dim);

  // Unigram^0.75 noise distribution.
  std::vector<double> cumulative(vsize);
  double acc = 0.0;
  for (std::size_t i = 0; i < vsize; ++i) {
    acc += std::pow(static_cast<double>(vocab[i].count), 0.75);
    cumulative[i] = acc;
  }
  auto sample_noise = [&]() {
    const double u = uniform(rng) * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), vsize - 1);
  };

  const double budget = static_cast<double>(config.epochs * total_tokens) + 1.0;
  const double min_lr = config.learning_rate * 1e-4;
  std::size_t processed = 0;
  std::vector<double*> neg_rows;
  std::vector<double> scratch;
  neg_rows.reserve(config.negatives);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (const auto& doc : docs) {
      for (std::size_t pos = 0; pos < doc.size(); ++pos, ++processed) {
        const double lr = std::max(min_lr, config.learning_rate * (1.0 - processed / budget));
        const std::size_t lo = pos >= config.window ? pos - config.window : 0;
        const std::size_t hi = std::min(doc.size() - 1, pos + config.window);
        double* center = input.data() + doc[pos] * dim;
        for (std::size_t c = lo; c <= hi; ++c) {
          if (c == pos) continue;
          neg_rows.clear();
          for (std::size_t n = 0; n < config.negatives; ++n) {
            std::size_t noise = sample_noise();
            if (noise == doc[c]) continue;
            neg_rows.push_back(output.data() + noise * dim);
          }
          step_rows(center, output.data() + doc[c] * dim, neg_rows.size(),
                    [&](std::size_t n) { return neg_rows[n]; }, dim, lr, scratch);
        }
      }
    }
  }
  return EmbeddingModel(std::move(vocab), std::move(input), dim);
}

}  // namespace vkg::vec
