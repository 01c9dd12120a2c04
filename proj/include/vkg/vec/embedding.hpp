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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vkg::vec {

struct VocabEntry {
  std::string token;
  // Corpus frequency; 0 when the model was loaded from a file that does not
  // record counts.
  std::uint64_t count = 0;

  friend bool operator==(const VocabEntry&, const VocabEntry&) = default;
};

struct Neighbor {
  std::string token;
  double score = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Orders neighbors by descending score, ties by ascending token.
bool neighbor_before(const Neighbor& a, const Neighbor& b) noexcept;

// Immutable vocabulary plus one dense row per token. Safe to share across
// threads once constructed.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  // Rows are stored row-major in `vectors` (vocab.size() * dimension).
  // Throws DuplicateToken, DimensionMismatch, InvalidArgument (non-finite).
  EmbeddingModel(std::vector<VocabEntry> vocab, std::vector<double> vectors,
                 std::size_t dimension);

  std::size_t size() const noexcept { return vocab_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<VocabEntry>& vocabulary() const noexcept { return vocab_; }
  const std::string& token(std::size_t index) const { return vocab_.at(index).token; }

  std::optional<std::size_t> index_of(std::string_view token) const;
  bool contains(std::string_view token) const { return index_of(token).has_value(); }

  std::span<const double> row(std::size_t index) const;
  // Throws OutOfVocabulary.
  std::span<const double> vector_of(std::string_view token) const;
  double norm(std::size_t index) const { return norms_.at(index); }

  // Throws OutOfVocabulary, ZeroVector.
  double cosine(std::string_view a, std::string_view b) const;

  // Exact top-k by cosine over the whole vocabulary, query excluded.
  // Zero rows score 0. Throws OutOfVocabulary, ZeroVector.
  std::vector<Neighbor> top_k(std::string_view query, std::size_t k) const;
  // Same contract for an arbitrary query vector; indices in `exclude` are
  // skipped.
  std::vector<Neighbor> top_k(std::span<const double> query, std::size_t k,
                              std::span<const std::size_t> exclude = {}) const;

  // word2vec text format: "|V| D" header, then "token f1 ... fD" per row,
  // six decimals.
  void save_text(std::ostream& out) const;
  void save_text(const std::string& path) const;
  // Throws MalformedHeader, DimensionMismatch, DuplicateToken.
  static EmbeddingModel load_text(std::istream& in);
  static EmbeddingModel load_text(const std::string& path);

  friend bool operator==(const EmbeddingModel& a, const EmbeddingModel& b) {
    return a.dimension_ == b.dimension_ && a.vocab_ == b.vocab_ && a.vectors_ == b.vectors_;
  }

 private:
  std::vector<VocabEntry> vocab_;
  std::vector<double> vectors_;
  std::vector<double> norms_;
  std::size_t dimension_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace vkg::vec
