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

#include "vkg/vec/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include "vkg/error.hpp"
#include "vkg/text.hpp"

namespace vkg::vec {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

bool neighbor_before(const Neighbor& a, const Neighbor& b) noexcept {
  if (a.score != b.score) return a.score > b.score;
  return a.token < b.token;
}

EmbeddingModel::EmbeddingModel(std::vector<VocabEntry> vocab, std::vector<double> vectors,
                               std::size_t dimension)
    : vocab_(std::move(vocab)), vectors_(std::move(vectors)), dimension_(dimension) {
  if (dimension_ == 0) throw Error(ErrorCode::DimensionMismatch, "dimension must be positive");
  if (vectors_.size() != vocab_.size() * dimension_)
    throw Error(ErrorCode::DimensionMismatch,
                "expected " + std::to_string(vocab_.size() * dimension_) + " components, got " +
                    std::to_string(vectors_.size()));
  index_.reserve(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (vocab_[i].token.empty() || text::has_whitespace(vocab_[i].token))
      throw Error(ErrorCode::InvalidArgument, "invalid token '" + vocab_[i].token + "'");
    if (!index_.emplace(vocab_[i].token, i).second)
      throw Error(ErrorCode::DuplicateToken, "token '" + vocab_[i].token + "' appears twice");
  }
  norms_.resize(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    auto r = row(i);
    for (double x : r)
      if (!std::isfinite(x))
        throw Error(ErrorCode::InvalidArgument, "non-finite component for '" + vocab_[i].token + "'");
    norms_[i] = std::sqrt(dot(r, r));
  }
}

std::optional<std::size_t> EmbeddingModel::index_of(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const double> EmbeddingModel::row(std::size_t index) const {
  return std::span<const double>(vectors_).subspan(index * dimension_, dimension_);
}

std::span<const double> EmbeddingModel::vector_of(std::string_view token) const {
  auto idx = index_of(token);
  if (!idx) throw Error(ErrorCode::OutOfVocabulary, "'" + std::string(token) + "' is not in the vocabulary");
  return row(*idx);
}

double EmbeddingModel::cosine(std::string_view a, std::string_view b) const {
  auto ia = index_of(a);
  auto ib = index_of(b);
  for (auto [idx, tok] : {std::pair{ia, a}, std::pair{ib, b}}) {
    if (!idx)
      throw Error(ErrorCode::OutOfVocabulary, "'" + std::string(tok) + "' is not in the vocabulary");
    if (norms_[*idx] == 0.0)
      throw Error(ErrorCode::ZeroVector, "'" + std::string(tok) + "' has a zero vector");
  }
  if (*ia == *ib) return 1.0;
  double c = dot(row(*ia), row(*ib)) / (norms_[*ia] * norms_[*ib]);
  return std::clamp(c, -1.0, 1.0);
}

std::vector<Neighbor> EmbeddingModel::top_k(std::string_view query, std::size_t k) const {
  auto idx = index_of(query);
  if (!idx) throw Error(ErrorCode::OutOfVocabulary, "'" + std::string(query) + "' is not in the vocabulary");
  std::size_t exclude[] = {*idx};
  return top_k(row(*idx), k, exclude);
}

std::vector<Neighbor> EmbeddingModel::top_k(std::span<const double> query, std::size_t k,
                                            std::span<const std::size_t> exclude) const {
  if (query.size() != dimension_)
    throw Error(ErrorCode::DimensionMismatch, "query has " + std::to_string(query.size()) +
                                                  " components, model has " +
                                                  std::to_string(dimension_));
  const double qn = std::sqrt(dot(query, query));
  if (qn == 0.0) throw Error(ErrorCode::ZeroVector, "query vector is zero");
  if (k == 0) return {};

  std::vector<bool> skip(vocab_.size(), false);
  for (std::size_t e : exclude)
    if (e < skip.size()) skip[e] = true;

  struct Scored {
    double score;
    std::size_t index;
  };
  std::vector<Scored> scored;
  scored.reserve(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (skip[i]) continue;
    double s = norms_[i] == 0.0 ? 0.0 : dot(query, row(i)) / (qn * norms_[i]);
    scored.push_back({std::clamp(s, -1.0, 1.0), i});
  }
  auto before = [this](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return vocab_[a.index].token < vocab_[b.index].token;
  };
  const std::size_t n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(),
                    before);
  std::vector<Neighbor> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back({vocab_[scored[i].index].token, scored[i].score});
  return out;
}

void EmbeddingModel::save_text(std::ostream& out) const {
  out << vocab_.size() << ' ' << dimension_ << '\n';
  std::string line;
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    line = vocab_[i].token;
    for (double x : row(i)) {
      line.push_back(' ');
      line += text::format_fixed(x, 6);
    }
    line.push_back('\n');
    out << line;
  }
}

void EmbeddingModel::save_text(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write model file " + path);
  save_text(out);
}

EmbeddingModel EmbeddingModel::load_text(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::MalformedHeader, "missing header line");
  auto header = text::split_whitespace(line);
  double v_raw = 0;
  double d_raw = 0;
  if (header.size() != 2 || !text::parse_double(header[0], v_raw) ||
      !text::parse_double(header[1], d_raw) || v_raw < 0 || d_raw < 1 ||
      v_raw != std::floor(v_raw) || d_raw != std::floor(d_raw))
    throw Error(ErrorCode::MalformedHeader, "expected '<vocabulary size> <dimension>', got '" + line + "'");
  const auto vocab_size = static_cast<std::size_t>(v_raw);
  const auto dim = static_cast<std::size_t>(d_raw);

  std::vector<VocabEntry> vocab;
  std::vector<double> vectors;
  vocab.reserve(vocab_size);
  vectors.reserve(vocab_size * dim);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = text::split_whitespace(line);
    if (fields.empty()) continue;
    if (vocab.size() == vocab_size)
      throw Error(ErrorCode::MalformedHeader, "more rows than the declared " + std::to_string(vocab_size));
    if (fields.size() != dim + 1)
      throw Error(ErrorCode::DimensionMismatch, "line " + std::to_string(lineno) + " has " +
                                                    std::to_string(fields.size() - 1) +
                                                    " components, expected " + std::to_string(dim));
    vocab.push_back({std::string(fields[0]), 0});
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double x = 0;
      if (!text::parse_double(fields[i], x) || !std::isfinite(x))
        throw Error(ErrorCode::MalformedInput, "line " + std::to_string(lineno) + ": bad number '" +
                                                   std::string(fields[i]) + "'");
      vectors.push_back(x);
    }
  }
  if (vocab.size() != vocab_size)
    throw Error(ErrorCode::MalformedHeader, "header declares " + std::to_string(vocab_size) +
                                                " rows, found " + std::to_string(vocab.size()));
  return EmbeddingModel(std::move(vocab), std::move(vectors), dim);
}

EmbeddingModel EmbeddingModel::load_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open model file " + path);
  return load_text(in);
}

}  // namespace vkg::vec
