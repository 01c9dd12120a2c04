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

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "test_util.hpp"
#include "vkg/error.hpp"
#include "vkg/vec/embedding.hpp"
#include "vkg/vec/sgns.hpp"

using namespace vkg;

namespace {

vec::EmbeddingModel tiny(std::vector<std::pair<std::string, std::vector<double>>> rows) {
  std::vector<vec::VocabEntry> vocab;
  std::vector<double> flat;
  const std::size_t dim = rows.front().second.size();
  for (auto& [tok, v] : rows) {
    vocab.push_back({tok, 1});
    flat.insert(flat.end(), v.begin(), v.end());
  }
  return vec::EmbeddingModel(std::move(vocab), std::move(flat), dim);
}

ErrorCode load_error(const std::string& text) {
  std::istringstream in(text);
  try {
    vec::EmbeddingModel::load_text(in);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("cosine on hand-built vectors") {
  auto m = tiny({{"a", {1, 1}}, {"b", {1, 0}}, {"c", {0, 1}}, {"z", {0, 0}}});
  CHECK(m.cosine("a", "a") == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(m.cosine("b", "c") == doctest::Approx(0.0));
  CHECK(m.cosine("a", "b") == doctest::Approx(0.70710678).epsilon(1e-4));
  CHECK(m.cosine("a", "b") == m.cosine("b", "a"));
  CHECK_THROWS_AS(m.cosine("a", "q"), Error);
  try {
    m.cosine("a", "z");
    FAIL("expected ZeroVector");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroVector);
  }
}

TEST_CASE("top_k edge cases") {
  auto m = tiny({{"a", {1, 0}}, {"b", {1, 0}}, {"c", {0, 1}}, {"d", {1, 1}}});
  CHECK(m.top_k("a", 0).empty());
  auto all = m.top_k("a", 10);
  REQUIRE(all.size() == 3);
  CHECK(all[0].token == "b");
  CHECK(all[1].token == "d");
  CHECK(all[2].token == "c");
  CHECK_THROWS_AS(m.top_k("nope", 3), Error);

  // Equal scores fall back to token order.
  auto t = tiny({{"q", {1, 0}}, {"y", {0, 1}}, {"x", {0, 1}}, {"w", {-1, 0}}});
  auto r = t.top_k("q", 3);
  CHECK(r[0].token == "x");
  CHECK(r[1].token == "y");
}

TEST_CASE("top_k equals a full scan on random models") {
  std::mt19937_64 rng(42);
  auto rm = testutil::random_model(rng, 500, 16);
  for (std::size_t q = 0; q < 500; q += 37) {
    const auto& tok = rm.tokens[q];
    auto got = rm.model.top_k(tok, 10);
    auto want = oracle::scan_top_k(rm.tokens, rm.rows, rm.rows[q], 10, {tok},
                                   [](const std::string&) { return true; });
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].token == want[i].token);
      CHECK(std::abs(got[i].score - want[i].score) <= 1e-9);
    }
    // A longer list extends a shorter one.
    auto longer = rm.model.top_k(tok, 11);
    CHECK(std::equal(got.begin(), got.end(), longer.begin()));
  }
}

TEST_CASE("word2vec text loader") {
  std::istringstream ok("2 3\na 1 2 3\nb 0.5 -1 2e-1\n");
  auto m = vec::EmbeddingModel::load_text(ok);
  CHECK(m.size() == 2);
  CHECK(m.dimension() == 3);
  CHECK(m.vector_of("b")[2] == doctest::Approx(0.2));
  CHECK(load_error("2 3\na 1 2\nb 1 2 3\n") == ErrorCode::DimensionMismatch);
  CHECK(load_error("2 3\na 1 2 3\na 1 2 3\n") == ErrorCode::DuplicateToken);
  CHECK(load_error("two 3\n") == ErrorCode::MalformedHeader);
  CHECK(load_error("3 2\na 1 2\n") == ErrorCode::MalformedHeader);
  CHECK(load_error("1 2\na 1 x\n") == ErrorCode::MalformedInput);
}

TEST_CASE("trained model survives save and load") {
  vec::Corpus corpus = {{"the", "cat", "sat", "on", "the", "mat"}, {"a", "dog", "sat", "on", "a", "rug"}};
  vec::TrainingConfig cfg;
  cfg.dimension = 8;
  cfg.epochs = 3;
  auto m = vec::train(corpus, cfg);
  std::ostringstream a;
  m.save_text(a);
  std::istringstream in(a.str());
  auto back = vec::EmbeddingModel::load_text(in);
  REQUIRE(back.size() == m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(back.token(i) == m.token(i));
    for (std::size_t d = 0; d < m.dimension(); ++d)
      CHECK(std::abs(back.row(i)[d] - m.row(i)[d]) <= 5e-7);
  }
  std::ostringstream b;
  back.save_text(b);
  CHECK(a.str() == b.str());
}

TEST_CASE("training shape, threshold and determinism") {
  vec::Corpus one(3, {"alpha", "beta", "gamma", "beta"});
  vec::TrainingConfig cfg;
  cfg.dimension = 8;
  auto m = vec::train(one, cfg);
  CHECK(m.size() == 3);
  CHECK(m.dimension() == 8);
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(m.row(i).size() == 8);
  CHECK(m.vocabulary().front().token == "beta");
  CHECK(m.vocabulary().front().count == 6);

  CHECK(vec::train(one, cfg) == m);

  vec::Corpus rare = {{"q", "w", "w", "w", "w", "w"}, {"q", "w"}, {"q"}};
  cfg.min_count = 5;
  auto r = vec::train(rare, cfg);
  CHECK_FALSE(r.contains("q"));
  CHECK(r.contains("w"));

  cfg.min_count = 50;
  try {
    vec::train(rare, cfg);
    FAIL("expected EmptyVocabulary");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyVocabulary);
  }
  cfg.min_count = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("interchangeable tokens outrank unrelated ones") {
  std::mt19937_64 rng(9);
  vec::Corpus corpus;
  const std::vector<std::string> shared = {"c0", "c1", "c2", "c3", "c4", "c5"};
  const std::vector<std::string> other = {"d0", "d1", "d2", "d3", "d4", "d5"};
  for (int i = 0; i < 300; ++i) {
    corpus.push_back({i % 2 ? "x" : "y", shared[rng() % 6], shared[rng() % 6]});
    corpus.push_back({"z", other[rng() % 6], other[rng() % 6]});
  }
  vec::TrainingConfig cfg;
  cfg.dimension = 16;
  cfg.epochs = 5;
  auto m = vec::train(corpus, cfg);
  CHECK(m.cosine("x", "y") > m.cosine("x", "z"));
}

TEST_CASE("SGNS gradient matches central differences") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (std::size_t dim : {1u, 4u, 8u}) {
    const std::size_t n = 3;
    std::vector<double> c(dim), o(dim), neg(n * dim);
    for (auto* v : {&c, &o, &neg})
      for (auto& x : *v) x = u(rng);
    std::vector<double> gc(dim), go(dim), gn(n * dim);
    vec::sgns_pair_gradient(c, o, neg, gc, go, gn);
    const double h = 1e-6;
    auto fd = [&](std::vector<double>& v, std::size_t i) {
      const double keep = v[i];
      v[i] = keep + h;
      const double up = vec::sgns_pair_loss(c, o, neg);
      v[i] = keep - h;
      const double down = vec::sgns_pair_loss(c, o, neg);
      v[i] = keep;
      return (up - down) / (2 * h);
    };
    for (std::size_t i = 0; i < dim; ++i) {
      CHECK(std::abs(fd(c, i) - gc[i]) < 1e-4);
      CHECK(std::abs(fd(o, i) - go[i]) < 1e-4);
    }
    for (std::size_t i = 0; i < n * dim; ++i) CHECK(std::abs(fd(neg, i) - gn[i]) < 1e-4);

    // A small step along the negative gradient lowers the loss.
    const double before = vec::sgns_step(c, o, neg, 0.05);
    CHECK(vec::sgns_pair_loss(c, o, neg) < before);
  }
}
