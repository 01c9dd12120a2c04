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

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vkg/kg/schema.hpp"

namespace vkg::kg {

// Object position of a triple: a graph node (entity or class) or a typed
// literal leaf. Literals never participate in linking or sameAs.
struct Term {
  enum class Kind : unsigned char { Node, Literal };

  Kind kind = Kind::Node;
  std::string text;

  static Term node(std::string id) { return {Kind::Node, std::move(id)}; }
  static Term literal(std::string value) { return {Kind::Literal, std::move(value)}; }

  bool is_node() const noexcept { return kind == Kind::Node; }
  bool is_literal() const noexcept { return kind == Kind::Literal; }

  friend auto operator<=>(const Term&, const Term&) = default;
  friend bool operator==(const Term&, const Term&) = default;
};

struct Triple {
  std::string subject;
  std::string predicate;
  Term object;

  friend auto operator<=>(const Triple&, const Triple&) = default;
  friend bool operator==(const Triple&, const Triple&) = default;
};

std::string to_string(const Triple& t);

struct TriplePattern {
  std::optional<std::string> subject;
  std::optional<std::string> predicate;
  std::optional<Term> object;
};

// Key counts of each index; equal graphs have equal stats.
struct IndexStats {
  std::size_t triples = 0;
  std::size_t subject_keys = 0;
  std::size_t predicate_keys = 0;
  std::size_t object_keys = 0;
  std::size_t subject_predicate_keys = 0;
  std::size_t same_as_classes = 0;

  friend bool operator==(const IndexStats&, const IndexStats&) = default;
};

// Indexed triple set grounded in a Schema.
//
// Readers may share a const Graph across threads; mutation requires exclusive
// access. Every query result is in lexicographic (s, p, o) order.
class Graph {
 public:
  Graph() = default;
  explicit Graph(Schema schema);
  Graph(const Graph& other);
  Graph& operator=(const Graph& other);
  Graph(Graph&&) noexcept = default;
  Graph& operator=(Graph&&) noexcept = default;
  ~Graph() = default;

  const Schema& schema() const { return schema_; }

  // Returns false if the triple was already present. Throws UnknownRelation,
  // UnknownClass (type / subClassOf ends) and InvalidTerm.
  bool assert_triple(Triple t);
  // Exact-triple removal; returns false if absent.
  bool retract(const Triple& t);

  bool contains(const Triple& t) const;
  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }
  const std::set<Triple>& triples() const { return triples_; }

  // sameAs-aware matching: bound subject/object positions are expanded to
  // their equivalence classes and results are rewritten to each class's
  // canonical (lexicographically smallest) member. sameAs triples themselves
  // are returned verbatim.
  std::vector<Triple> match(const TriplePattern& pattern) const;
  // Raw index lookup, no sameAs expansion.
  std::vector<Triple> match_exact(const TriplePattern& pattern) const;

  // Entities typed with `cls` or one of its subclasses, expanded by sameAs.
  std::set<std::string> instances_of(std::string_view cls) const;
  bool is_instance_of(std::string_view entity, std::string_view cls) const;

  // Asserts a sameAs b (no-op when a == b).
  void merge_same_as(std::string_view a, std::string_view b);
  std::string canonical(std::string_view entity) const;
  // The sameAs equivalence class of `entity`, including itself.
  std::set<std::string> equivalents(std::string_view entity) const;

  // Jaccard overlap of the (predicate, direction, neighbor) sets of a and b
  // after sameAs canonicalization. hasVector and sameAs edges are ignored.
  double similarity(std::string_view a, std::string_view b) const;

  // Non-literal, non-class nodes.
  std::set<std::string> entities() const;
  bool has_entity(std::string_view id) const;

  IndexStats stats() const;
  // Rebuilds every index from the triple set and compares; test hook.
  bool indexes_consistent() const;

  // Line format: `subject predicate object .`; literals are double-quoted
  // with \" and \\ escapes. Output is sorted, so save is deterministic.
  void save(std::ostream& out) const;
  static Graph load(std::istream& in, Schema schema);

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  struct TriplePtrLess {
    bool operator()(const Triple* a, const Triple* b) const { return *a < *b; }
  };
  using Bucket = std::set<const Triple*, TriplePtrLess>;

  void index(const Triple* t);
  void unindex(const Triple* t);
  void rebuild_indexes();
  void rebuild_same_as();
  void union_same_as(const std::string& a, const std::string& b);
  void validate(const Triple& t) const;
  std::set<std::tuple<std::string, bool, Term>> neighborhood(std::string_view e) const;

  Schema schema_;
  std::set<Triple> triples_;
  std::map<std::string, Bucket, std::less<>> by_subject_;
  std::map<std::string, Bucket, std::less<>> by_predicate_;
  std::map<Term, Bucket> by_object_;
  std::map<std::pair<std::string, std::string>, Bucket> by_subject_predicate_;
  // Only entities in non-singleton sameAs classes appear here.
  std::map<std::string, std::string, std::less<>> canonical_;
  std::map<std::string, std::set<std::string>, std::less<>> members_;
};

}  // namespace vkg::kg
