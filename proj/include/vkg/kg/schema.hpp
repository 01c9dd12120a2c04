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

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vkg::kg {

// Relations every graph understands without declaring them.
inline constexpr std::string_view kType = "type";
inline constexpr std::string_view kSubClassOf = "subClassOf";
inline constexpr std::string_view kSameAs = "sameAs";
inline constexpr std::string_view kHasVector = "hasVector";

bool is_reserved_relation(std::string_view name) noexcept;

struct RelationDecl {
  std::string name;
  std::optional<std::string> domain;
  std::optional<std::string> range;

  friend bool operator==(const RelationDecl&, const RelationDecl&) = default;
};

// Class vocabulary, subclass DAG, declared relations and DSL keyword aliases.
//
// Text form, one item per line, '#' starts a comment:
//
//   [classes]
//   Product
//   [subclass]
//   Browser Product
//   [relations]
//   hasVulnerability Product Vulnerability
//   [aliases]
//   vulnerability hasVulnerability
class Schema {
 public:
  void add_class(std::string_view name);
  // Throws UnknownClass for undeclared ends, SchemaCycle if the edge would
  // close a cycle.
  void add_subclass(std::string_view child, std::string_view parent);
  void add_relation(RelationDecl decl);
  // Alias keywords are matched case-insensitively.
  void add_alias(std::string_view keyword, std::string_view relation);

  bool has_class(std::string_view name) const;
  // True for declared and reserved relations.
  bool has_relation(std::string_view name) const;

  // Resolves a DSL keyword: alias first, then a declared relation name.
  std::optional<std::string> resolve_relation(std::string_view keyword) const;

  // `cls` together with every class below it in the subclass DAG.
  std::set<std::string> descendants(std::string_view cls) const;
  bool is_subclass_of(std::string_view child, std::string_view ancestor) const;

  const std::set<std::string, std::less<>>& classes() const { return classes_; }
  const std::set<std::pair<std::string, std::string>>& subclass_edges() const {
    return subclass_edges_;
  }
  const std::map<std::string, RelationDecl, std::less<>>& relations() const {
    return relations_;
  }
  const std::map<std::string, std::string, std::less<>>& aliases() const {
    return aliases_;
  }

  static Schema parse(std::istream& in);
  static Schema load(const std::string& path);
  void write(std::ostream& out) const;

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  std::set<std::string, std::less<>> classes_;
  std::set<std::pair<std::string, std::string>> subclass_edges_;
  std::map<std::string, std::vector<std::string>, std::less<>> children_;
  std::map<std::string, RelationDecl, std::less<>> relations_;
  std::map<std::string, std::string, std::less<>> aliases_;
};

}  // namespace vkg::kg
