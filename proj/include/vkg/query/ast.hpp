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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vkg::kg {
class Schema;
}
namespace vkg::rules {
class RuleSet;
}

// Three-command query language.
//
//   query    := stmt (";" stmt)* [";"]
//   stmt     := search | list | infer
//   search   := "SEARCH" quoted ["CLASS" ident] ["TOPK" int] "AS" var
//   list     := "LIST" ident "OF" (quoted | var) "AS" var
//   infer    := "INFER" ident "FROM" var ("," var)* ["ON" quoted] "AS" var
//
// Keywords are case-insensitive; quoted tokens are normalized entity ids.
// `LIST rel OF V` fans out over every member of an earlier binding V.
namespace vkg::query {

inline constexpr std::size_t kDefaultTopK = 10;

struct SearchStmt {
  std::string term;
  std::optional<std::string> class_filter;
  std::size_t k = kDefaultTopK;
  std::string out_var;

  friend bool operator==(const SearchStmt&, const SearchStmt&) = default;
};

struct ListSource {
  enum class Kind { Entity, Variable };
  Kind kind = Kind::Entity;
  std::string name;

  friend bool operator==(const ListSource&, const ListSource&) = default;
};

struct ListStmt {
  // Relation keyword as written; resolved through Schema aliases.
  std::string relation;
  ListSource source;
  std::string out_var;

  friend bool operator==(const ListStmt&, const ListStmt&) = default;
};

struct InferStmt {
  std::string rule;
  std::vector<std::string> inputs;
  std::optional<std::string> context;
  std::string out_var;

  friend bool operator==(const InferStmt&, const InferStmt&) = default;
};

using Statement = std::variant<SearchStmt, ListStmt, InferStmt>;

const std::string& out_var(const Statement& s);
// Variables the statement reads, in source order.
std::vector<std::string> input_vars(const Statement& s);

struct QueryAst {
  std::vector<Statement> statements;

  friend bool operator==(const QueryAst&, const QueryAst&) = default;
};

struct ParseOptions {
  // When set, LIST relation keywords must resolve.
  const kg::Schema* schema = nullptr;
  // When set, INFER rule names must exist and arity must match.
  const rules::RuleSet* rules = nullptr;
};

// Throws SyntaxError with codes SyntaxError, UndefinedVariable,
// DuplicateVariable, UnknownRule, UnknownRelation, ArityMismatch.
QueryAst parse(std::string_view text, const ParseOptions& options = {});

// Canonical text; parse(unparse(ast)) == ast.
std::string unparse(const QueryAst& ast);
std::string unparse(const Statement& stmt);

}  // namespace vkg::query
