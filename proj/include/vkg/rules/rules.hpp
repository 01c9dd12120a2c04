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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vkg/kg/graph.hpp"

// Named rules over bound result sets and graph patterns.
//
// Rule file grammar (keywords are case-insensitive, '#' starts a comment):
//
//   rule    := "RULE" name "(" [param ("," param)*] ")" ["ON" ctx]
//              "WHEN" cond "THEN" action ("," action)*
//   cond    := conj ("OR" conj)*
//   conj    := unary ("AND" unary)*
//   unary   := "NOT" unary | "(" cond ")" | "TRUE"
//            | "NONEMPTY" "(" set ")" | "SUBSET" "(" set "," set ")"
//            | "SIZE" "(" set ")" cmp int | "HAS" "(" term "," rel "," term ")"
//   set     := param | ("INTERSECT" | "UNION" | "MINUS") "(" set "," set ")"
//            | "OBJECTS" "(" term "," rel ")" | "SUBJECTS" "(" rel "," term ")"
//            | "INSTANCES" "(" class ")"
//   term    := ctx | quoted-entity | "_"          (wildcard only inside HAS)
//   action  := "ALERT" | "ASSERT" aterm rel aterm
//   aterm   := ctx | quoted-entity | "?"          (? = each evidence member)
//   cmp     := "<" | "<=" | ">" | ">=" | "==" | "!="
namespace vkg::rules {

struct TermRef {
  enum class Kind { Context, Entity, Wildcard, EachEvidence };
  Kind kind = Kind::Entity;
  std::string value;

  friend bool operator==(const TermRef&, const TermRef&) = default;
};

struct SetExpr {
  enum class Op { Param, Intersect, Union, Minus, Objects, Subjects, Instances };
  Op op = Op::Param;
  // Param index for Param; relation keyword for Objects/Subjects; class for
  // Instances.
  std::size_t param = 0;
  std::string name;
  TermRef term;
  std::vector<SetExpr> args;
};

enum class Compare { Less, LessEqual, Greater, GreaterEqual, Equal, NotEqual };

struct Condition {
  enum class Op { True, And, Or, Not, NonEmpty, Subset, Size, Has };
  Op op = Op::True;
  std::vector<Condition> children;
  std::vector<SetExpr> sets;
  Compare compare = Compare::Equal;
  std::size_t bound = 0;
  TermRef subject;
  std::string relation;
  TermRef object;
};

struct Action {
  enum class Kind { Alert, Assert };
  Kind kind = Kind::Alert;
  TermRef subject;
  std::string relation;
  TermRef object;
};

struct Rule {
  std::string name;
  std::vector<std::string> params;
  std::optional<std::string> context;
  Condition condition;
  std::vector<Action> actions;

  bool raises_alert() const;
};

class RuleSet {
 public:
  // Throws DuplicateRuleName.
  void add(Rule rule);
  const Rule* find(std::string_view name) const;
  std::size_t size() const { return rules_.size(); }
  std::vector<std::string> names() const;
  // Adds every rule of `other`; duplicate names throw.
  void merge(const RuleSet& other);

 private:
  std::map<std::string, Rule, std::less<>> rules_;
};

// Throws RuleSyntaxError (with position) and DuplicateRuleName.
RuleSet parse_rules(std::string_view source);
RuleSet load_rules(const std::string& path);

// Source of the overlap rule: alert when the two input sets intersect.
extern const std::string_view kOverlapRuleSource;
RuleSet builtin_rules();

struct Alert {
  bool verdict = false;
  std::string rule;
  std::set<std::string> evidence;
  std::optional<std::string> context;

  friend bool operator==(const Alert&, const Alert&) = default;
};

struct RuleInputs {
  std::vector<std::set<std::string>> args;
  std::optional<std::string> context;
};

struct Evaluation {
  Alert alert;
  // Scratch overlay; the base graph is untouched until commit().
  std::vector<kg::Triple> derived;

  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

// Pure and deterministic. Set members are compared after sameAs
// canonicalization. Evidence is the witness of the condition: the tested set
// for NONEMPTY/SIZE, the left side for SUBSET, the union over AND, the first
// true branch of OR, the wildcard matches of HAS. A true condition with an
// empty witness falls back to the context entity; a verdict of yes always
// carries non-empty evidence.
//
// Throws UnboundParam, UnknownRelation, UnknownClass.
Evaluation evaluate(const Rule& rule, const RuleInputs& inputs, const kg::Graph& graph);

// Asserts derived triples into the base graph; returns how many were new.
std::size_t commit(kg::Graph& graph, const Evaluation& evaluation);

}  // namespace vkg::rules
