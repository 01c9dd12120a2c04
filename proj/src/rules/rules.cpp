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

#include "vkg/rules/rules.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include "../lexer.hpp"
#include "vkg/error.hpp"

namespace vkg::rules {

using detail::Token;
using detail::TokenCursor;

const std::string_view kOverlapRuleSource =
    "RULE alert(V, K) ON ctx WHEN NONEMPTY(INTERSECT(V, K)) THEN ALERT\n";

namespace {

constexpr std::string_view kKeywords[] = {
    "RULE",  "ON",         "WHEN",  "THEN",      "ALERT",  "ASSERT",  "AND",
    "OR",    "NOT",        "TRUE",  "NONEMPTY",  "SUBSET", "SIZE",    "HAS",
    "INTERSECT", "UNION",  "MINUS", "OBJECTS",   "SUBJECTS", "INSTANCES"};

bool is_keyword(std::string_view s) {
  return std::any_of(std::begin(kKeywords), std::end(kKeywords),
                     [&](std::string_view k) { return text::iequals(k, s); });
}

class RuleParser {
 public:
  explicit RuleParser(std::string_view src)
      : cur_(detail::lex(src, ErrorCode::RuleSyntaxError), ErrorCode::RuleSyntaxError) {}

  RuleSet parse() {
    RuleSet set;
    while (!cur_.at_end()) {
      const Token& head = cur_.peek();
      Rule r = parse_rule();
      try {
        set.add(std::move(r));
      } catch (const Error& e) {
        throw SyntaxError(ErrorCode::DuplicateRuleName, e.what(), head.line, head.column);
      }
    }
    return set;
  }

 private:
  std::string name(std::string_view what) {
    const Token& t = cur_.expect(Token::Kind::Ident, what);
    if (is_keyword(t.text)) cur_.fail_at(t, std::string(what) + " may not be a keyword");
    return t.text;
  }

  Rule parse_rule() {
    cur_.expect_keyword("RULE");
    rule_ = Rule{};
    rule_.name = cur_.expect(Token::Kind::Ident, "rule name").text;
    cur_.expect_symbol("(");
    if (!cur_.is_symbol(")")) {
      do {
        const Token& t = cur_.peek();
        std::string p = name("parameter");
        if (std::find(rule_.params.begin(), rule_.params.end(), p) != rule_.params.end())
          cur_.fail_at(t, "duplicate parameter " + p);
        rule_.params.push_back(std::move(p));
      } while (cur_.accept_symbol(","));
    }
    cur_.expect_symbol(")");
    if (cur_.accept_keyword("ON")) {
      const Token& t = cur_.peek();
      std::string ctx = name("context name");
      if (std::find(rule_.params.begin(), rule_.params.end(), ctx) != rule_.params.end())
        cur_.fail_at(t, "context name clashes with a parameter");
      rule_.context = std::move(ctx);
    }
    cur_.expect_keyword("WHEN");
    rule_.condition = parse_or();
    cur_.expect_keyword("THEN");
    do {
      rule_.actions.push_back(parse_action());
    } while (cur_.accept_symbol(","));
    cur_.accept_symbol(";");
    return std::move(rule_);
  }

  Condition parse_or() {
    Condition lhs = parse_and();
    if (!cur_.is_keyword("OR")) return lhs;
    Condition node;
    node.op = Condition::Op::Or;
    node.children.push_back(std::move(lhs));
    while (cur_.accept_keyword("OR")) node.children.push_back(parse_and());
    return node;
  }

  Condition parse_and() {
    Condition lhs = parse_unary();
    if (!cur_.is_keyword("AND")) return lhs;
    Condition node;
    node.op = Condition::Op::And;
    node.children.push_back(std::move(lhs));
    while (cur_.accept_keyword("AND")) node.children.push_back(parse_unary());
    return node;
  }

  Condition parse_unary() {
    Condition c;
    if (cur_.accept_keyword("NOT")) {
      c.op = Condition::Op::Not;
      c.children.push_back(parse_unary());
      return c;
    }
    if (cur_.accept_symbol("(")) {
      c = parse_or();
      cur_.expect_symbol(")");
      return c;
    }
    if (cur_.accept_keyword("TRUE")) return c;
    if (cur_.accept_keyword("NONEMPTY")) {
      c.op = Condition::Op::NonEmpty;
      cur_.expect_symbol("(");
      c.sets.push_back(parse_set());
      cur_.expect_symbol(")");
      return c;
    }
    if (cur_.accept_keyword("SUBSET")) {
      c.op = Condition::Op::Subset;
      cur_.expect_symbol("(");
      c.sets.push_back(parse_set());
      cur_.expect_symbol(",");
      c.sets.push_back(parse_set());
      cur_.expect_symbol(")");
      return c;
    }
    if (cur_.accept_keyword("SIZE")) {
      c.op = Condition::Op::Size;
      cur_.expect_symbol("(");
      c.sets.push_back(parse_set());
      cur_.expect_symbol(")");
      c.compare = parse_compare();
      c.bound = std::stoul(cur_.expect(Token::Kind::Int, "integer").text);
      return c;
    }
    if (cur_.accept_keyword("HAS")) {
      c.op = Condition::Op::Has;
      cur_.expect_symbol("(");
      c.subject = parse_term(true, false);
      cur_.expect_symbol(",");
      c.relation = cur_.expect(Token::Kind::Ident, "relation").text;
      cur_.expect_symbol(",");
      c.object = parse_term(true, false);
      cur_.expect_symbol(")");
      return c;
    }
    cur_.fail("expected a condition");
  }

  Compare parse_compare() {
    const Token& t = cur_.expect(Token::Kind::Symbol, "comparison operator");
    if (t.text == "<") return Compare::Less;
    if (t.text == "<=") return Compare::LessEqual;
    if (t.text == ">") return Compare::Greater;
    if (t.text == ">=") return Compare::GreaterEqual;
    if (t.text == "==") return Compare::Equal;
    if (t.text == "!=") return Compare::NotEqual;
    cur_.fail_at(t, "expected comparison operator");
  }

  SetExpr parse_set() {
    SetExpr s;
    auto binary = [&](SetExpr::Op op) {
      s.op = op;
      cur_.expect_symbol("(");
      s.args.push_back(parse_set());
      cur_.expect_symbol(",");
      s.args.push_back(parse_set());
      cur_.expect_symbol(")");
      return s;
    };
    if (cur_.accept_keyword("INTERSECT")) return binary(SetExpr::Op::Intersect);
    if (cur_.accept_keyword("UNION")) return binary(SetExpr::Op::Union);
    if (cur_.accept_keyword("MINUS")) return binary(SetExpr::Op::Minus);
    if (cur_.accept_keyword("OBJECTS")) {
      s.op = SetExpr::Op::Objects;
      cur_.expect_symbol("(");
      s.term = parse_term(false, false);
      cur_.expect_symbol(",");
      s.name = cur_.expect(Token::Kind::Ident, "relation").text;
      cur_.expect_symbol(")");
      return s;
    }
    if (cur_.accept_keyword("SUBJECTS")) {
      s.op = SetExpr::Op::Subjects;
      cur_.expect_symbol("(");
      s.name = cur_.expect(Token::Kind::Ident, "relation").text;
      cur_.expect_symbol(",");
      s.term = parse_term(false, false);
      cur_.expect_symbol(")");
      return s;
    }
    if (cur_.accept_keyword("INSTANCES")) {
      s.op = SetExpr::Op::Instances;
      cur_.expect_symbol("(");
      s.name = cur_.expect(Token::Kind::Ident, "class").text;
      cur_.expect_symbol(")");
      return s;
    }
    const Token& t = cur_.expect(Token::Kind::Ident, "set expression");
    auto it = std::find(rule_.params.begin(), rule_.params.end(), t.text);
    if (it == rule_.params.end()) cur_.fail_at(t, "undeclared parameter " + t.text);
    s.op = SetExpr::Op::Param;
    s.param = static_cast<std::size_t>(it - rule_.params.begin());
    s.name = t.text;
    return s;
  }

  TermRef parse_term(bool allow_wildcard, bool allow_each) {
    const Token& t = cur_.peek();
    if (t.kind == Token::Kind::Quoted) {
      cur_.next();
      return {TermRef::Kind::Entity, t.text};
    }
    if (allow_wildcard && t.kind == Token::Kind::Ident && t.text == "_") {
      cur_.next();
      return {TermRef::Kind::Wildcard, {}};
    }
    if (allow_each && cur_.is_symbol("?")) {
      cur_.next();
      return {TermRef::Kind::EachEvidence, {}};
    }
    if (t.kind == Token::Kind::Ident && rule_.context && t.text == *rule_.context) {
      cur_.next();
      return {TermRef::Kind::Context, t.text};
    }
    cur_.fail_at(t, t.kind == Token::Kind::Ident ? "undeclared context " + t.text
                                                 : std::string("expected a term"));
  }

  Action parse_action() {
    Action a;
    if (cur_.accept_keyword("ALERT")) return a;
    cur_.expect_keyword("ASSERT");
    a.kind = Action::Kind::Assert;
    a.subject = parse_term(false, true);
    a.relation = cur_.expect(Token::Kind::Ident, "relation").text;
    a.object = parse_term(false, true);
    return a;
  }

  TokenCursor cur_;
  Rule rule_;
};

using EntitySet = std::set<std::string>;

class Evaluator {
 public:
  Evaluator(const Rule& rule, const RuleInputs& inputs, const kg::Graph& graph)
      : rule_(rule), graph_(graph) {
    if (inputs.args.size() < rule.params.size())
      throw Error(ErrorCode::UnboundParam,
                  "rule " + rule.name + " expects " + std::to_string(rule.params.size()) +
                      " inputs, got " + std::to_string(inputs.args.size()));
    if (rule.context && !inputs.context)
      throw Error(ErrorCode::UnboundParam, "rule " + rule.name + " needs a context entity");
    for (std::size_t i = 0; i < rule.params.size(); ++i) {
      EntitySet canon;
      for (const auto& e : inputs.args[i]) canon.insert(graph.canonical(e));
      args_.push_back(std::move(canon));
    }
    if (inputs.context) context_ = graph.canonical(*inputs.context);
  }

  // Returns the truth value; fills `witness`.
  bool holds(const Condition& c, EntitySet& witness) const {
    switch (c.op) {
      case Condition::Op::True:
        return true;
      case Condition::Op::And: {
        EntitySet acc;
        for (const auto& child : c.children) {
          EntitySet w;
          if (!holds(child, w)) return false;
          acc.merge(w);
        }
        witness = std::move(acc);
        return true;
      }
      case Condition::Op::Or:
        for (const auto& child : c.children) {
          EntitySet w;
          if (holds(child, w)) {
            witness = std::move(w);
            return true;
          }
        }
        return false;
      case Condition::Op::Not: {
        EntitySet ignored;
        return !holds(c.children.front(), ignored);
      }
      case Condition::Op::NonEmpty: {
        EntitySet s = value(c.sets[0]);
        if (s.empty()) return false;
        witness = std::move(s);
        return true;
      }
      case Condition::Op::Subset: {
        EntitySet a = value(c.sets[0]);
        EntitySet b = value(c.sets[1]);
        if (!std::includes(b.begin(), b.end(), a.begin(), a.end())) return false;
        witness = std::move(a);
        return true;
      }
      case Condition::Op::Size: {
        EntitySet s = value(c.sets[0]);
        const std::size_t n = s.size();
        bool ok = false;
        switch (c.compare) {
          case Compare::Less: ok = n < c.bound; break;
          case Compare::LessEqual: ok = n <= c.bound; break;
          case Compare::Greater: ok = n > c.bound; break;
          case Compare::GreaterEqual: ok = n >= c.bound; break;
          case Compare::Equal: ok = n == c.bound; break;
          case Compare::NotEqual: ok = n != c.bound; break;
        }
        if (ok) witness = std::move(s);
        return ok;
      }
      case Condition::Op::Has: {
        kg::TriplePattern p;
        if (c.subject.kind != TermRef::Kind::Wildcard) p.subject = entity(c.subject);
        p.predicate = relation(c.relation);
        if (c.object.kind != TermRef::Kind::Wildcard) p.object = kg::Term::node(entity(c.object));
        auto matches = graph_.match(p);
        if (matches.empty()) return false;
        for (const auto& t : matches) {
          if (!p.subject) witness.insert(t.subject);
          if (!p.object && t.object.is_node()) witness.insert(t.object.text);
        }
        if (p.subject && p.object) witness = {*p.subject, p.object->text};
        return true;
      }
    }
    return false;
  }

  EntitySet value(const SetExpr& s) const {
    switch (s.op) {
      case SetExpr::Op::Param:
        return args_.at(s.param);
      case SetExpr::Op::Intersect:
      case SetExpr::Op::Union:
      case SetExpr::Op::Minus: {
        EntitySet a = value(s.args[0]);
        EntitySet b = value(s.args[1]);
        EntitySet out;
        auto sink = std::inserter(out, out.end());
        if (s.op == SetExpr::Op::Intersect)
          std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), sink);
        else if (s.op == SetExpr::Op::Union)
          std::set_union(a.begin(), a.end(), b.begin(), b.end(), sink);
        else
          std::set_difference(a.begin(), a.end(), b.begin(), b.end(), sink);
        return out;
      }
      case SetExpr::Op::Objects: {
        EntitySet out;
        for (const auto& t : graph_.match({entity(s.term), relation(s.name), std::nullopt}))
          out.insert(t.object.text);
        return out;
      }
      case SetExpr::Op::Subjects: {
        EntitySet out;
        for (const auto& t :
             graph_.match({std::nullopt, relation(s.name), kg::Term::node(entity(s.term))}))
          out.insert(t.subject);
        return out;
      }
      case SetExpr::Op::Instances: {
        EntitySet out;
        for (const auto& e : graph_.instances_of(s.name)) out.insert(graph_.canonical(e));
        return out;
      }
    }
    return {};
  }

  std::string entity(const TermRef& t) const {
    if (t.kind == TermRef::Kind::Context) return context_;
    return graph_.canonical(t.value);
  }

  std::string relation(const std::string& keyword) const {
    auto rel = graph_.schema().resolve_relation(keyword);
    if (!rel) throw Error(ErrorCode::UnknownRelation, "relation '" + keyword + "' is not declared");
    return *rel;
  }

  const std::optional<std::string> context() const {
    if (rule_.context) return context_;
    return std::nullopt;
  }

 private:
  const Rule& rule_;
  const kg::Graph& graph_;
  std::vector<EntitySet> args_;
  std::string context_;
};

}  // namespace

bool Rule::raises_alert() const {
  return std::any_of(actions.begin(), actions.end(),
                     [](const Action& a) { return a.kind == Action::Kind::Alert; });
}

void RuleSet::add(Rule rule) {
  std::string key = rule.name;
  if (!rules_.emplace(std::move(key), std::move(rule)).second)
    throw Error(ErrorCode::DuplicateRuleName, "rule '" + key + "' is defined twice");
}

const Rule* RuleSet::find(std::string_view name) const {
  auto it = rules_.find(name);
  return it == rules_.end() ? nullptr : &it->second;
}

std::vector<std::string> RuleSet::names() const {
  std::vector<std::string> out;
  for (const auto& [name, rule] : rules_) out.push_back(name);
  return out;
}

void RuleSet::merge(const RuleSet& other) {
  for (const auto& [name, rule] : other.rules_) add(rule);
}

RuleSet parse_rules(std::string_view source) { return RuleParser(source).parse(); }

RuleSet load_rules(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open rule file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_rules(buf.str());
}

RuleSet builtin_rules() { return parse_rules(kOverlapRuleSource); }

Evaluation evaluate(const Rule& rule, const RuleInputs& inputs, const kg::Graph& graph) {
  Evaluator ev(rule, inputs, graph);
  Evaluation out;
  out.alert.rule = rule.name;
  out.alert.context = ev.context();
  EntitySet witness;
  const bool holds = ev.holds(rule.condition, witness);
  if (holds && witness.empty() && out.alert.context) witness.insert(*out.alert.context);
  out.alert.verdict = holds && !witness.empty();
  if (!out.alert.verdict) return out;
  out.alert.evidence = std::move(witness);

  std::set<kg::Triple> derived;
  for (const auto& action : rule.actions) {
    if (action.kind != Action::Kind::Assert) continue;
    const std::string predicate = ev.relation(action.relation);
    auto expand = [&](const TermRef& t) -> std::vector<std::string> {
      if (t.kind == TermRef::Kind::EachEvidence)
        return {out.alert.evidence.begin(), out.alert.evidence.end()};
      return {ev.entity(t)};
    };
    for (const auto& s : expand(action.subject))
      for (const auto& o : expand(action.object))
        derived.insert({s, predicate, kg::Term::node(o)});
  }
  out.derived.assign(derived.begin(), derived.end());
  return out;
}

std::size_t commit(kg::Graph& graph, const Evaluation& evaluation) {
  std::size_t added = 0;
  for (const auto& t : evaluation.derived)
    if (graph.assert_triple(t)) ++added;
  return added;
}

}  // namespace vkg::rules
