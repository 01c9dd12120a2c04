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

#include <algorithm>
#include <iterator>
#include <set>

#include "../lexer.hpp"
#include "vkg/kg/schema.hpp"
#include "vkg/query/ast.hpp"
#include "vkg/rules/rules.hpp"

namespace vkg::query {

using detail::Token;
using detail::TokenCursor;

namespace {

constexpr std::string_view kKeywords[] = {"SEARCH", "CLASS", "TOPK", "AS", "LIST",
                                          "OF",     "INFER", "FROM", "ON"};

bool is_keyword(std::string_view s) {
  return std::any_of(std::begin(kKeywords), std::end(kKeywords),
                     [&](std::string_view k) { return text::iequals(k, s); });
}

class QueryParser {
 public:
  QueryParser(std::string_view src, const ParseOptions& opts)
      : cur_(detail::lex(src, ErrorCode::SyntaxError), ErrorCode::SyntaxError), opts_(opts) {}

  QueryAst parse() {
    QueryAst ast;
    if (cur_.at_end()) cur_.fail("empty query");
    do {
      if (cur_.at_end()) break;  // trailing ';'
      ast.statements.push_back(statement());
    } while (cur_.accept_symbol(";"));
    if (!cur_.at_end()) cur_.fail("expected ';' or end of query");
    return ast;
  }

 private:
  std::string ident(std::string_view what) {
    const Token& t = cur_.expect(Token::Kind::Ident, what);
    if (is_keyword(t.text)) cur_.fail_at(t, std::string(what) + " may not be a keyword");
    return t.text;
  }

  std::string use_var() {
    const Token& t = cur_.peek();
    std::string v = ident("variable");
    if (!bound_.count(v))
      throw SyntaxError(ErrorCode::UndefinedVariable, "variable " + v + " is not bound", t.line,
                        t.column);
    return v;
  }

  std::string bind_var() {
    cur_.expect_keyword("AS");
    const Token& t = cur_.peek();
    std::string v = ident("variable");
    if (!bound_.insert(v).second)
      throw SyntaxError(ErrorCode::DuplicateVariable, "variable " + v + " is bound twice", t.line,
                        t.column);
    return v;
  }

  Statement statement() {
    if (cur_.accept_keyword("SEARCH")) {
      SearchStmt s;
      s.term = cur_.expect(Token::Kind::Quoted, "quoted term").text;
      if (cur_.accept_keyword("CLASS")) {
        const Token& t = cur_.peek();
        s.class_filter = ident("class name");
        if (opts_.schema && !opts_.schema->has_class(*s.class_filter))
          throw SyntaxError(ErrorCode::UnknownClass, "class " + *s.class_filter + " is not declared",
                            t.line, t.column);
      }
      if (cur_.accept_keyword("TOPK")) {
        const Token& t = cur_.expect(Token::Kind::Int, "integer");
        if (t.text.size() > 9) cur_.fail_at(t, "TOPK out of range");
        s.k = std::stoul(t.text);
        if (s.k == 0) cur_.fail_at(t, "TOPK must be positive");
      }
      s.out_var = bind_var();
      return s;
    }
    if (cur_.accept_keyword("LIST")) {
      ListStmt s;
      const Token& rel = cur_.peek();
      s.relation = ident("relation keyword");
      if (opts_.schema && !opts_.schema->resolve_relation(s.relation))
        throw SyntaxError(ErrorCode::UnknownRelation, "unknown relation keyword " + s.relation,
                          rel.line, rel.column);
      cur_.expect_keyword("OF");
      if (cur_.peek().kind == Token::Kind::Quoted) {
        s.source = {ListSource::Kind::Entity, cur_.next().text};
      } else {
        s.source = {ListSource::Kind::Variable, use_var()};
      }
      s.out_var = bind_var();
      return s;
    }
    if (cur_.accept_keyword("INFER")) {
      InferStmt s;
      const Token& rule_tok = cur_.peek();
      s.rule = ident("rule name");
      const rules::Rule* rule = nullptr;
      if (opts_.rules) {
        rule = opts_.rules->find(s.rule);
        if (!rule)
          throw SyntaxError(ErrorCode::UnknownRule, "rule " + s.rule + " is not defined",
                            rule_tok.line, rule_tok.column);
      }
      cur_.expect_keyword("FROM");
      do {
        s.inputs.push_back(use_var());
      } while (cur_.accept_symbol(","));
      if (cur_.accept_keyword("ON")) s.context = cur_.expect(Token::Kind::Quoted, "quoted entity").text;
      if (rule && (rule->params.size() != s.inputs.size() ||
                   (rule->context.has_value() && !s.context.has_value())))
        throw SyntaxError(ErrorCode::ArityMismatch,
                          "rule " + s.rule + " takes " + std::to_string(rule->params.size()) +
                              " inputs" + (rule->context ? " and an ON entity" : ""),
                          rule_tok.line, rule_tok.column);
      s.out_var = bind_var();
      return s;
    }
    cur_.fail("expected SEARCH, LIST or INFER");
  }

  TokenCursor cur_;
  const ParseOptions& opts_;
  std::set<std::string> bound_;
};

}  // namespace

const std::string& out_var(const Statement& s) {
  return std::visit([](const auto& st) -> const std::string& { return st.out_var; }, s);
}

std::vector<std::string> input_vars(const Statement& s) {
  if (const auto* l = std::get_if<ListStmt>(&s)) {
    if (l->source.kind == ListSource::Kind::Variable) return {l->source.name};
    return {};
  }
  if (const auto* i = std::get_if<InferStmt>(&s)) return i->inputs;
  return {};
}

QueryAst parse(std::string_view text, const ParseOptions& options) {
  return QueryParser(text, options).parse();
}

std::string unparse(const Statement& stmt) {
  std::string out;
  if (const auto* s = std::get_if<SearchStmt>(&stmt)) {
    out = "SEARCH '" + s->term + "'";
    if (s->class_filter) out += " CLASS " + *s->class_filter;
    out += " TOPK " + std::to_string(s->k) + " AS " + s->out_var;
  } else if (const auto* l = std::get_if<ListStmt>(&stmt)) {
    out = "LIST " + l->relation + " OF ";
    out += l->source.kind == ListSource::Kind::Entity ? "'" + l->source.name + "'" : l->source.name;
    out += " AS " + l->out_var;
  } else {
    const auto& i = std::get<InferStmt>(stmt);
    out = "INFER " + i.rule + " FROM ";
    for (std::size_t n = 0; n < i.inputs.size(); ++n) out += (n ? ", " : "") + i.inputs[n];
    if (i.context) out += " ON '" + *i.context + "'";
    out += " AS " + i.out_var;
  }
  return out;
}

std::string unparse(const QueryAst& ast) {
  std::string out;
  for (std::size_t n = 0; n < ast.statements.size(); ++n) {
    if (n) out += "; ";
    out += unparse(ast.statements[n]);
  }
  return out;
}

}  // namespace vkg::query
