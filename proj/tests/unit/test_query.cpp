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

#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "test_util.hpp"
#include "vkg/error.hpp"
#include "vkg/query/ast.hpp"
#include "vkg/query/executor.hpp"
#include "vkg/query/plan.hpp"

using namespace vkg;
using testutil::T;

namespace {

ErrorCode parse_code(const std::string& text, const query::ParseOptions& opts = {}) {
  try {
    query::parse(text, opts);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

std::vector<std::string> values(const query::ResultSet& r) {
  std::vector<std::string> out;
  for (const auto& item : r) out.push_back(item.value);
  return out;
}

query::ExecutionResult run(const std::string& text, const testutil::AngleFixture& f,
                           const rules::RuleSet& rs, bool concurrent = true) {
  auto ast = query::parse(text, {&f.graph.schema(), &rs});
  return query::execute(ast, query::decompose(ast), {f.graph, f.model, f.links, rs}, {concurrent});
}

}  // namespace

TEST_CASE("parse the worked alert query") {
  auto ast = query::parse(
      "SEARCH 'denial_of_service' CLASS Vulnerability AS V; LIST vulnerability OF 'MySQL' AS K; "
      "INFER alert FROM V, K ON 'MySQL' AS A");
  REQUIRE(ast.statements.size() == 3);
  const auto& s = std::get<query::SearchStmt>(ast.statements[0]);
  CHECK(s.term == "denial_of_service");
  CHECK(s.class_filter == "Vulnerability");
  CHECK(s.k == query::kDefaultTopK);
  const auto& l = std::get<query::ListStmt>(ast.statements[1]);
  CHECK(l.relation == "vulnerability");
  CHECK(l.source.name == "mysql");
  const auto& i = std::get<query::InferStmt>(ast.statements[2]);
  CHECK(i.rule == "alert");
  CHECK(i.inputs == std::vector<std::string>{"V", "K"});
  CHECK(i.context == "mysql");
  CHECK(i.out_var == "A");
}

TEST_CASE("parse errors") {
  CHECK(parse_code("") == ErrorCode::SyntaxError);
  CHECK(parse_code("   # only a comment\n") == ErrorCode::SyntaxError);
  CHECK(parse_code("INFER alert FROM V AS A") == ErrorCode::UndefinedVariable);
  CHECK(parse_code("SEARCH 'a' AS V; SEARCH 'b' AS V") == ErrorCode::DuplicateVariable);
  CHECK(parse_code("SEARCH 'a' TOPK 0 AS V") == ErrorCode::SyntaxError);
  CHECK(parse_code("SEARCH a AS V") == ErrorCode::SyntaxError);
  CHECK(parse_code("SEARCH 'a' AS SEARCH") == ErrorCode::SyntaxError);

  auto schema = testutil::ie_schema();
  auto rs = rules::builtin_rules();
  query::ParseOptions opts{&schema, &rs};
  CHECK(parse_code("SEARCH 'a' CLASS Dragon AS V", opts) == ErrorCode::UnknownClass);
  CHECK(parse_code("LIST colour OF 'a' AS V", opts) == ErrorCode::UnknownRelation);
  CHECK(parse_code("SEARCH 'a' AS V; INFER nope FROM V AS A", opts) == ErrorCode::UnknownRule);
  CHECK(parse_code("SEARCH 'a' AS V; INFER alert FROM V ON 'x' AS A", opts) == ErrorCode::ArityMismatch);

  try {
    query::parse("SEARCH 'a' AS V;\nLIST x OF ( AS K");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 11);
  }
}

TEST_CASE("unparse then parse is the identity on ASTs") {
  std::mt19937_64 rng(2);
  testutil::QueryPools pools{{"denial_of_service", "mysql", "x"},
                             {"Vulnerability", "Product"},
                             {"vulnerability", "hasMeans", "Attacker"},
                             {"mysql", "chrome"},
                             {{"alert", 2, true}, {"big", 1, false}}};
  for (int i = 0; i < 100; ++i) {
    auto ast = query::parse(testutil::random_query(rng, pools));
    CHECK(query::parse(query::unparse(ast)) == ast);
  }
}

TEST_CASE("decomposition") {
  auto q1 = query::decompose(query::parse(
      "SEARCH 'denial_of_service' AS V; LIST vulnerability OF 'MySQL' AS K; INFER alert FROM V, K ON 'MySQL' AS A"));
  REQUIRE(q1.nodes.size() == 3);
  CHECK(q1.nodes[0].side == query::Side::Vector);
  CHECK(q1.nodes[1].side == query::Side::Graph);
  CHECK(q1.nodes[2].side == query::Side::Graph);
  CHECK(q1.edges == std::vector<std::pair<std::size_t, std::size_t>>{{0, 2}, {1, 2}});
  CHECK(q1.parallel_eligible(0, 1));
  CHECK_FALSE(q1.parallel_eligible(0, 2));
  CHECK(q1.stages == std::vector<std::vector<std::size_t>>{{0, 1}, {2}});

  auto single = query::decompose(query::parse("SEARCH 'x' AS V"));
  CHECK(single.nodes.size() == 1);
  CHECK(single.edges.empty());

  auto chain = query::decompose(query::parse(
      "SEARCH 'x' AS A; LIST r OF A AS B; LIST r OF B AS C; LIST r OF C AS D; LIST r OF D AS E"));
  CHECK(chain.edges == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  CHECK(chain.stages.size() == 5);
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = 0; b < 5; ++b)
      if (a != b) CHECK_FALSE(chain.parallel_eligible(a, b));
}

TEST_CASE("edges mirror variable references on random queries") {
  std::mt19937_64 rng(8);
  testutil::QueryPools pools{{"t"}, {}, {"r"}, {"e"}, {{"alert", 2, true}}};
  for (int i = 0; i < 100; ++i) {
    auto ast = query::parse(testutil::random_query(rng, pools, 8));
    auto plan = query::decompose(ast);
    std::set<std::pair<std::size_t, std::size_t>> want;
    for (std::size_t s = 0; s < ast.statements.size(); ++s)
      for (const auto& v : query::input_vars(ast.statements[s]))
        for (std::size_t p = 0; p < s; ++p)
          if (query::out_var(ast.statements[p]) == v) want.insert({p, s});
    CHECK(std::set<std::pair<std::size_t, std::size_t>>(plan.edges.begin(), plan.edges.end()) == want);
    for (std::size_t n = 0; n < plan.nodes.size(); ++n)
      CHECK((plan.nodes[n].side == query::Side::Vector) ==
            std::holds_alternative<query::SearchStmt>(ast.statements[n]));
  }
}

TEST_CASE("class filtered search drops nearer entities of other classes") {
  auto f = testutil::angle_fixture(true);
  auto r = query::vkg_search({"denial_of_service", "Vulnerability", 2}, f.graph, f.model, f.links);
  CHECK(values(r) == std::vector<std::string>{"resource_exhaustion", "execute_arbitrary_code"});
  auto unfiltered = query::vkg_search({"denial_of_service", std::nullopt, 2}, f.graph, f.model, f.links);
  // "crash" is nearer still but is not a graph entity.
  CHECK(values(unfiltered) == std::vector<std::string>{"crafted_web_site", "resource_exhaustion"});
  CHECK_THROWS_AS(query::vkg_search({"nothing", std::nullopt, 2}, f.graph, f.model, f.links), Error);
  CHECK_THROWS_AS(query::vkg_search({"denial_of_service", "Dragon", 2}, f.graph, f.model, f.links), Error);
}

TEST_CASE("unfiltered search equals top_k restricted to linked entities") {
  std::mt19937_64 rng(4);
  auto rm = testutil::random_model(rng, 300, 8, "w");
  kg::Graph g(testutil::ie_schema());
  for (std::size_t i = 0; i < 300; ++i)
    if (i % 3 != 0) g.assert_triple(T(rm.tokens[i], "type", i % 2 ? "Vulnerability" : "Product"));
  auto links = link::link_all(g, rm.model);
  for (std::size_t q = 1; q < 300; q += 29) {
    auto got = query::vkg_search({rm.tokens[q], std::nullopt, 7}, g, rm.model, links);
    std::vector<std::string> want;
    for (const auto& n : rm.model.top_k(rm.tokens[q], 300))
      if (links.is_linked(n.token) && want.size() < 7) want.push_back(n.token);
    CHECK(values(got) == want);
  }
}

TEST_CASE("search with sameAs unions both neighborhoods") {
  auto f = testutil::angle_fixture(true);
  // sql_injection sits at 80 degrees; buffer_overflow at 60 is its nearest
  // Vulnerability, and resource_exhaustion is nearest to denial_of_service.
  f.graph.merge_same_as("denial_of_service", "sql_injection");
  auto r = query::vkg_search({"denial_of_service", "Vulnerability", 3}, f.graph, f.model, f.links);
  auto v = values(r);
  CHECK(std::find(v.begin(), v.end(), "sql_injection") == v.end());
  REQUIRE(v.size() == 3);
  CHECK(v[0] == "resource_exhaustion");
  // Alone, denial_of_service sees buffer_overflow at cos 60; through
  // sql_injection it is only 20 degrees away.
  for (const auto& item : r)
    if (item.value == "buffer_overflow") CHECK(std::abs(*item.score - std::cos(20 * 3.14159265358979323846 / 180)) < 1e-9);
  CHECK(std::find(v.begin(), v.end(), "buffer_overflow") != v.end());
}

TEST_CASE("overlap alert query on the hand-built fixture") {
  auto rs = rules::builtin_rules();
  auto yes = run("SEARCH 'denial_of_service' CLASS Vulnerability TOPK 2 AS V; LIST vulnerability OF 'MySQL' AS K; "
                 "INFER alert FROM V, K ON 'MySQL' AS A",
                 testutil::angle_fixture(true), rs);
  CHECK(values(yes.bindings.values.at("A")) == std::vector<std::string>{"alert_yes"});
  CHECK(yes.bindings.alerts.at("A").evidence == std::set<std::string>{"resource_exhaustion"});
  auto no = run("SEARCH 'denial_of_service' CLASS Vulnerability TOPK 2 AS V; LIST vulnerability OF 'MySQL' AS K; "
                "INFER alert FROM V, K ON 'MySQL' AS A",
                testutil::angle_fixture(false), rs);
  CHECK(values(no.bindings.values.at("A")) == std::vector<std::string>{"alert_no"});
  CHECK(no.bindings.alerts.at("A").evidence.empty());

  auto text = query::format_bindings(
      query::parse("SEARCH 'denial_of_service' CLASS Vulnerability TOPK 2 AS V; LIST vulnerability OF 'MySQL' AS K; "
                   "INFER alert FROM V, K ON 'MySQL' AS A"),
      yes.bindings);
  CHECK(text.find("K = [resource_exhaustion, sql_injection]\n") != std::string::npos);
  CHECK(text.find("A = [alert_yes]\n") != std::string::npos);
  CHECK(text.find("V = [resource_exhaustion:0.984808, execute_arbitrary_code:0.939693]\n") != std::string::npos);
}

TEST_CASE("LIST on an unknown product is empty") {
  auto f = testutil::angle_fixture(true);
  auto r = run("LIST vulnerability OF 'postgresql' AS K", f, rules::builtin_rules());
  CHECK(r.bindings.values.at("K").empty());
}

TEST_CASE("fan-out LIST equals the two-step composition") {
  auto f = testutil::angle_fixture(true);
  f.graph.assert_triple(T("chrome", "type", "Software"));
  f.graph.assert_triple(T("chrome", "hasVulnerability", "execute_arbitrary_code"));
  // crafted_web_site is a Means, so the product search skips it; mysql is the
  // only linked product besides the query itself.
  auto rs = rules::builtin_rules();
  auto r = run("SEARCH 'denial_of_service' CLASS Product TOPK 3 AS P; LIST vulnerability OF P AS K", f, rs);
  std::set<std::string> want;
  for (const auto& p : r.bindings.values.at("P"))
    for (const auto& t : f.graph.match({p.value, "hasVulnerability", std::nullopt})) want.insert(t.object.text);
  auto got = values(r.bindings.values.at("K"));
  CHECK(std::set<std::string>(got.begin(), got.end()) == want);
  CHECK(want == std::set<std::string>{"resource_exhaustion", "sql_injection"});
}

TEST_CASE("trace tags respect the plan partition and modes agree") {
  auto f = testutil::angle_fixture(true);
  auto rs = rules::builtin_rules();
  const std::string q =
      "SEARCH 'denial_of_service' CLASS Vulnerability TOPK 3 AS V; LIST vulnerability OF 'MySQL' AS K; "
      "INFER alert FROM V, K ON 'MySQL' AS A; LIST vulnerability OF V AS W";
  auto ast = query::parse(q, {&f.graph.schema(), &rs});
  auto plan = query::decompose(ast);
  auto conc = run(q, f, rs, true);
  auto seq = run(q, f, rs, false);
  CHECK(conc.bindings == seq.bindings);
  CHECK(conc.trace == seq.trace);
  for (const auto& e : conc.trace) {
    if (plan.nodes[e.node].side == query::Side::Vector)
      CHECK((e.backend == query::Backend::Vector || e.backend == query::Backend::Link));
    else
      CHECK(e.backend != query::Backend::Vector);
  }
}

TEST_CASE("failures name the statement") {
  auto f = testutil::angle_fixture(true);
  try {
    run("LIST vulnerability OF 'mysql' AS K; SEARCH 'not_a_token' AS V", f, rules::builtin_rules());
    FAIL("expected StatementError");
  } catch (const StatementError& e) {
    CHECK(e.statement() == 1);
    CHECK(e.code() == ErrorCode::OutOfVocabulary);
  }
}
