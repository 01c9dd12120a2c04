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
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "test_util.hpp"
#include "vkg/error.hpp"
#include "vkg/ingest/ingest.hpp"
#include "vkg/link/link_table.hpp"

using namespace vkg;
using testutil::T;

namespace {

kg::Schema cyber_schema() {
  return testutil::schema_from(
      "[classes]\nProduct\nSoftware\nVulnerability\nAttacker\nMeans\n"
      "[subclass]\nSoftware Product\n"
      "[relations]\nhasVulnerability\nhasAttacker\nhasMeans\n");
}

ingest::Gazetteer ie_gazetteer(const kg::Schema& s) {
  ingest::Gazetteer g;
  g.add("Microsoft Internet Explorer", "microsoft_internet_explorer", "Software", &s);
  g.add("remote attackers", "remote_attackers", "Attacker", &s);
  g.add("execute arbitrary code", "execute_arbitrary_code", "Vulnerability", &s);
  g.add("denial of service", "denial_of_service", "Vulnerability", &s);
  g.add("crafted web site", "crafted_web_site", "Means", &s);
  return g;
}

std::vector<ingest::RelationTemplate> ie_templates() {
  return {{"Product", "hasVulnerability", "Vulnerability", {}},
          {"Product", "hasMeans", "Means", {}},
          {"Product", "hasAttacker", "Attacker", {}}};
}

const std::set<std::string> kStop = {"a", "or", "through", "when", "the"};

const char* kSentence =
    "Microsoft Internet Explorer lets remote attackers execute arbitrary code or trigger a "
    "denial of service through memory corruption when a user opens a crafted web site.";

}  // namespace

TEST_CASE("preprocess the Internet Explorer description") {
  auto s = cyber_schema();
  auto toks = ingest::preprocess({"d", ingest::Source::Nvd, kSentence}, kStop, ie_gazetteer(s));
  for (const char* want : {"microsoft_internet_explorer", "remote_attackers", "denial_of_service",
                           "crafted_web_site", "execute_arbitrary_code"})
    CHECK(std::count(toks.begin(), toks.end(), want) == 1);
  CHECK(std::find(toks.begin(), toks.end(), "through") == toks.end());
  CHECK(std::find(toks.begin(), toks.end(), "memory") != toks.end());
  CHECK(ingest::preprocess({"e", ingest::Source::Nvd, ""}, kStop, ie_gazetteer(s)).empty());
}

TEST_CASE("overlapping entries resolve longest-leftmost") {
  kg::Schema s;
  s.add_class("C");
  ingest::Gazetteer g;
  g.add("a b", "a_b", "C");
  g.add("b c", "b_c", "C");
  CHECK(ingest::preprocess({"d", ingest::Source::Fixture, "a b c"}, {}, g) ==
        std::vector<std::string>{"a_b", "c"});
  g.add("a b c d", "abcd", "C");
  CHECK(ingest::preprocess({"d", ingest::Source::Fixture, "x a b c d a b"}, {}, g) ==
        std::vector<std::string>{"x", "abcd", "a_b"});
}

TEST_CASE("gazetteer matching equals a brute-force matcher") {
  std::mt19937_64 rng(12);
  const std::vector<std::string> alphabet = {"p", "q", "r", "s", "t"};
  for (int round = 0; round < 200; ++round) {
    ingest::Gazetteer g;
    std::vector<std::pair<std::vector<std::string>, std::string>> entries;
    std::set<std::vector<std::string>> seen;
    for (int e = 0; e < 6; ++e) {
      std::vector<std::string> surface;
      const std::size_t len = 1 + rng() % 3;
      for (std::size_t i = 0; i < len; ++i) surface.push_back(alphabet[rng() % alphabet.size()]);
      if (!seen.insert(surface).second) continue;
      std::string text, id = "ent" + std::to_string(e);
      for (const auto& w : surface) text += w + " ";
      g.add(text, id, "C");
      entries.emplace_back(surface, id);
    }
    std::vector<std::string> tokens;
    std::string text;
    for (int i = 0; i < 15; ++i) {
      tokens.push_back(alphabet[rng() % alphabet.size()]);
      text += tokens.back() + (rng() % 2 ? " " : ", ");
    }
    CHECK(ingest::preprocess({"d", ingest::Source::Fixture, text}, {}, g) == oracle::segment(tokens, entries));
  }
}

TEST_CASE("relation templates on the Internet Explorer description") {
  auto s = cyber_schema();
  auto gaz = ie_gazetteer(s);
  auto toks = ingest::preprocess({"d", ingest::Source::Nvd, kSentence}, kStop, gaz);
  auto triples = ingest::extract_triples(toks, gaz, ie_templates(), s);
  const std::string ie = "microsoft_internet_explorer";
  std::vector<kg::Triple> want = {
      T(ie, "type", "Software"),
      T("remote_attackers", "type", "Attacker"),
      T("execute_arbitrary_code", "type", "Vulnerability"),
      T("denial_of_service", "type", "Vulnerability"),
      T("crafted_web_site", "type", "Means"),
      T(ie, "hasVulnerability", "denial_of_service"),
      T(ie, "hasVulnerability", "execute_arbitrary_code"),
      T(ie, "hasMeans", "crafted_web_site"),
      T(ie, "hasAttacker", "remote_attackers"),
  };
  std::sort(want.begin(), want.end());
  CHECK(triples == want);

  auto only_vulns = ingest::preprocess({"d", ingest::Source::Nvd, "denial of service and execute arbitrary code"}, kStop, gaz);
  auto t2 = ingest::extract_triples(only_vulns, gaz, ie_templates(), s);
  CHECK(t2.size() == 2);
  for (const auto& t : t2) CHECK(t.predicate == "type");
}

TEST_CASE("template triggers gate relation triples") {
  auto s = cyber_schema();
  auto gaz = ie_gazetteer(s);
  std::vector<ingest::RelationTemplate> tpl = {{"Product", "hasAttacker", "Attacker", {"exploited"}}};
  auto without = ingest::preprocess({"d", ingest::Source::Nvd, "Microsoft Internet Explorer remote attackers"}, {}, gaz);
  auto with = ingest::preprocess({"d", ingest::Source::Nvd, "Microsoft Internet Explorer exploited by remote attackers"}, {}, gaz);
  CHECK(ingest::extract_triples(without, gaz, tpl, s).size() == 2);
  CHECK(ingest::extract_triples(with, gaz, tpl, s).size() == 3);
}

TEST_CASE("extraction equals an exhaustive template oracle on a synthetic corpus") {
  auto s = cyber_schema();
  ingest::Gazetteer gaz;
  struct Ent {
    std::string id, cls;
  };
  std::vector<Ent> ents = {{"chrome", "Software"},  {"router", "Product"}, {"xss", "Vulnerability"},
                           {"dos", "Vulnerability"}, {"hackers", "Attacker"}, {"exploit_kit", "Means"}};
  for (const auto& e : ents) gaz.add(e.id, e.id, e.cls, &s);
  std::vector<ingest::RelationTemplate> tpl = {{"Product", "hasVulnerability", "Vulnerability", {}},
                                               {"Product", "hasAttacker", "Attacker", {"attack", "attacked"}},
                                               {"Software", "hasMeans", "Means", {}}};
  const std::vector<std::string> words = {"attack", "the", "update", "report", "attacked"};
  std::mt19937_64 rng(21);
  std::vector<ingest::Document> docs;
  for (int d = 0; d < 50; ++d) {
    std::string text;
    for (int w = 0; w < 6; ++w)
      text += (rng() % 2 ? ents[rng() % ents.size()].id : words[rng() % words.size()]) + " ";
    docs.push_back({"d" + std::to_string(d), ingest::Source::Fixture, text});
  }
  auto built = ingest::build_corpus(docs, {"the"}, gaz, tpl, s);

  std::set<kg::Triple> want;
  for (const auto& doc : docs) {
    auto toks = ingest::tokenize(doc.text);
    toks.erase(std::remove(toks.begin(), toks.end(), "the"), toks.end());
    for (const auto& a : ents) {
      if (std::find(toks.begin(), toks.end(), a.id) == toks.end()) continue;
      want.insert(T(a.id, "type", a.cls));
      for (const auto& b : ents) {
        if (a.id == b.id || std::find(toks.begin(), toks.end(), b.id) == toks.end()) continue;
        for (const auto& t : tpl) {
          bool triggered = t.triggers.empty();
          for (const auto& trig : t.triggers)
            triggered = triggered || std::find(toks.begin(), toks.end(), trig) != toks.end();
          if (triggered && s.is_subclass_of(a.cls, t.subject_class) && s.is_subclass_of(b.cls, t.object_class))
            want.insert(T(a.id, t.relation, b.id));
        }
      }
    }
  }
  CHECK(built.graph.triples() == want);
  // Every entity in a relation triple is also typed.
  for (const auto& t : built.graph.triples())
    if (t.predicate != "type") {
      CHECK_FALSE(built.graph.match({t.subject, "type", std::nullopt}).empty());
      CHECK_FALSE(built.graph.match({t.object.text, "type", std::nullopt}).empty());
    }

  // Shared vocabulary means full linking coverage.
  vec::TrainingConfig cfg;
  cfg.dimension = 8;
  cfg.epochs = 1;
  auto model = vec::train(built.tokens, cfg);
  auto links = link::link_all(built.graph, model);
  CHECK(links.coverage() == 1.0);
}

TEST_CASE("build_corpus properties") {
  auto s = cyber_schema();
  auto gaz = ie_gazetteer(s);
  ingest::Document d{"a", ingest::Source::Nvd, kSentence};
  auto one = ingest::build_corpus({d}, kStop, gaz, ie_templates(), s);
  auto direct = ingest::extract_triples(ingest::preprocess(d, kStop, gaz), gaz, ie_templates(), s);
  CHECK(std::vector<kg::Triple>(one.graph.triples().begin(), one.graph.triples().end()) == direct);

  ingest::Document d2 = d;
  d2.id = "b";
  auto two = ingest::build_corpus({d, d2}, kStop, gaz, ie_templates(), s);
  CHECK(two.graph == one.graph);
  CHECK(two.tokens.size() == 2);
  CHECK(two.tokens[0] == two.tokens[1]);

  try {
    ingest::build_corpus({d, d}, kStop, gaz, ie_templates(), s);
    FAIL("expected DuplicateDocument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateDocument);
  }

  // Same inputs, same bytes.
  std::ostringstream g1, g2, t1, t2;
  one.graph.save(g1);
  ingest::build_corpus({d}, kStop, gaz, ie_templates(), s).graph.save(g2);
  ingest::write_token_stream(t1, one.tokens);
  ingest::write_token_stream(t2, ingest::build_corpus({d}, kStop, gaz, ie_templates(), s).tokens);
  CHECK(g1.str() == g2.str());
  CHECK(t1.str() == t2.str());
  std::istringstream back(t1.str());
  CHECK(ingest::read_token_stream(back) == one.tokens);
}

TEST_CASE("input file formats") {
  auto s = cyber_schema();
  std::istringstream jsonl(
      "{\"id\": \"n1\", \"source\": \"nvd\", \"text\": \"Chrome crash\"}\n\n"
      "{\"id\": \"t1\", \"source\": \"social\", \"text\": \"dos seen\"}\n");
  auto docs = ingest::read_documents(jsonl);
  REQUIRE(docs.size() == 2);
  CHECK(docs[1].source == ingest::Source::Social);

  std::istringstream dup("{\"id\": \"x\", \"text\": \"a\"}\n{\"id\": \"x\", \"text\": \"b\"}\n");
  CHECK_THROWS_AS(ingest::read_documents(dup), Error);
  std::istringstream bad("{\"id\": \"x\", \"source\": \"fax\", \"text\": \"a\"}\n");
  CHECK_THROWS_AS(ingest::read_documents(bad), Error);

  std::istringstream gaz("# comment\nGoogle Chrome\tchrome\tSoftware\nDoS\tdenial_of_service\tVulnerability\n");
  auto g = ingest::Gazetteer::read_tsv(gaz, s);
  CHECK(g.size() == 2);
  CHECK(g.classes_of("chrome") == std::set<std::string>{"Software"});
  std::istringstream gaz_bad("x\tx\tDragon\n");
  CHECK_THROWS_AS(ingest::Gazetteer::read_tsv(gaz_bad, s), Error);

  std::istringstream tpl("Product\thasVulnerability\tVulnerability\nProduct\thasAttacker\tAttacker\tattack, exploited\n");
  auto t = ingest::read_templates(tpl, s);
  REQUIRE(t.size() == 2);
  CHECK(t[1].triggers == std::set<std::string>{"attack", "exploited"});
  std::istringstream tpl_bad("Product\tcolour\tVulnerability\n");
  CHECK_THROWS_AS(ingest::read_templates(tpl_bad, s), Error);

  std::istringstream sw("The\n# skip\n\nof\n");
  CHECK(ingest::read_stopwords(sw) == std::set<std::string>{"the", "of"});
}
