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

#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include "cyber_fixture.hpp"
#include "doctest.h"
#include "json.hpp"
#include "test_util.hpp"
#include "vkg/cli/cli.hpp"
#include "vkg/kg/graph.hpp"
#include "vkg/text.hpp"

using namespace vkg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome vkg_run(const fs::path& manifest, std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), {"--manifest", manifest.string()});
  std::ostringstream out, err;
  std::istringstream in(input);
  int code = cli::run(args, out, err, in);
  return {code, out.str(), err.str()};
}

fs::path workspace(const std::string& name) {
  auto dir = testutil::temp_dir(name);
  fixture::write_cyber_files(fixture::make_cyber_files(), dir);
  return dir / "vkg.json";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void pipeline(const fs::path& m) {
  for (const char* stage : {"ingest", "train", "link"}) {
    auto r = vkg_run(m, {stage});
    REQUIRE_MESSAGE(r.code == 0, stage << ": " << r.err);
  }
}

}  // namespace

TEST_CASE("query before train is a missing artifact") {
  auto m = workspace("cli_order");
  auto r = vkg_run(m, {"query", "--stmt", "SEARCH 'dos' AS V"});
  CHECK(r.code == 1);
  CHECK(r.err.find("MissingArtifact") != std::string::npos);
  REQUIRE(vkg_run(m, {"ingest"}).code == 0);
  r = vkg_run(m, {"query", "--stmt", "SEARCH 'dos' AS V"});
  CHECK(r.code == 1);
  CHECK(r.err.find("train") != std::string::npos);
  CHECK(vkg_run(m, {"link"}).code == 1);
}

TEST_CASE("full pipeline and queries") {
  auto m = workspace("cli_full");
  pipeline(m);
  auto r = vkg_run(m, {"query", "SEARCH 'denial_of_service' CLASS Vulnerability TOPK 5 AS V"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  std::smatch match;
  REQUIRE(std::regex_match(r.out, match, std::regex(R"(V = \[(.+)\]\n)")));
  std::istringstream g_in(slurp(m.parent_path() / "out/graph.nt"));
  auto graph = kg::Graph::load(g_in, kg::Schema::load((m.parent_path() / "schema.txt").string()));
  std::size_t n = 0;
  const std::string listed = match[1].str();
  for (const auto& item : text::split(listed, ',')) {
    auto entity = std::string(text::trim(item.substr(0, item.find(':'))));
    CHECK(graph.is_instance_of(entity, "Vulnerability"));
    ++n;
  }
  CHECK(n == 5);

  auto q1 = vkg_run(m, {"query", "--stmt", fixture::kOverlapQuery});
  REQUIRE_MESSAGE(q1.code == 0, q1.err);
  CHECK(q1.out.find("A = [alert_yes]\n") != std::string::npos);
  std::regex line(R"([A-Za-z_][A-Za-z0-9_]* = \[([a-z0-9_]+(:-?[0-9]+\.[0-9]{6})?(, [a-z0-9_]+(:-?[0-9]+\.[0-9]{6})?)*)?\])");
  std::istringstream lines(q1.out);
  for (std::string l; std::getline(lines, l);) CHECK_MESSAGE(std::regex_match(l, line), l);

  auto repl = vkg_run(m, {"query", "--repl"}, "SEARCH 'mysql' CLASS Product TOPK 2 AS P\n\nLIST nope OF 'x' AS Q\nquit\nSEARCH 'x' AS Z\n");
  CHECK(repl.code == 1);
  CHECK(repl.out.find("P = [") == 0);
  CHECK(repl.out.find("Z =") == std::string::npos);
  CHECK(repl.err.find("UnknownRelation") != std::string::npos);

  auto ev = vkg_run(m, {"eval", "--no-timing"});
  REQUIRE_MESSAGE(ev.code == 0, ev.err);
  CHECK(ev.out.find("MAP\t") != std::string::npos);
  auto report = nlohmann::json::parse(slurp(m.parent_path() / "out/report.json"));
  CHECK(report["groups"].size() == 14);
  CHECK(report["coverage"].get<double>() == 1.0);
}

TEST_CASE("re-running the pipeline reproduces every artifact") {
  auto m = workspace("cli_repro");
  pipeline(m);
  const auto dir = m.parent_path() / "out";
  std::map<std::string, std::string> first;
  for (const char* f : {"graph.nt", "tokens.txt", "model.txt", "links.txt"}) first[f] = slurp(dir / f);
  pipeline(m);
  for (const auto& [name, body] : first) CHECK_MESSAGE(slurp(dir / name) == body, name);
}

TEST_CASE("seed precedence: flag over VKG_SEED over manifest") {
  auto m = workspace("cli_seed");
  REQUIRE(vkg_run(m, {"ingest"}).code == 0);
  const auto model = m.parent_path() / "out/model.txt";
  REQUIRE(vkg_run(m, {"train", "--epochs", "1"}).code == 0);
  const auto manifest_seed = slurp(model);
  ::setenv("VKG_SEED", "99", 1);
  auto r = vkg_run(m, {"train", "--epochs", "1"});
  CHECK(r.out.find("seed 99\n") != std::string::npos);
  const auto env_seed = slurp(model);
  CHECK(env_seed != manifest_seed);
  r = vkg_run(m, {"train", "--epochs", "1", "--seed", "1"});
  CHECK(r.out.find("seed 1\n") != std::string::npos);
  CHECK(slurp(model) == manifest_seed);
  ::setenv("VKG_SEED", "banana", 1);
  CHECK(vkg_run(m, {"train"}).code == 1);
  ::unsetenv("VKG_SEED");
}

TEST_CASE("argument and manifest errors") {
  auto m = workspace("cli_args");
  CHECK(vkg_run(m, {"fly"}).code == 1);
  CHECK(vkg_run(m, {}).code == 1);
  CHECK(vkg_run(m, {"--help"}).code == 0);
  CHECK(vkg_run(m.parent_path() / "absent.json", {"ingest"}).code == 1);
  std::ofstream(m.parent_path() / "broken.json") << "{ not json";
  CHECK(vkg_run(m.parent_path() / "broken.json", {"ingest"}).code == 1);
}
