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

#include "vkg/cli/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "vkg/error.hpp"
#include "vkg/eval/eval.hpp"
#include "vkg/ingest/ingest.hpp"
#include "vkg/kg/graph.hpp"
#include "vkg/link/link_table.hpp"
#include "vkg/query/ast.hpp"
#include "vkg/query/executor.hpp"
#include "vkg/query/plan.hpp"
#include "vkg/rules/rules.hpp"
#include "vkg/text.hpp"
#include "vkg/vec/embedding.hpp"

namespace fs = std::filesystem;

namespace vkg::cli {

namespace {

std::ifstream open_in(const fs::path& p, std::string_view what) {
  std::ifstream in(p);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + std::string(what) + " '" + p.string() + "'");
  return in;
}

std::ofstream open_out(const fs::path& p, std::string_view what) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + std::string(what) + " '" + p.string() + "'");
  return out;
}

void require_input(const fs::path& p, std::string_view what) {
  if (p.empty()) throw Error(ErrorCode::MissingArtifact, "manifest does not name the " + std::string(what));
  if (!fs::exists(p))
    throw Error(ErrorCode::Io, std::string(what) + " '" + p.string() + "' does not exist");
}

// A file that an earlier stage should have produced.
void require_artifact(const fs::path& p, std::string_view what, std::string_view stage) {
  if (p.empty() || !fs::exists(p))
    throw Error(ErrorCode::MissingArtifact, std::string(what) + " '" + p.string() +
                                                "' is missing; run `" + std::string(stage) + "` first");
}

}  // namespace

Manifest load_manifest(const fs::path& path) {
  auto in = open_in(path, "manifest");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedInput, "manifest: " + std::string(e.what()));
  }
  if (!j.is_object()) throw Error(ErrorCode::MalformedInput, "manifest must be a JSON object");
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  Manifest m;
  auto field = [&](const char* key, fs::path& dst) {
    if (!j.contains(key)) return;
    if (!j[key].is_string()) throw Error(ErrorCode::MalformedInput, std::string("manifest: '") + key + "' must be a string");
    fs::path p = j[key].get<std::string>();
    dst = p.is_absolute() ? p : base / p;
  };
  field("corpus", m.corpus);
  field("schema", m.schema);
  field("gazetteer", m.gazetteer);
  field("templates", m.templates);
  field("stopwords", m.stopwords);
  field("rules", m.rules);
  field("groups", m.groups);
  field("model", m.model);
  field("graph", m.graph);
  field("tokens", m.tokens);
  field("link_audit", m.link_audit);
  field("report", m.report);
  field("sweep_report", m.sweep_report);
  if (j.contains("training")) {
    const auto& t = j["training"];
    try {
      m.training.dimension = t.value("dimension", m.training.dimension);
      m.training.window = t.value("window", m.training.window);
      m.training.min_count = t.value("min_count", m.training.min_count);
      m.training.negatives = t.value("negatives", m.training.negatives);
      m.training.epochs = t.value("epochs", m.training.epochs);
      m.training.learning_rate = t.value("learning_rate", m.training.learning_rate);
      m.training.seed = t.value("seed", m.training.seed);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedInput, "manifest training block: " + std::string(e.what()));
    }
  }
  return m;
}

std::optional<std::uint64_t> seed_from_env() {
  const char* raw = std::getenv("VKG_SEED");
  if (!raw || !*raw) return std::nullopt;
  std::string_view s(raw);
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw Error(ErrorCode::InvalidConfig, "VKG_SEED must be an unsigned integer, got '" + std::string(s) + "'");
  return v;
}

namespace {

struct Workspace {
  Manifest manifest;
  std::ostream& out;
  std::ostream& err;
  std::istream& in;

  kg::Schema schema() const {
    require_input(manifest.schema, "schema");
    return kg::Schema::load(manifest.schema.string());
  }

  kg::Graph graph(std::string_view stage = "ingest") const {
    require_artifact(manifest.graph, "graph", stage);
    auto in = open_in(manifest.graph, "graph");
    return kg::Graph::load(in, schema());
  }

  vec::EmbeddingModel model() const {
    require_artifact(manifest.model, "model", "train");
    return vec::EmbeddingModel::load_text(manifest.model.string());
  }

  rules::RuleSet rules() const {
    auto set = rules::builtin_rules();
    if (!manifest.rules.empty() && fs::exists(manifest.rules))
      set.merge(rules::load_rules(manifest.rules.string()));
    return set;
  }
};

void cmd_ingest(Workspace& ws) {
  const auto& m = ws.manifest;
  require_input(m.corpus, "corpus");
  require_input(m.gazetteer, "gazetteer");
  require_input(m.templates, "templates");
  auto schema = ws.schema();
  auto corpus_in = open_in(m.corpus, "corpus");
  auto docs = ingest::read_documents(corpus_in);
  auto gaz_in = open_in(m.gazetteer, "gazetteer");
  auto gazetteer = ingest::Gazetteer::read_tsv(gaz_in, schema);
  auto tpl_in = open_in(m.templates, "templates");
  auto templates = ingest::read_templates(tpl_in, schema);
  std::set<std::string> stopwords;
  if (!m.stopwords.empty()) {
    require_input(m.stopwords, "stopwords");
    auto sw_in = open_in(m.stopwords, "stopwords");
    stopwords = ingest::read_stopwords(sw_in);
  }
  auto built = ingest::build_corpus(docs, stopwords, gazetteer, templates, schema);
  if (m.graph.empty() || m.tokens.empty())
    throw Error(ErrorCode::MissingArtifact, "manifest must name the graph and tokens outputs");
  {
    auto g_out = open_out(m.graph, "graph");
    built.graph.save(g_out);
  }
  {
    auto t_out = open_out(m.tokens, "tokens");
    ingest::write_token_stream(t_out, built.tokens);
  }
  std::size_t tokens = 0;
  for (const auto& d : built.tokens) tokens += d.size();
  ws.out << "documents " << docs.size() << "\ntriples " << built.graph.size() << "\ntokens " << tokens
         << '\n';
}

void cmd_train(Workspace& ws, const vec::TrainingConfig& cfg) {
  const auto& m = ws.manifest;
  require_artifact(m.tokens, "token stream", "ingest");
  auto in = open_in(m.tokens, "token stream");
  auto corpus = ingest::read_token_stream(in);
  auto model = vec::train(corpus, cfg);
  if (m.model.empty()) throw Error(ErrorCode::MissingArtifact, "manifest must name the model output");
  {
    auto out = open_out(m.model, "model");
    model.save_text(out);
  }
  ws.out << "vocabulary " << model.size() << "\ndimension " << model.dimension() << "\nseed "
         << cfg.seed << '\n';
}

void cmd_link(Workspace& ws) {
  const auto& m = ws.manifest;
  auto graph = ws.graph();
  auto model = ws.model();
  auto links = link::link_all(graph, model);
  if (m.link_audit.empty()) throw Error(ErrorCode::MissingArtifact, "manifest must name the link audit output");
  {
    auto out = open_out(m.graph, "graph");
    graph.save(out);
  }
  {
    auto out = open_out(m.link_audit, "link audit");
    links.write_audit(out);
  }
  ws.out << "linked " << links.links().size() << "\nunlinked " << links.unlinked().size()
         << "\ncoverage " << text::format_fixed(links.coverage()) << '\n';
}

struct QueryState {
  kg::Graph graph;
  vec::EmbeddingModel model;
  link::LinkTable links;
  rules::RuleSet rules;
};

QueryState load_query_state(Workspace& ws) {
  const auto& m = ws.manifest;
  // Check all three predecessors up front so the error names the first missing stage.
  require_artifact(m.graph, "graph", "ingest");
  require_artifact(m.model, "model", "train");
  require_artifact(m.link_audit, "link audit", "link");
  QueryState st{ws.graph(), ws.model(), {}, ws.rules()};
  st.links = link::link_all(st.graph, st.model);
  return st;
}

void run_statement(const QueryState& st, std::string_view text, bool explain, std::ostream& out) {
  query::ParseOptions opts{&st.graph.schema(), &st.rules};
  auto ast = query::parse(text, opts);
  auto plan = query::decompose(ast);
  if (explain) {
    for (std::size_t i = 0; i < plan.nodes.size(); ++i)
      out << "# node " << i << ' ' << query::to_string(plan.nodes[i].side) << ' '
          << query::unparse(ast.statements[plan.nodes[i].statement]) << '\n';
    for (std::size_t s = 0; s < plan.stages.size(); ++s) {
      out << "# stage " << s << ':';
      for (auto n : plan.stages[s]) out << ' ' << n;
      out << '\n';
    }
  }
  query::ExecutionContext ctx{st.graph, st.model, st.links, st.rules};
  auto result = query::execute(ast, plan, ctx);
  out << query::format_bindings(ast, result.bindings);
}

int cmd_query(Workspace& ws, const std::string& stmt, bool repl, bool explain) {
  if (stmt.empty() && !repl) throw Error(ErrorCode::InvalidArgument, "query needs --stmt <text> or --repl");
  auto st = load_query_state(ws);
  if (!repl) {
    run_statement(st, stmt, explain, ws.out);
    return kOk;
  }
  std::string line;
  int status = kOk;
  ws.err << "vkg> " << std::flush;
  while (std::getline(ws.in, line)) {
    auto view = text::trim(line);
    if (view == "quit" || view == "exit" || view == "\\q") break;
    if (!view.empty()) {
      try {
        run_statement(st, view, explain, ws.out);
      } catch (const Error& e) {
        ws.err << "error: " << e.what() << '\n';
        status = kUserError;
      }
    }
    ws.err << "vkg> " << std::flush;
  }
  return status;
}

std::vector<eval::SimilarityGroup> load_groups(const Workspace& ws) {
  require_input(ws.manifest.groups, "groups");
  auto in = open_in(ws.manifest.groups, "groups");
  return eval::read_groups(in);
}

void cmd_eval(Workspace& ws, std::size_t k, bool timing) {
  auto st = load_query_state(ws);
  auto groups = load_groups(ws);
  eval::EvalInputs in{st.graph, st.model, st.links};
  auto report = eval::evaluate_all(groups, in, k, timing);
  if (!ws.manifest.report.empty()) {
    auto out = open_out(ws.manifest.report, "report");
    out << eval::to_json(report).dump(2) << '\n';
  }
  eval::write_table(ws.out, report);
}

void cmd_sweep(Workspace& ws, const vec::TrainingConfig& cfg, std::size_t k) {
  const auto& m = ws.manifest;
  require_artifact(m.tokens, "token stream", "ingest");
  auto in = open_in(m.tokens, "token stream");
  auto corpus = ingest::read_token_stream(in);
  auto graph = ws.graph();
  auto groups = load_groups(ws);
  auto points = eval::sweep(corpus, graph, groups, cfg, {16, 32, 64}, {1, 2, 5}, k);
  if (!m.sweep_report.empty()) {
    auto out = open_out(m.sweep_report, "sweep report");
    out << eval::to_json(points).dump(2) << '\n';
  }
  eval::write_table(ws.out, points);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in) {
  CLI::App app{"Hybrid knowledge-graph and embedding store for threat intelligence", "vkg"};
  app.require_subcommand(1);
  std::string manifest_path = "vkg.json";
  app.add_option("-m,--manifest", manifest_path, "Workspace manifest (JSON)");

  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> dimension, epochs;
  std::optional<std::uint64_t> min_count;
  auto add_training_flags = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Override the training seed");
    sub->add_option("--dim", dimension, "Embedding dimension");
    sub->add_option("--min-count", min_count, "Vocabulary frequency threshold");
    sub->add_option("--epochs", epochs, "Training epochs");
  };

  auto* ingest_cmd = app.add_subcommand("ingest", "Build the graph and token stream from the corpus");
  auto* train_cmd = app.add_subcommand("train", "Train word embeddings on the token stream");
  add_training_flags(train_cmd);
  auto* link_cmd = app.add_subcommand("link", "Attach hasVector links and write the link audit");

  auto* query_cmd = app.add_subcommand("query", "Run a query statement or an interactive session");
  std::string stmt;
  bool repl = false, explain = false;
  auto* stmt_opt = query_cmd->add_option("--stmt", stmt, "Query text");
  query_cmd->add_option("text", stmt, "Query text (same as --stmt)")->excludes(stmt_opt);
  query_cmd->add_flag("--repl", repl, "Read one query per line from stdin");
  query_cmd->add_flag("--explain", explain, "Print the decomposed plan before the results");

  auto* eval_cmd = app.add_subcommand("eval", "Score the similarity backends on the groups file");
  std::size_t k = 10;
  bool no_timing = false;
  eval_cmd->add_option("-k,--topk", k, "Ranking cutoff")->check(CLI::PositiveNumber);
  eval_cmd->add_flag("--no-timing", no_timing, "Skip the timing comparison");

  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate a small grid of training settings");
  sweep_cmd->add_option("-k,--topk", k, "Ranking cutoff")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", seed, "Override the training seed");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "vkg: " << e.what() << '\n';
    return kUserError;
  }

  std::string stage = app.get_subcommands().front()->get_name();
  try {
    Workspace ws{load_manifest(manifest_path), out, err, in};
    vec::TrainingConfig cfg = ws.manifest.training;
    if (auto env = seed_from_env()) cfg.seed = *env;
    if (seed) cfg.seed = *seed;
    if (dimension) cfg.dimension = *dimension;
    if (min_count) cfg.min_count = *min_count;
    if (epochs) cfg.epochs = *epochs;

    if (*ingest_cmd) cmd_ingest(ws);
    else if (*train_cmd) cmd_train(ws, cfg);
    else if (*link_cmd) cmd_link(ws);
    else if (*query_cmd) return cmd_query(ws, stmt, repl, explain);
    else if (*eval_cmd) cmd_eval(ws, k, !no_timing);
    else if (*sweep_cmd) cmd_sweep(ws, cfg, k);
    return kOk;
  } catch (const Error& e) {
    err << "vkg " << stage << ": " << e.what() << '\n';
    return kUserError;
  } catch (const std::exception& e) {
    err << "vkg " << stage << ": internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace vkg::cli
