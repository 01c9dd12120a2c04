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


#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "vkg/cli/cli.hpp"
#include "vkg/error.hpp"
#include "vkg/eval/eval.hpp"
#include "vkg/kg/graph.hpp"
#include "vkg/kg/schema.hpp"
#include "vkg/link/link_table.hpp"
#include "vkg/query/ast.hpp"
#include "vkg/query/executor.hpp"
#include "vkg/query/plan.hpp"
#include "vkg/rules/rules.hpp"
#include "vkg/vec/embedding.hpp"
#include "vkg/vec/sgns.hpp"

namespace py = pybind11;
namespace fs = std::filesystem;

namespace {

using Scored = std::vector<std::pair<std::string, double>>;

Scored to_pairs(const std::vector<vkg::vec::Neighbor>& ns) {
  Scored out;
  for (const auto& n : ns) out.emplace_back(n.token, n.score);
  return out;
}

// Graph, model, links and rules loaded from a manifest whose ingest, train
// and link stages have already run.
class Session {
 public:
  explicit Session(const fs::path& manifest) {
    auto m = vkg::cli::load_manifest(manifest);
    auto schema = vkg::kg::Schema::load(m.schema.string());
    std::ifstream g(m.graph);
    if (!g) throw vkg::Error(vkg::ErrorCode::MissingArtifact, "missing graph " + m.graph.string());
    graph_ = vkg::kg::Graph::load(g, std::move(schema));
    model_ = vkg::vec::EmbeddingModel::load_text(m.model.string());
    links_ = vkg::link::link_all(graph_, model_);
    rules_ = vkg::rules::builtin_rules();
    if (!m.rules.empty()) rules_.merge(vkg::rules::load_rules(m.rules.string()));
  }

  double coverage() const { return links_.coverage(); }

  Scored search(const std::string& term, std::optional<std::string> cls, std::size_t k) const {
    Scored out;
    for (const auto& item : vkg::query::vkg_search({term, std::move(cls), k}, graph_, model_, links_))
      out.emplace_back(item.value, item.score.value_or(0.0));
    return out;
  }

  py::dict query(const std::string& text, bool concurrent) const {
    auto ast = vkg::query::parse(text, {&graph_.schema(), &rules_});
    auto plan = vkg::query::decompose(ast);
    vkg::query::ExecutionContext ctx{graph_, model_, links_, rules_};
    auto result = vkg::query::execute(ast, plan, ctx, {concurrent});
    py::dict out;
    for (const auto& [var, items] : result.bindings.values) {
      py::list l;
      for (const auto& item : items) {
        py::object score = item.score ? py::object(py::float_(*item.score)) : py::object(py::none());
        l.append(py::make_tuple(item.value, score));
      }
      out[py::str(var)] = l;
    }
    return out;
  }

  const vkg::vec::EmbeddingModel& model() const { return model_; }

 private:
  vkg::kg::Graph graph_{vkg::kg::Schema{}};
  vkg::vec::EmbeddingModel model_;
  vkg::link::LinkTable links_;
  vkg::rules::RuleSet rules_;
};

}  // namespace

PYBIND11_MODULE(_vkg, m) {
  m.doc() = "Vector-knowledge-graph search bindings";

  auto error = py::register_exception<vkg::Error>(m, "VkgError", PyExc_RuntimeError);
  (void)error;

  m.def(
      "run",
      [](const std::vector<std::string>& args, const std::string& stdin_text) {
        std::ostringstream out, err;
        std::istringstream in(stdin_text);
        int code = vkg::cli::run(args, out, err, in);
        return std::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), py::arg("stdin") = "",
      "Run the command-line tool in-process; returns (exit_code, stdout, stderr).");

  m.def(
      "average_precision",
      [](const std::vector<std::string>& ranking, const std::set<std::string>& relevant) {
        return vkg::eval::average_precision(ranking, relevant);
      },
      py::arg("ranking"), py::arg("relevant"));

  py::class_<vkg::vec::EmbeddingModel>(m, "Model")
      .def_static("load", py::overload_cast<const std::string&>(&vkg::vec::EmbeddingModel::load_text))
      .def_property_readonly("size", &vkg::vec::EmbeddingModel::size)
      .def_property_readonly("dimension", &vkg::vec::EmbeddingModel::dimension)
      .def("__contains__", [](const vkg::vec::EmbeddingModel& self, const std::string& t) { return self.contains(t); })
      .def("cosine", &vkg::vec::EmbeddingModel::cosine)
      .def(
          "top_k",
          [](const vkg::vec::EmbeddingModel& self, const std::string& t, std::size_t k) {
            return to_pairs(self.top_k(t, k));
          },
          py::arg("token"), py::arg("k"))
      .def("save", py::overload_cast<const std::string&>(&vkg::vec::EmbeddingModel::save_text, py::const_));

  m.def(
      "train",
      [](const std::vector<std::vector<std::string>>& corpus, std::size_t dimension, std::size_t window,
         std::uint64_t min_count, std::size_t epochs, std::uint64_t seed) {
        vkg::vec::TrainingConfig cfg;
        cfg.dimension = dimension;
        cfg.window = window;
        cfg.min_count = min_count;
        cfg.epochs = epochs;
        cfg.seed = seed;
        py::gil_scoped_release release;
        return vkg::vec::train(corpus, cfg);
      },
      py::arg("corpus"), py::arg("dimension") = 32, py::arg("window") = 7, py::arg("min_count") = 1,
      py::arg("epochs") = 5, py::arg("seed") = 1);

  py::class_<Session>(m, "Session")
      .def(py::init<const fs::path&>(), py::arg("manifest"))
      .def_property_readonly("coverage", &Session::coverage)
      .def_property_readonly("model", &Session::model, py::return_value_policy::reference_internal)
      .def("search", &Session::search, py::arg("term"), py::arg("cls") = py::none(), py::arg("k") = 10)
      .def("query", &Session::query, py::arg("text"), py::arg("concurrent") = true);
}
