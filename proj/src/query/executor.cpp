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

#include <exception>
#include <future>
#include <set>

#include "vkg/error.hpp"
#include "vkg/query/executor.hpp"
#include "vkg/text.hpp"

namespace vkg::query {

namespace {

struct NodeOutput {
  ResultSet values;
  std::optional<rules::Alert> alert;
  std::vector<kg::Triple> derived;
  std::vector<TraceEvent> trace;
};

class NodeRunner {
 public:
  NodeRunner(const QueryAst& ast, const ExecutionContext& ctx,
             const std::map<std::string, ResultSet>& bound)
      : ast_(ast), ctx_(ctx), bound_(bound) {}

  NodeOutput run(std::size_t index) const {
    Trace trace(index);
    NodeOutput out;
    const Statement& stmt = ast_.statements.at(index);
    if (const auto* s = std::get_if<SearchStmt>(&stmt)) {
      out.values = vkg_search({s->term, s->class_filter, s->k}, ctx_.graph, ctx_.model, ctx_.links,
                              &trace);
    } else if (const auto* l = std::get_if<ListStmt>(&stmt)) {
      out.values = list(*l, trace);
    } else {
      infer(std::get<InferStmt>(stmt), trace, out);
    }
    out.trace = trace.events();
    return out;
  }

 private:
  const ResultSet& lookup(const std::string& var) const {
    auto it = bound_.find(var);
    if (it == bound_.end()) throw Error(ErrorCode::UndefinedVariable, "variable " + var + " is not bound");
    return it->second;
  }

  ResultSet list(const ListStmt& l, Trace& trace) const {
    auto relation = ctx_.graph.schema().resolve_relation(l.relation);
    if (!relation)
      throw Error(ErrorCode::UnknownRelation, "unknown relation keyword " + l.relation);
    std::vector<std::string> sources;
    if (l.source.kind == ListSource::Kind::Entity) {
      sources.push_back(l.source.name);
    } else {
      for (const auto& item : lookup(l.source.name)) sources.push_back(item.value);
    }
    std::set<std::string> objects;
    for (const auto& src : sources) {
      trace.record(Backend::Graph, "match");
      for (const auto& t : ctx_.graph.match({src, *relation, std::nullopt})) objects.insert(t.object.text);
    }
    ResultSet out;
    for (const auto& o : objects) out.push_back({o, std::nullopt});
    return out;
  }

  void infer(const InferStmt& i, Trace& trace, NodeOutput& out) const {
    const rules::Rule* rule = ctx_.rules.find(i.rule);
    if (!rule) throw Error(ErrorCode::UnknownRule, "rule " + i.rule + " is not defined");
    rules::RuleInputs inputs;
    for (const auto& var : i.inputs) {
      std::set<std::string> members;
      for (const auto& item : lookup(var)) members.insert(item.value);
      inputs.args.push_back(std::move(members));
    }
    inputs.context = i.context;
    trace.record(Backend::Rules, "evaluate");
    rules::Evaluation ev = rules::evaluate(*rule, inputs, ctx_.graph);
    out.values.push_back({std::string(ev.alert.verdict ? kAlertYes : kAlertNo), std::nullopt});
    out.alert = std::move(ev.alert);
    out.derived = std::move(ev.derived);
  }

  const QueryAst& ast_;
  const ExecutionContext& ctx_;
  const std::map<std::string, ResultSet>& bound_;
};

}  // namespace

std::string_view to_string(Backend b) noexcept {
  switch (b) {
    case Backend::Vector: return "vector";
    case Backend::Graph: return "graph";
    case Backend::Link: return "link";
    case Backend::Rules: return "rules";
  }
  return "?";
}

ExecutionResult execute(const QueryAst& ast, const Plan& plan, const ExecutionContext& ctx,
                        const ExecutionOptions& options) {
  if (plan.nodes.size() != ast.statements.size())
    throw Error(ErrorCode::InvalidArgument, "plan does not belong to this query");

  std::map<std::string, ResultSet> bound;
  std::vector<std::optional<NodeOutput>> outputs(ast.statements.size());
  NodeRunner runner(ast, ctx, bound);

  auto run_guarded = [&](std::size_t node) {
    try {
      return runner.run(node);
    } catch (const Error& e) {
      throw StatementError(e, node);
    }
  };
  auto publish = [&](std::size_t node) {
    bound[out_var(ast.statements[node])] = outputs[node]->values;
  };

  if (options.concurrent) {
    // Stage members only read bindings published by earlier stages.
    for (const auto& stage : plan.stages) {
      if (stage.size() == 1) {
        outputs[stage[0]] = run_guarded(stage[0]);
      } else {
        std::vector<std::future<NodeOutput>> futures;
        futures.reserve(stage.size());
        for (std::size_t node : stage)
          futures.push_back(std::async(std::launch::async, run_guarded, node));
        std::exception_ptr first_error;
        for (std::size_t k = 0; k < stage.size(); ++k) {
          try {
            outputs[stage[k]] = futures[k].get();
          } catch (...) {
            if (!first_error) first_error = std::current_exception();
          }
        }
        if (first_error) std::rethrow_exception(first_error);
      }
      for (std::size_t node : stage) publish(node);
    }
  } else {
    for (std::size_t node = 0; node < ast.statements.size(); ++node) {
      outputs[node] = run_guarded(node);
      publish(node);
    }
  }

  ExecutionResult result;
  result.bindings.values = std::move(bound);
  for (std::size_t node = 0; node < outputs.size(); ++node) {
    NodeOutput& out = *outputs[node];
    const std::string& var = out_var(ast.statements[node]);
    if (out.alert) result.bindings.alerts.emplace(var, std::move(*out.alert));
    result.bindings.derived.insert(result.bindings.derived.end(), out.derived.begin(),
                                   out.derived.end());
    result.trace.insert(result.trace.end(), out.trace.begin(), out.trace.end());
  }
  return result;
}

std::string format_bindings(const QueryAst& ast, const Bindings& bindings) {
  std::string out;
  for (const auto& stmt : ast.statements) {
    const std::string& var = out_var(stmt);
    out += var + " = [";
    auto it = bindings.values.find(var);
    if (it != bindings.values.end()) {
      bool first = true;
      for (const auto& item : it->second) {
        if (!first) out += ", ";
        first = false;
        out += item.value;
        if (item.score) out += ":" + text::format_fixed(*item.score, 6);
      }
    }
    out += "]\n";
  }
  return out;
}

}  // namespace vkg::query
