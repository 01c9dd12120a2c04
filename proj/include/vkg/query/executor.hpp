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
#include <string>
#include <string_view>
#include <vector>

#include "vkg/kg/graph.hpp"
#include "vkg/link/link_table.hpp"
#include "vkg/query/ast.hpp"
#include "vkg/query/plan.hpp"
#include "vkg/rules/rules.hpp"
#include "vkg/vec/embedding.hpp"

namespace vkg::query {

struct ResultItem {
  std::string value;
  std::optional<double> score;

  friend bool operator==(const ResultItem&, const ResultItem&) = default;
};

using ResultSet = std::vector<ResultItem>;

// Backend touched by a subquery. Link covers hasVector lookups and the class
// membership filter that VKG search applies to vector candidates.
enum class Backend { Vector, Graph, Link, Rules };

std::string_view to_string(Backend b) noexcept;

struct TraceEvent {
  std::size_t node = 0;
  Backend backend = Backend::Vector;
  std::string operation;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

// Per-node trace sink; events are merged in node order after execution.
class Trace {
 public:
  explicit Trace(std::size_t node = 0) : node_(node) {}
  void record(Backend b, std::string_view op) { events_.push_back({node_, b, std::string(op)}); }
  const std::vector<TraceEvent>& events() const { return events_; }

 private:
  std::size_t node_;
  std::vector<TraceEvent> events_;
};

struct SearchRequest {
  std::string term;
  std::optional<std::string> class_filter;
  std::size_t k = kDefaultTopK;
};

// Knowledge-graph aided similarity search. Candidates come from the vector
// neighborhood of the term in descending cosine order; a candidate token is
// kept iff it is linked to an entity that is an instance of `class_filter`
// (subclasses included), or to any entity when there is no filter. The
// candidate window starts at max(4k, 32) and doubles until k results qualify
// or the vocabulary is exhausted.
//
// When the term's entity has sameAs equivalents with their own links, the
// neighborhoods of all their tokens are unioned, scoring each candidate by
// its best cosine.
//
// Throws OutOfVocabulary, UnknownClass.
ResultSet vkg_search(const SearchRequest& request, const kg::Graph& graph,
                     const vec::EmbeddingModel& model, const link::LinkTable& links,
                     Trace* trace = nullptr);

struct ExecutionContext {
  const kg::Graph& graph;
  const vec::EmbeddingModel& model;
  const link::LinkTable& links;
  const rules::RuleSet& rules;
};

struct ExecutionOptions {
  // Run the nodes of each plan stage on separate threads.
  bool concurrent = true;
};

struct Bindings {
  std::map<std::string, ResultSet> values;
  std::map<std::string, rules::Alert> alerts;
  // Derived triples of every INFER, kept out of the base graph.
  std::vector<kg::Triple> derived;

  friend bool operator==(const Bindings&, const Bindings&) = default;
};

struct ExecutionResult {
  Bindings bindings;
  std::vector<TraceEvent> trace;
};

// Executes every node of `plan`. Failures are rethrown as StatementError
// carrying the statement index. Results do not depend on `concurrent`.
ExecutionResult execute(const QueryAst& ast, const Plan& plan, const ExecutionContext& ctx,
                        const ExecutionOptions& options = {});

// One `var = [item(:score)?, ...]` line per statement, in statement order.
std::string format_bindings(const QueryAst& ast, const Bindings& bindings);

inline constexpr std::string_view kAlertYes = "alert_yes";
inline constexpr std::string_view kAlertNo = "alert_no";

}  // namespace vkg::query
