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

#include "vkg/query/plan.hpp"

#include <algorithm>
#include <map>

#include "vkg/error.hpp"

namespace vkg::query {

std::string_view to_string(Side side) noexcept { return side == Side::Vector ? "Qv" : "Qkg"; }

bool Plan::reaches(std::size_t from, std::size_t to) const { return reach_.at(from).at(to); }

bool Plan::parallel_eligible(std::size_t a, std::size_t b) const {
  return a != b && !reaches(a, b) && !reaches(b, a);
}

Plan decompose(const QueryAst& ast) {
  Plan plan;
  const std::size_t n = ast.statements.size();
  std::map<std::string, std::size_t> producer;
  std::vector<std::size_t> level(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const Statement& s = ast.statements[i];
    PlanNode node;
    node.statement = i;
    node.side = std::holds_alternative<SearchStmt>(s) ? Side::Vector : Side::Graph;
    for (const auto& v : input_vars(s)) {
      auto it = producer.find(v);
      if (it == producer.end())
        throw Error(ErrorCode::UndefinedVariable, "variable " + v + " is not bound");
      const std::size_t from = it->second;
      if (std::find(node.depends_on.begin(), node.depends_on.end(), from) != node.depends_on.end())
        continue;
      node.depends_on.push_back(from);
      plan.edges.emplace_back(from, i);
      level[i] = std::max(level[i], level[from] + 1);
    }
    producer[out_var(s)] = i;
    plan.nodes.push_back(std::move(node));
  }

  plan.reach_.assign(n, std::vector<bool>(n, false));
  // Statements only read earlier bindings, so source order is topological.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t dep : plan.nodes[i].depends_on) {
      plan.reach_[dep][i] = true;
      for (std::size_t k = 0; k < n; ++k)
        if (plan.reach_[k][dep]) plan.reach_[k][i] = true;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (plan.stages.size() <= level[i]) plan.stages.resize(level[i] + 1);
    plan.stages[level[i]].push_back(i);
  }
  return plan;
}

}  // namespace vkg::query
