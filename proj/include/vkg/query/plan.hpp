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
#include <string>
#include <utility>
#include <vector>

#include "vkg/query/ast.hpp"

namespace vkg::query {

// Which half of the hybrid store answers a subquery.
enum class Side { Vector, Graph };

std::string_view to_string(Side side) noexcept;

struct PlanNode {
  std::size_t statement = 0;
  Side side = Side::Vector;
  std::vector<std::size_t> depends_on;
};

// Dependency DAG of a query: SEARCH nodes run on the vector part, LIST and
// INFER on the graph part; an edge (a, b) means b reads a variable bound by a.
struct Plan {
  std::vector<PlanNode> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  // Waves of mutually independent nodes, in dependency order.
  std::vector<std::vector<std::size_t>> stages;

  // True when neither node can reach the other.
  bool parallel_eligible(std::size_t a, std::size_t b) const;
  bool reaches(std::size_t from, std::size_t to) const;

 private:
  friend Plan decompose(const QueryAst& ast);
  std::vector<std::vector<bool>> reach_;
};

Plan decompose(const QueryAst& ast);

}  // namespace vkg::query
