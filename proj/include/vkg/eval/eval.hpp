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

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "vkg/kg/graph.hpp"
#include "vkg/link/link_table.hpp"
#include "vkg/vec/embedding.hpp"
#include "vkg/vec/sgns.hpp"

namespace vkg::eval {

enum class GroupKind { Vulnerability, Attack, Product };

std::string_view to_string(GroupKind k) noexcept;
// Throws InvalidArgument.
GroupKind parse_group_kind(std::string_view s);
// Class used as the VKG search filter for a group of this kind.
std::string_view class_for(GroupKind k) noexcept;

struct SimilarityGroup {
  std::string name;
  GroupKind kind = GroupKind::Product;
  std::vector<std::string> members;
};

// JSON array of {name, kind, members}. Members are normalized; a group with
// fewer than two distinct members throws InvalidArgument.
std::vector<SimilarityGroup> read_groups(std::istream& in);

// Precision at each relevant rank, summed and divided by |relevant|.
// Throws EmptyRelevantSet, InvalidArgument (duplicate in ranking).
double average_precision(const std::vector<std::string>& ranking,
                         const std::set<std::string>& relevant);

enum class Backend { Graph, Vector, Vkg };
inline constexpr std::array<Backend, 3> kBackends = {Backend::Graph, Backend::Vector, Backend::Vkg};
std::string_view to_string(Backend b) noexcept;

struct EvalInputs {
  const kg::Graph& graph;
  const vec::EmbeddingModel& model;
  const link::LinkTable& links;
};

// Top-k entities by graph similarity to `query`, ties broken by id.
std::vector<std::string> graph_ranking(const kg::Graph& graph, std::string_view query,
                                       std::size_t k);

// The ranking a backend returns for a single member query.
std::vector<std::string> backend_ranking(Backend backend, const EvalInputs& in,
                                         const SimilarityGroup& group, std::string_view query,
                                         std::size_t k);

// Whether `token` can be ranked (and can rank) under this backend.
bool in_universe(Backend backend, const EvalInputs& in, std::string_view token);

struct GroupScore {
  double ap = 0.0;
  std::size_t queries = 0;
  std::vector<std::string> skipped;
};

struct BackendReport {
  Backend backend = Backend::Graph;
  // One entry per input group, same order.
  std::vector<GroupScore> groups;
  double map = 0.0;
};

// Every member is used as a query, relevant = the other members in the
// backend's universe. Members outside the universe are skipped and recorded.
// A group with no scorable query contributes AP 0.
BackendReport evaluate_backend(Backend backend, const std::vector<SimilarityGroup>& groups,
                               const EvalInputs& in, std::size_t k = 10);

struct TimingReport {
  double graph_ms = 0.0;
  double vector_ms = 0.0;
  std::size_t runs = 0;
  // Set when both medians fall below the measurement floor.
  bool below_floor = false;
  double ratio() const;
};

inline constexpr double kTimingFloorMs = 1.0;

// Median wall time of ranking every group member with each side over the
// same universe, after one discarded warm-up run. Sequential by design.
TimingReport timing_comparison(const std::vector<SimilarityGroup>& groups, const EvalInputs& in,
                               std::size_t k = 10, std::size_t runs = 5,
                               std::size_t repeats = 10);

struct EvalReport {
  std::vector<std::string> group_names;
  std::vector<BackendReport> backends;
  // Per-group best-backend counts; a tie splits the group evenly.
  std::map<Backend, double> wins;
  std::optional<TimingReport> timing;
  double coverage = 0.0;
  std::size_t k = 10;

  const BackendReport& report(Backend b) const;
};

std::map<Backend, double> count_wins(const std::vector<BackendReport>& reports);

EvalReport evaluate_all(const std::vector<SimilarityGroup>& groups, const EvalInputs& in,
                        std::size_t k = 10, bool with_timing = true);

nlohmann::json to_json(const EvalReport& report);
void write_table(std::ostream& out, const EvalReport& report);

struct SweepPoint {
  std::size_t dimension = 0;
  std::uint64_t min_count = 0;
  double coverage = 0.0;
  std::map<Backend, double> map;
};

// Trains and evaluates one model per (dimension, min_count) pair; the base
// graph is copied for every point so links never leak between points.
std::vector<SweepPoint> sweep(const vec::Corpus& corpus, const kg::Graph& graph,
                              const std::vector<SimilarityGroup>& groups,
                              const vec::TrainingConfig& base,
                              const std::vector<std::size_t>& dimensions = {16, 32, 64},
                              const std::vector<std::uint64_t>& min_counts = {1, 2, 5},
                              std::size_t k = 10);

nlohmann::json to_json(const std::vector<SweepPoint>& points);
void write_table(std::ostream& out, const std::vector<SweepPoint>& points);

}  // namespace vkg::eval
