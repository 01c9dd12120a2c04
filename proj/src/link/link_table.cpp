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

#include "vkg/link/link_table.hpp"

#include <algorithm>
#include <ostream>

#include "vkg/error.hpp"
#include "vkg/text.hpp"

namespace vkg::link {

LinkTable::LinkTable(std::map<std::string, std::string> links, std::set<std::string> unlinked,
                     int model_version)
    : links_(std::move(links)), unlinked_(std::move(unlinked)), model_version_(model_version) {
  for (const auto& [entity, token] : links_) {
    if (unlinked_.count(entity))
      throw Error(ErrorCode::InvalidArgument, "entity '" + entity + "' is both linked and unlinked");
    by_token_[token].push_back(entity);
  }
}

double LinkTable::coverage() const {
  if (entity_count() == 0) return 1.0;
  return static_cast<double>(links_.size()) / static_cast<double>(entity_count());
}

std::optional<std::string> LinkTable::token_for(std::string_view entity) const {
  auto it = links_.find(std::string(entity));
  if (it == links_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> LinkTable::entities_for(std::string_view token) const {
  auto it = by_token_.find(token);
  if (it == by_token_.end()) return {};
  return it->second;
}

void LinkTable::write_audit(std::ostream& out) const {
  // Entities in sorted order regardless of link state.
  auto li = links_.begin();
  auto ui = unlinked_.begin();
  while (li != links_.end() || ui != unlinked_.end()) {
    if (ui == unlinked_.end() || (li != links_.end() && li->first < *ui)) {
      out << "LINKED " << li->first << ' ' << li->second << '\n';
      ++li;
    } else {
      out << "UNLINKED " << *ui << '\n';
      ++ui;
    }
  }
  out << "COVERAGE " << text::format_fixed(coverage(), 6) << '\n';
}

LinkTable link_all(kg::Graph& graph, const vec::EmbeddingModel& model, int model_version) {
  std::map<std::string, std::string> links;
  std::set<std::string> unlinked;
  for (const auto& entity : graph.entities()) {
    std::string token = text::normalize_entity(entity);
    if (model.contains(token)) {
      links.emplace(entity, std::move(token));
    } else {
      unlinked.insert(entity);
    }
  }
  const std::string has_vector(kg::kHasVector);
  for (const kg::Triple& t : graph.match_exact({std::nullopt, has_vector, std::nullopt})) {
    auto it = links.find(t.subject);
    if (it == links.end() || it->second != t.object.text) graph.retract(t);
  }
  for (const auto& [entity, token] : links)
    graph.assert_triple({entity, has_vector, kg::Term::literal(token)});
  return LinkTable(std::move(links), std::move(unlinked), model_version);
}

RelinkReport relink(kg::Graph& graph, const vec::EmbeddingModel& new_model, const LinkTable& old) {
  RelinkReport report{link_all(graph, new_model, old.model_version() + 1), {}, {}};
  for (const auto& [entity, token] : report.table.links())
    if (!old.is_linked(entity)) report.newly_linked.push_back(entity);
  for (const auto& [entity, token] : old.links())
    if (!report.table.is_linked(entity)) report.newly_lost.push_back(entity);
  return report;
}

std::span<const double> resolve_vector(const LinkTable& table, const vec::EmbeddingModel& model,
                                       std::string_view entity) {
  auto token = table.token_for(entity);
  if (!token) throw Error(ErrorCode::Unlinked, "entity '" + std::string(entity) + "' has no vector link");
  return model.vector_of(*token);
}

}  // namespace vkg::link
