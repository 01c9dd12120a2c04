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
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vkg/kg/graph.hpp"
#include "vkg/vec/embedding.hpp"

namespace vkg::link {

// hasVector mapping from graph entities to vocabulary tokens. Immutable once
// built; relinking produces a new table.
class LinkTable {
 public:
  LinkTable() = default;
  LinkTable(std::map<std::string, std::string> links, std::set<std::string> unlinked,
            int model_version);

  const std::map<std::string, std::string>& links() const { return links_; }
  const std::set<std::string>& unlinked() const { return unlinked_; }
  int model_version() const { return model_version_; }

  std::size_t entity_count() const { return links_.size() + unlinked_.size(); }
  // Linked share of entities; 1.0 for a graph without entities.
  double coverage() const;

  std::optional<std::string> token_for(std::string_view entity) const;
  bool is_linked(std::string_view entity) const { return token_for(entity).has_value(); }
  // Entities linked to `token`, sorted.
  std::vector<std::string> entities_for(std::string_view token) const;

  // `LINKED <entity> <token>` / `UNLINKED <entity>` lines, then `COVERAGE <x>`.
  void write_audit(std::ostream& out) const;

  friend bool operator==(const LinkTable& a, const LinkTable& b) {
    return a.links_ == b.links_ && a.unlinked_ == b.unlinked_ &&
           a.model_version_ == b.model_version_;
  }

 private:
  std::map<std::string, std::string> links_;
  std::set<std::string> unlinked_;
  std::map<std::string, std::vector<std::string>, std::less<>> by_token_;
  int model_version_ = 0;
};

// Links every entity whose normalized id is a vocabulary token, materializes
// the hasVector triples and retracts stale ones. Idempotent.
LinkTable link_all(kg::Graph& graph, const vec::EmbeddingModel& model, int model_version = 1);

struct RelinkReport {
  LinkTable table;
  std::vector<std::string> newly_linked;
  std::vector<std::string> newly_lost;
};

RelinkReport relink(kg::Graph& graph, const vec::EmbeddingModel& new_model, const LinkTable& old);

// Throws Unlinked.
std::span<const double> resolve_vector(const LinkTable& table, const vec::EmbeddingModel& model,
                                       std::string_view entity);

}  // namespace vkg::link
