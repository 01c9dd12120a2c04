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

#include <algorithm>
#include <map>
#include <set>

#include "vkg/error.hpp"
#include "vkg/query/executor.hpp"

namespace vkg::query {

namespace {

struct Candidate {
  std::string entity;
  double score;
};

bool candidate_before(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.entity < b.entity;
}

}  // namespace

ResultSet vkg_search(const SearchRequest& request, const kg::Graph& graph,
                     const vec::EmbeddingModel& model, const link::LinkTable& links,
                     Trace* trace) {
  auto record = [trace](Backend b, std::string_view op) {
    if (trace) trace->record(b, op);
  };
  if (!model.contains(request.term))
    throw Error(ErrorCode::OutOfVocabulary, "'" + request.term + "' is not in the vocabulary");

  std::optional<std::set<std::string>> allowed;
  if (request.class_filter) {
    record(Backend::Link, "class_filter");
    allowed = graph.instances_of(*request.class_filter);
  }
  if (request.k == 0) return {};

  // The term's own token plus the tokens of its sameAs equivalents.
  record(Backend::Link, "resolve_term");
  std::set<std::string> query_tokens{request.term};
  for (const auto& entity : links.entities_for(request.term))
    for (const auto& eq : graph.equivalents(entity))
      if (auto tok = links.token_for(eq); tok && model.contains(*tok)) query_tokens.insert(*tok);
  std::vector<std::size_t> exclude;
  for (const auto& t : query_tokens) exclude.push_back(*model.index_of(t));

  auto qualifying = [&](const std::string& token) {
    std::vector<std::string> out;
    for (auto& e : links.entities_for(token))
      if (!allowed || allowed->count(e)) out.push_back(std::move(e));
    return out;
  };

  std::map<std::string, double> best;
  const std::size_t universe = model.size() - exclude.size();
  for (const auto& qt : query_tokens) {
    auto query_row = model.vector_of(qt);
    std::size_t window = std::max<std::size_t>(4 * request.k, 32);
    std::vector<Candidate> found;
    while (true) {
      record(Backend::Vector, "top_k");
      auto neighbors = model.top_k(query_row, window, exclude);
      record(Backend::Link, "filter");
      found.clear();
      for (const auto& nb : neighbors)
        for (auto& e : qualifying(nb.token)) found.push_back({std::move(e), nb.score});
      if (found.size() >= request.k || neighbors.size() >= universe) break;
      window *= 2;
    }
    for (const auto& c : found) {
      auto [it, inserted] = best.emplace(c.entity, c.score);
      if (!inserted) it->second = std::max(it->second, c.score);
    }
  }

  std::vector<Candidate> merged;
  merged.reserve(best.size());
  for (const auto& [e, s] : best) merged.push_back({e, s});
  std::sort(merged.begin(), merged.end(), candidate_before);
  if (merged.size() > request.k) merged.resize(request.k);
  ResultSet out;
  out.reserve(merged.size());
  for (auto& c : merged) out.push_back({std::move(c.entity), c.score});
  return out;
}

}  // namespace vkg::query
