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

#include "vkg/eval/eval.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <istream>
#include <numeric>
#include <ostream>

#include "vkg/error.hpp"
#include "vkg/query/executor.hpp"
#include "vkg/text.hpp"

namespace vkg::eval {

std::string_view to_string(GroupKind k) noexcept {
  switch (k) {
    case GroupKind::Vulnerability: return "vulnerability";
    case GroupKind::Attack: return "attack";
    case GroupKind::Product: return "product";
  }
  return "product";
}

GroupKind parse_group_kind(std::string_view s) {
  for (GroupKind k : {GroupKind::Vulnerability, GroupKind::Attack, GroupKind::Product})
    if (text::iequals(to_string(k), s)) return k;
  throw Error(ErrorCode::InvalidArgument, "unknown group kind '" + std::string(s) + "'");
}

std::string_view class_for(GroupKind k) noexcept {
  switch (k) {
    case GroupKind::Vulnerability: return "Vulnerability";
    case GroupKind::Attack: return "Attack";
    case GroupKind::Product: return "Product";
  }
  return "Product";
}

std::vector<SimilarityGroup> read_groups(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedInput, std::string("groups file: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::MalformedInput, "groups file must hold a JSON array");
  std::vector<SimilarityGroup> groups;
  for (const auto& item : doc) {
    SimilarityGroup g;
    try {
      g.name = item.at("name").get<std::string>();
      g.kind = parse_group_kind(item.at("kind").get<std::string>());
      std::set<std::string> seen;
      for (const auto& m : item.at("members")) {
        auto id = text::normalize_entity(m.get<std::string>());
        if (seen.insert(id).second) g.members.push_back(std::move(id));
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedInput, std::string("groups file: ") + e.what());
    }
    if (g.members.size() < 2)
      throw Error(ErrorCode::InvalidArgument, "group '" + g.name + "' needs at least two members");
    groups.push_back(std::move(g));
  }
  return groups;
}

double average_precision(const std::vector<std::string>& ranking,
                         const std::set<std::string>& relevant) {
  if (relevant.empty()) throw Error(ErrorCode::EmptyRelevantSet, "relevant set is empty");
  std::set<std::string_view> seen;
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < ranking.size(); ++r) {
    if (!seen.insert(ranking[r]).second)
      throw Error(ErrorCode::InvalidArgument, "ranking repeats '" + ranking[r] + "'");
    if (relevant.count(ranking[r])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
  }
  return sum / static_cast<double>(relevant.size());
}

std::string_view to_string(Backend b) noexcept {
  switch (b) {
    case Backend::Graph: return "graph";
    case Backend::Vector: return "vector";
    case Backend::Vkg: return "vkg";
  }
  return "graph";
}

std::vector<std::string> graph_ranking(const kg::Graph& graph, std::string_view query,
                                       std::size_t k) {
  struct Scored {
    double score;
    std::string id;
  };
  const std::string self = graph.canonical(query);
  std::vector<Scored> scored;
  for (const auto& e : graph.entities()) {
    if (graph.canonical(e) == self) continue;
    scored.push_back({graph.similarity(query, e), e});
  }
  auto before = [](const Scored& a, const Scored& b) {
    return a.score != b.score ? a.score > b.score : a.id < b.id;
  };
  const std::size_t n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(),
                    before);
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::move(scored[i].id));
  return out;
}

std::vector<std::string> backend_ranking(Backend backend, const EvalInputs& in,
                                         const SimilarityGroup& group, std::string_view query,
                                         std::size_t k) {
  std::vector<std::string> out;
  switch (backend) {
    case Backend::Graph:
      return graph_ranking(in.graph, query, k);
    case Backend::Vector:
      for (auto& n : in.model.top_k(query, k)) out.push_back(std::move(n.token));
      return out;
    case Backend::Vkg: {
      query::SearchRequest req{std::string(query), std::string(class_for(group.kind)), k};
      for (auto& item : query::vkg_search(req, in.graph, in.model, in.links))
        out.push_back(std::move(item.value));
      return out;
    }
  }
  return out;
}

bool in_universe(Backend backend, const EvalInputs& in, std::string_view token) {
  switch (backend) {
    case Backend::Graph: return in.graph.has_entity(token);
    case Backend::Vector: return in.model.contains(token);
    case Backend::Vkg: return in.model.contains(token) && in.links.is_linked(token);
  }
  return false;
}

BackendReport evaluate_backend(Backend backend, const std::vector<SimilarityGroup>& groups,
                               const EvalInputs& in, std::size_t k) {
  BackendReport report;
  report.backend = backend;
  for (const auto& g : groups) {
    GroupScore score;
    std::set<std::string> present;
    for (const auto& m : g.members) {
      if (in_universe(backend, in, m))
        present.insert(m);
      else
        score.skipped.push_back(m);
    }
    double sum = 0.0;
    for (const auto& q : present) {
      std::set<std::string> relevant = present;
      relevant.erase(q);
      if (relevant.empty()) continue;
      sum += average_precision(backend_ranking(backend, in, g, q, k), relevant);
      ++score.queries;
    }
    score.ap = score.queries ? sum / static_cast<double>(score.queries) : 0.0;
    report.groups.push_back(std::move(score));
  }
  if (!report.groups.empty()) {
    double total = 0.0;
    for (const auto& s : report.groups) total += s.ap;
    report.map = total / static_cast<double>(report.groups.size());
  }
  return report;
}

double TimingReport::ratio() const {
  if (vector_ms <= 0.0) return graph_ms > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  return graph_ms / vector_ms;
}

namespace {

template <class F>
double median_ms(F&& body, std::size_t runs) {
  using clock = std::chrono::steady_clock;
  body();  // warm-up, discarded
  std::vector<double> samples;
  samples.reserve(runs);
  for (std::size_t r = 0; r < runs; ++r) {
    auto t0 = clock::now();
    body();
    samples.push_back(std::chrono::duration<double, std::milli>(clock::now() - t0).count());
  }
  std::sort(samples.begin(), samples.end());
  const std::size_t mid = samples.size() / 2;
  return samples.size() % 2 ? samples[mid] : 0.5 * (samples[mid - 1] + samples[mid]);
}

}  // namespace

TimingReport timing_comparison(const std::vector<SimilarityGroup>& groups, const EvalInputs& in,
                               std::size_t k, std::size_t runs, std::size_t repeats) {
  if (runs < 5) throw Error(ErrorCode::InvalidArgument, "timing needs at least 5 runs");
  // Both sides rank the same queries: members known to the graph and to the
  // model alike.
  std::vector<std::string> queries;
  for (const auto& g : groups)
    for (const auto& m : g.members)
      if (in.graph.has_entity(m) && in.model.contains(m)) queries.push_back(m);

  std::size_t sink = 0;
  TimingReport t;
  t.runs = runs;
  t.graph_ms = median_ms(
      [&] {
        for (std::size_t r = 0; r < repeats; ++r)
          for (const auto& q : queries) sink += graph_ranking(in.graph, q, k).size();
      },
      runs);
  t.vector_ms = median_ms(
      [&] {
        for (std::size_t r = 0; r < repeats; ++r)
          for (const auto& q : queries) sink += in.model.top_k(q, k).size();
      },
      runs);
  t.below_floor = std::max(t.graph_ms, t.vector_ms) < kTimingFloorMs;
  // Keeps the loops observable to the optimizer.
  if (sink == static_cast<std::size_t>(-1)) t.runs = 0;
  return t;
}

const BackendReport& EvalReport::report(Backend b) const {
  for (const auto& r : backends)
    if (r.backend == b) return r;
  throw Error(ErrorCode::InvalidArgument, "backend not evaluated: " + std::string(to_string(b)));
}

std::map<Backend, double> count_wins(const std::vector<BackendReport>& reports) {
  std::map<Backend, double> wins;
  for (const auto& r : reports) wins[r.backend] = 0.0;
  if (reports.empty()) return wins;
  const std::size_t n = reports.front().groups.size();
  for (std::size_t g = 0; g < n; ++g) {
    double best = -1.0;
    for (const auto& r : reports) best = std::max(best, r.groups.at(g).ap);
    std::vector<Backend> tied;
    for (const auto& r : reports)
      if (r.groups.at(g).ap == best) tied.push_back(r.backend);
    for (Backend b : tied) wins[b] += 1.0 / static_cast<double>(tied.size());
  }
  return wins;
}

EvalReport evaluate_all(const std::vector<SimilarityGroup>& groups, const EvalInputs& in,
                        std::size_t k, bool with_timing) {
  EvalReport report;
  report.k = k;
  for (const auto& g : groups) report.group_names.push_back(g.name);
  for (Backend b : kBackends) report.backends.push_back(evaluate_backend(b, groups, in, k));
  report.wins = count_wins(report.backends);
  if (with_timing) report.timing = timing_comparison(groups, in, k);
  report.coverage = in.links.coverage();
  return report;
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json j;
  j["k"] = report.k;
  j["coverage"] = report.coverage;
  j["map"] = nlohmann::json::object();
  j["wins"] = nlohmann::json::object();
  for (const auto& r : report.backends) {
    j["map"][std::string(to_string(r.backend))] = r.map;
    j["wins"][std::string(to_string(r.backend))] = report.wins.at(r.backend);
  }
  j["groups"] = nlohmann::json::array();
  for (std::size_t g = 0; g < report.group_names.size(); ++g) {
    nlohmann::json row{{"name", report.group_names[g]}};
    for (const auto& r : report.backends) {
      const auto& s = r.groups[g];
      row["ap"][std::string(to_string(r.backend))] = s.ap;
      if (!s.skipped.empty()) row["skipped"][std::string(to_string(r.backend))] = s.skipped;
    }
    j["groups"].push_back(std::move(row));
  }
  if (report.timing) {
    const auto& t = *report.timing;
    j["timing"] = {{"graph_ms", t.graph_ms},   {"vector_ms", t.vector_ms}, {"ratio", t.ratio()},
                   {"runs", t.runs},           {"below_floor", t.below_floor}};
  }
  return j;
}

void write_table(std::ostream& out, const EvalReport& report) {
  out << "group";
  for (const auto& r : report.backends) out << '\t' << to_string(r.backend);
  out << '\n';
  for (std::size_t g = 0; g < report.group_names.size(); ++g) {
    out << report.group_names[g];
    for (const auto& r : report.backends) out << '\t' << text::format_fixed(r.groups[g].ap, 4);
    out << '\n';
  }
  out << "MAP";
  for (const auto& r : report.backends) out << '\t' << text::format_fixed(r.map, 4);
  out << "\nwins";
  for (const auto& r : report.backends) out << '\t' << text::format_fixed(report.wins.at(r.backend), 1);
  out << '\n';
  out << "coverage\t" << text::format_fixed(report.coverage, 4) << '\n';
  if (report.timing) {
    const auto& t = *report.timing;
    out << "timing_ms\tgraph=" << text::format_fixed(t.graph_ms, 3)
        << "\tvector=" << text::format_fixed(t.vector_ms, 3)
        << "\tratio=" << text::format_fixed(t.ratio(), 2) << (t.below_floor ? "\t(below floor)" : "")
        << '\n';
  }
}

std::vector<SweepPoint> sweep(const vec::Corpus& corpus, const kg::Graph& graph,
                              const std::vector<SimilarityGroup>& groups,
                              const vec::TrainingConfig& base,
                              const std::vector<std::size_t>& dimensions,
                              const std::vector<std::uint64_t>& min_counts, std::size_t k) {
  std::vector<SweepPoint> points;
  for (std::size_t d : dimensions) {
    for (std::uint64_t mc : min_counts) {
      vec::TrainingConfig cfg = base;
      cfg.dimension = d;
      cfg.min_count = mc;
      SweepPoint p{d, mc, 0.0, {}};
      kg::Graph g = graph;
      auto model = vec::train(corpus, cfg);
      auto links = link::link_all(g, model);
      p.coverage = links.coverage();
      EvalInputs in{g, model, links};
      for (Backend b : kBackends) p.map[b] = evaluate_backend(b, groups, in, k).map;
      points.push_back(std::move(p));
    }
  }
  return points;
}

nlohmann::json to_json(const std::vector<SweepPoint>& points) {
  auto arr = nlohmann::json::array();
  for (const auto& p : points) {
    nlohmann::json row{{"dimension", p.dimension}, {"min_count", p.min_count}, {"coverage", p.coverage}};
    for (const auto& [b, v] : p.map) row["map"][std::string(to_string(b))] = v;
    arr.push_back(std::move(row));
  }
  return arr;
}

void write_table(std::ostream& out, const std::vector<SweepPoint>& points) {
  out << "dimension\tmin_count\tcoverage";
  for (Backend b : kBackends) out << '\t' << to_string(b);
  out << '\n';
  for (const auto& p : points) {
    out << p.dimension << '\t' << p.min_count << '\t' << text::format_fixed(p.coverage, 4);
    for (Backend b : kBackends) out << '\t' << text::format_fixed(p.map.at(b), 4);
    out << '\n';
  }
}

}  // namespace vkg::eval
