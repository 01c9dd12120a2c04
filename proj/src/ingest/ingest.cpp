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

#include "vkg/ingest/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>

#include "json.hpp"

#include "vkg/error.hpp"
#include "vkg/text.hpp"

namespace vkg::ingest {

std::string_view to_string(Source s) noexcept {
  switch (s) {
    case Source::Nvd: return "nvd";
    case Source::Social: return "social";
    case Source::Blog: return "blog";
    case Source::Market: return "market";
    case Source::Fixture: return "fixture";
  }
  return "fixture";
}

Source parse_source(std::string_view s) {
  for (Source src : {Source::Nvd, Source::Social, Source::Blog, Source::Market, Source::Fixture})
    if (text::iequals(to_string(src), s)) return src;
  throw Error(ErrorCode::InvalidArgument, "unknown document source '" + std::string(s) + "'");
}

std::vector<Document> read_documents(std::istream& in) {
  std::vector<Document> docs;
  std::set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    Document doc;
    try {
      auto j = nlohmann::json::parse(line);
      doc.id = j.at("id").get<std::string>();
      doc.source = parse_source(j.value("source", std::string("fixture")));
      doc.text = j.at("text").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedInput, "corpus line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!ids.insert(doc.id).second)
      throw Error(ErrorCode::DuplicateDocument, "document id '" + doc.id + "' appears twice");
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '_') {
      cur.push_back(static_cast<char>(std::tolower(u)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

void Gazetteer::add(std::string_view surface, std::string_view entity, std::string_view cls,
                    const kg::Schema* schema) {
  auto tokens = tokenize(surface);
  std::string id = text::normalize_entity(entity);
  if (tokens.empty() || id.empty())
    throw Error(ErrorCode::InvalidArgument, "empty gazetteer surface form or entity");
  if (schema && !schema->has_class(cls))
    throw Error(ErrorCode::UnknownClass, "gazetteer class '" + std::string(cls) + "' is not declared");
  max_length_ = std::max(max_length_, tokens.size());
  classes_[id].insert(std::string(cls));
  entries_.insert_or_assign(std::move(tokens), GazetteerEntry{std::move(id), std::string(cls)});
}

std::optional<std::pair<std::size_t, const GazetteerEntry*>> Gazetteer::longest_match(
    const std::vector<std::string>& tokens, std::size_t pos) const {
  const std::size_t limit = std::min(max_length_, tokens.size() - std::min(pos, tokens.size()));
  std::vector<std::string> key;
  for (std::size_t len = limit; len >= 1; --len) {
    key.assign(tokens.begin() + static_cast<std::ptrdiff_t>(pos),
               tokens.begin() + static_cast<std::ptrdiff_t>(pos + len));
    if (auto it = entries_.find(key); it != entries_.end())
      return std::make_pair(len, &it->second);
  }
  return std::nullopt;
}

std::set<std::string> Gazetteer::classes_of(std::string_view entity) const {
  auto it = classes_.find(entity);
  return it == classes_.end() ? std::set<std::string>{} : it->second;
}

bool Gazetteer::is_entity(std::string_view token) const { return classes_.find(token) != classes_.end(); }

Gazetteer Gazetteer::read_tsv(std::istream& in, const kg::Schema& schema) {
  Gazetteer g;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty() || text::trim(line).front() == '#') continue;
    auto fields = text::split(line, '\t');
    if (fields.size() != 3)
      throw Error(ErrorCode::MalformedInput,
                  "gazetteer line " + std::to_string(lineno) + ": expected 3 tab-separated fields");
    g.add(fields[0], fields[1], text::trim(fields[2]), &schema);
  }
  return g;
}

std::vector<RelationTemplate> read_templates(std::istream& in, const kg::Schema& schema) {
  std::vector<RelationTemplate> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty() || text::trim(line).front() == '#') continue;
    auto fields = text::split(line, '\t');
    if (fields.size() < 3 || fields.size() > 4)
      throw Error(ErrorCode::MalformedInput,
                  "template line " + std::to_string(lineno) + ": expected 3 or 4 tab-separated fields");
    RelationTemplate t{std::string(text::trim(fields[0])), std::string(text::trim(fields[1])),
                       std::string(text::trim(fields[2])), {}};
    for (const auto* c : {&t.subject_class, &t.object_class})
      if (!schema.has_class(*c))
        throw Error(ErrorCode::UnknownClass, "template class '" + *c + "' is not declared");
    if (!schema.has_relation(t.relation) || kg::is_reserved_relation(t.relation))
      throw Error(ErrorCode::UnknownRelation, "template relation '" + t.relation + "' is not declared");
    if (fields.size() == 4)
      for (auto trig : text::split(fields[3], ','))
        for (auto& tok : tokenize(trig)) t.triggers.insert(std::move(tok));
    out.push_back(std::move(t));
  }
  return out;
}

std::set<std::string> read_stopwords(std::istream& in) {
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto view = text::trim(line);
    if (view.empty() || view.front() == '#') continue;
    out.insert(text::to_lower(view));
  }
  return out;
}

std::vector<std::string> preprocess(const Document& doc, const std::set<std::string>& stopwords,
                                    const Gazetteer& gazetteer) {
  const auto raw = tokenize(doc.text);
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < raw.size()) {
    if (auto m = gazetteer.longest_match(raw, pos)) {
      out.push_back(m->second->entity);
      pos += m->first;
      continue;
    }
    if (!stopwords.count(raw[pos])) out.push_back(raw[pos]);
    ++pos;
  }
  return out;
}

std::vector<kg::Triple> extract_triples(const std::vector<std::string>& tokens,
                                        const Gazetteer& gazetteer,
                                        const std::vector<RelationTemplate>& templates,
                                        const kg::Schema& schema) {
  std::set<kg::Triple> out;
  std::map<std::string, std::set<std::string>> by_class;
  const std::string type(kg::kType);
  for (const auto& tok : tokens) {
    for (const auto& cls : gazetteer.classes_of(tok)) {
      out.insert({tok, type, kg::Term::node(cls)});
      // A template on a superclass also fires for subclass instances.
      by_class[cls].insert(tok);
    }
  }
  auto members = [&](const std::string& cls) {
    std::set<std::string> m;
    for (const auto& c : schema.descendants(cls))
      if (auto it = by_class.find(c); it != by_class.end()) m.insert(it->second.begin(), it->second.end());
    return m;
  };
  const std::set<std::string> present(tokens.begin(), tokens.end());
  for (const auto& t : templates) {
    if (!t.triggers.empty() &&
        std::none_of(t.triggers.begin(), t.triggers.end(),
                     [&](const std::string& trig) { return present.count(trig) > 0; }))
      continue;
    for (const auto& s : members(t.subject_class))
      for (const auto& o : members(t.object_class))
        if (s != o) out.insert({s, t.relation, kg::Term::node(o)});
  }
  return {out.begin(), out.end()};
}

BuiltCorpus build_corpus(const std::vector<Document>& docs, const std::set<std::string>& stopwords,
                         const Gazetteer& gazetteer,
                         const std::vector<RelationTemplate>& templates, const kg::Schema& schema) {
  BuiltCorpus out{kg::Graph(schema), {}};
  std::set<std::string> ids;
  out.tokens.reserve(docs.size());
  for (const auto& doc : docs) {
    if (!ids.insert(doc.id).second)
      throw Error(ErrorCode::DuplicateDocument, "document id '" + doc.id + "' appears twice");
    auto tokens = preprocess(doc, stopwords, gazetteer);
    for (auto& t : extract_triples(tokens, gazetteer, templates, schema))
      out.graph.assert_triple(std::move(t));
    out.tokens.push_back(std::move(tokens));
  }
  return out;
}

void write_token_stream(std::ostream& out, const vec::Corpus& corpus) {
  for (const auto& doc : corpus) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (i) out << ' ';
      out << doc[i];
    }
    out << '\n';
  }
}

vec::Corpus read_token_stream(std::istream& in) {
  vec::Corpus corpus;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> doc;
    for (auto tok : text::split_whitespace(line)) doc.emplace_back(tok);
    corpus.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace vkg::ingest
