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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vkg/kg/graph.hpp"
#include "vkg/kg/schema.hpp"
#include "vkg/vec/sgns.hpp"

namespace vkg::ingest {

enum class Source { Nvd, Social, Blog, Market, Fixture };

std::string_view to_string(Source s) noexcept;
// Throws InvalidArgument.
Source parse_source(std::string_view s);

struct Document {
  std::string id;
  Source source = Source::Fixture;
  std::string text;
};

// JSON lines, one {"id", "source", "text"} object per line. Throws
// MalformedInput, DuplicateDocument.
std::vector<Document> read_documents(std::istream& in);

// Lowercased alphanumeric/underscore runs; everything else separates tokens.
std::vector<std::string> tokenize(std::string_view text);

struct GazetteerEntry {
  std::string entity;
  std::string cls;
};

// Surface forms (token sequences) mapped to typed entities. Matching is
// longest-leftmost and non-overlapping.
class Gazetteer {
 public:
  // `surface` is tokenized; `entity` normalized. Throws UnknownClass when a
  // schema is given and does not declare `cls`, InvalidArgument for empty
  // surface forms.
  void add(std::string_view surface, std::string_view entity, std::string_view cls,
           const kg::Schema* schema = nullptr);

  // Longest entry starting at `pos`: (token length, entry).
  std::optional<std::pair<std::size_t, const GazetteerEntry*>> longest_match(
      const std::vector<std::string>& tokens, std::size_t pos) const;

  // Classes recorded for an entity id; empty when unknown.
  std::set<std::string> classes_of(std::string_view entity) const;
  bool is_entity(std::string_view token) const;

  std::size_t size() const { return entries_.size(); }
  std::size_t max_length() const { return max_length_; }
  const std::map<std::vector<std::string>, GazetteerEntry>& entries() const { return entries_; }

  // TSV: surface<TAB>entity<TAB>class.
  static Gazetteer read_tsv(std::istream& in, const kg::Schema& schema);

 private:
  std::map<std::vector<std::string>, GazetteerEntry> entries_;
  std::map<std::string, std::set<std::string>, std::less<>> classes_;
  std::size_t max_length_ = 0;
};

struct RelationTemplate {
  std::string subject_class;
  std::string relation;
  std::string object_class;
  // When non-empty, at least one trigger token must occur in the document.
  std::set<std::string> triggers;
};

// TSV: subject_class<TAB>relation<TAB>object_class[<TAB>trigger,trigger...].
std::vector<RelationTemplate> read_templates(std::istream& in, const kg::Schema& schema);

// One token per line; '#' comments.
std::set<std::string> read_stopwords(std::istream& in);

// Tokenizes, joins gazetteer matches into entity ids (longest match wins,
// left to right), then drops stopwords outside matches.
std::vector<std::string> preprocess(const Document& doc, const std::set<std::string>& stopwords,
                                    const Gazetteer& gazetteer);

// A type triple per entity token plus one relation triple per template whose
// subject and object classes both occur (and a trigger, if declared). Sorted.
std::vector<kg::Triple> extract_triples(const std::vector<std::string>& tokens,
                                        const Gazetteer& gazetteer,
                                        const std::vector<RelationTemplate>& templates,
                                        const kg::Schema& schema);

struct BuiltCorpus {
  kg::Graph graph;
  vec::Corpus tokens;
};

// Document order is preserved in the token stream.
BuiltCorpus build_corpus(const std::vector<Document>& docs, const std::set<std::string>& stopwords,
                         const Gazetteer& gazetteer,
                         const std::vector<RelationTemplate>& templates, const kg::Schema& schema);

// One document per line, tokens separated by single spaces.
void write_token_stream(std::ostream& out, const vec::Corpus& corpus);
vec::Corpus read_token_stream(std::istream& in);

}  // namespace vkg::ingest
