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

#include "vkg/kg/graph.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <ostream>
#include <tuple>

#include "vkg/error.hpp"
#include "vkg/text.hpp"

namespace vkg::kg {

namespace {

void require_entity(std::string_view id, std::string_view position) {
  if (id.empty() || text::has_whitespace(id) || text::normalize_entity(id) != id)
    throw Error(ErrorCode::InvalidTerm, std::string(position) + " '" + std::string(id) +
                                            "' is not a normalized entity id");
}

}  // namespace

std::string to_string(const Triple& t) {
  std::string out = t.subject + " " + t.predicate + " ";
  if (t.object.is_literal()) {
    out.push_back('"');
    for (char c : t.object.text) {
      if (c == '"' || c == '\\') out.push_back('\\');
      if (c == '\n') {
        out += "\\n";
        continue;
      }
      out.push_back(c);
    }
    out.push_back('"');
  } else {
    out += t.object.text;
  }
  out += " .";
  return out;
}

Graph::Graph(Schema schema) : schema_(std::move(schema)) {}

Graph::Graph(const Graph& other)
    : schema_(other.schema_),
      triples_(other.triples_),
      canonical_(other.canonical_),
      members_(other.members_) {
  rebuild_indexes();
}

Graph& Graph::operator=(const Graph& other) {
  if (this != &other) {
    Graph copy(other);
    *this = std::move(copy);
  }
  return *this;
}

void Graph::validate(const Triple& t) const {
  if (!schema_.has_relation(t.predicate))
    throw Error(ErrorCode::UnknownRelation, "relation '" + t.predicate + "' is not declared");
  if (t.predicate == kSubClassOf) {
    for (const auto* c : {&t.subject, &t.object.text}) {
      if (!schema_.has_class(*c))
        throw Error(ErrorCode::UnknownClass, "class '" + *c + "' is not declared");
    }
    if (t.object.is_literal())
      throw Error(ErrorCode::InvalidTerm, "subClassOf object must be a class");
    if (t.subject == t.object.text) throw Error(ErrorCode::SchemaCycle, "class is its own subclass");
    // Would the new edge close a cycle? Walk upward from the parent.
    std::deque<std::string> work{t.object.text};
    std::set<std::string> seen;
    while (!work.empty()) {
      std::string c = std::move(work.front());
      work.pop_front();
      if (c == t.subject)
        throw Error(ErrorCode::SchemaCycle, "subClassOf " + t.subject + " -> " +
                                                t.object.text + " would create a cycle");
      if (!seen.insert(c).second) continue;
      for (const auto& [child, parent] : schema_.subclass_edges())
        if (child == c) work.push_back(parent);
      if (auto it = by_subject_predicate_.find({c, std::string(kSubClassOf)});
          it != by_subject_predicate_.end())
        for (const Triple* e : it->second) work.push_back(e->object.text);
    }
    return;
  }
  require_entity(t.subject, "subject");
  if (t.predicate == kType) {
    if (t.object.is_literal() || !schema_.has_class(t.object.text))
      throw Error(ErrorCode::UnknownClass, "class '" + t.object.text + "' is not declared");
    return;
  }
  if (t.predicate == kHasVector) {
    if (!t.object.is_literal())
      throw Error(ErrorCode::InvalidTerm, "hasVector object must be a literal token");
    return;
  }
  if (t.predicate == kSameAs && t.object.is_literal())
    throw Error(ErrorCode::InvalidTerm, "sameAs object must be an entity");
  if (t.object.is_node()) require_entity(t.object.text, "object");
}

bool Graph::assert_triple(Triple t) {
  validate(t);
  auto [it, inserted] = triples_.insert(std::move(t));
  if (!inserted) return false;
  index(&*it);
  if (it->predicate == kSameAs) union_same_as(it->subject, it->object.text);
  return true;
}

bool Graph::retract(const Triple& t) {
  auto it = triples_.find(t);
  if (it == triples_.end()) return false;
  unindex(&*it);
  bool was_same_as = it->predicate == kSameAs;
  triples_.erase(it);
  if (was_same_as) rebuild_same_as();
  return true;
}

bool Graph::contains(const Triple& t) const { return triples_.count(t) > 0; }

void Graph::index(const Triple* t) {
  by_subject_[t->subject].insert(t);
  by_predicate_[t->predicate].insert(t);
  by_object_[t->object].insert(t);
  by_subject_predicate_[{t->subject, t->predicate}].insert(t);
}

void Graph::unindex(const Triple* t) {
  auto drop = [t](auto& map, const auto& key) {
    auto it = map.find(key);
    if (it == map.end()) return;
    it->second.erase(t);
    if (it->second.empty()) map.erase(it);
  };
  drop(by_subject_, t->subject);
  drop(by_predicate_, t->predicate);
  drop(by_object_, t->object);
  drop(by_subject_predicate_, std::make_pair(t->subject, t->predicate));
}

void Graph::rebuild_indexes() {
  by_subject_.clear();
  by_predicate_.clear();
  by_object_.clear();
  by_subject_predicate_.clear();
  for (const Triple& t : triples_) index(&t);
}

void Graph::union_same_as(const std::string& a, const std::string& b) {
  std::string ca = canonical(a);
  std::string cb = canonical(b);
  if (ca == cb) return;
  std::set<std::string> merged = equivalents(ca);
  merged.merge(equivalents(cb));
  members_.erase(ca);
  members_.erase(cb);
  const std::string& root = *merged.begin();
  for (const auto& m : merged) canonical_[m] = root;
  members_[root] = std::move(merged);
}

void Graph::rebuild_same_as() {
  canonical_.clear();
  members_.clear();
  if (auto it = by_predicate_.find(kSameAs); it != by_predicate_.end())
    for (const Triple* t : it->second) union_same_as(t->subject, t->object.text);
}

std::string Graph::canonical(std::string_view entity) const {
  if (auto it = canonical_.find(entity); it != canonical_.end()) return it->second;
  return std::string(entity);
}

std::set<std::string> Graph::equivalents(std::string_view entity) const {
  if (auto it = canonical_.find(entity); it != canonical_.end())
    return members_.at(it->second);
  return {std::string(entity)};
}

std::vector<Triple> Graph::match_exact(const TriplePattern& p) const {
  auto accept = [&p](const Triple& t) {
    return (!p.subject || t.subject == *p.subject) &&
           (!p.predicate || t.predicate == *p.predicate) &&
           (!p.object || t.object == *p.object);
  };
  std::vector<Triple> out;
  auto collect = [&](const Bucket& bucket) {
    for (const Triple* t : bucket)
      if (accept(*t)) out.push_back(*t);
  };
  if (p.subject && p.predicate) {
    if (auto it = by_subject_predicate_.find({*p.subject, *p.predicate});
        it != by_subject_predicate_.end())
      collect(it->second);
  } else if (p.subject) {
    if (auto it = by_subject_.find(*p.subject); it != by_subject_.end()) collect(it->second);
  } else if (p.object) {
    if (auto it = by_object_.find(*p.object); it != by_object_.end()) collect(it->second);
  } else if (p.predicate) {
    if (auto it = by_predicate_.find(*p.predicate); it != by_predicate_.end())
      collect(it->second);
  } else {
    out.assign(triples_.begin(), triples_.end());
  }
  return out;
}

std::vector<Triple> Graph::match(const TriplePattern& p) const {
  if (members_.empty()) return match_exact(p);
  std::vector<std::optional<std::string>> subjects;
  if (p.subject) {
    for (const auto& s : equivalents(*p.subject)) subjects.emplace_back(s);
  } else {
    subjects.emplace_back(std::nullopt);
  }
  std::vector<std::optional<Term>> objects;
  if (p.object && p.object->is_node()) {
    for (const auto& o : equivalents(p.object->text)) objects.emplace_back(Term::node(o));
  } else {
    objects.emplace_back(p.object);
  }
  std::set<Triple> out;
  for (const auto& s : subjects) {
    for (const auto& o : objects) {
      for (Triple t : match_exact({s, p.predicate, o})) {
        if (t.predicate != kSameAs) {
          t.subject = canonical(t.subject);
          if (t.object.is_node()) t.object.text = canonical(t.object.text);
        }
        out.insert(std::move(t));
      }
    }
  }
  return {out.begin(), out.end()};
}

std::set<std::string> Graph::instances_of(std::string_view cls) const {
  if (!schema_.has_class(cls))
    throw Error(ErrorCode::UnknownClass, "class '" + std::string(cls) + "' is not declared");
  // Subclass closure over schema edges plus asserted subClassOf triples.
  std::set<std::string> classes;
  std::deque<std::string> work{std::string(cls)};
  while (!work.empty()) {
    std::string c = std::move(work.front());
    work.pop_front();
    if (!classes.insert(c).second) continue;
    for (const auto& d : schema_.descendants(c))
      if (d != c) work.push_back(d);
    for (const Triple& t :
         match_exact({std::nullopt, std::string(kSubClassOf), Term::node(c)}))
      work.push_back(t.subject);
  }
  std::set<std::string> out;
  for (const auto& c : classes) {
    for (const Triple& t : match_exact({std::nullopt, std::string(kType), Term::node(c)}))
      out.merge(equivalents(t.subject));
  }
  return out;
}

bool Graph::is_instance_of(std::string_view entity, std::string_view cls) const {
  return instances_of(cls).count(std::string(entity)) > 0;
}

void Graph::merge_same_as(std::string_view a, std::string_view b) {
  if (a == b) return;
  assert_triple({std::string(a), std::string(kSameAs), Term::node(std::string(b))});
}

std::set<std::tuple<std::string, bool, Term>> Graph::neighborhood(std::string_view e) const {
  std::set<std::tuple<std::string, bool, Term>> out;
  for (const auto& m : equivalents(e)) {
    if (auto it = by_subject_.find(m); it != by_subject_.end()) {
      for (const Triple* t : it->second) {
        if (t->predicate == kSameAs || t->predicate == kHasVector) continue;
        Term o = t->object;
        if (o.is_node() && t->predicate != kType) o.text = canonical(o.text);
        out.emplace(t->predicate, true, std::move(o));
      }
    }
    if (auto it = by_object_.find(Term::node(m)); it != by_object_.end()) {
      for (const Triple* t : it->second) {
        if (t->predicate == kSameAs) continue;
        out.emplace(t->predicate, false, Term::node(canonical(t->subject)));
      }
    }
  }
  return out;
}

double Graph::similarity(std::string_view a, std::string_view b) const {
  auto na = neighborhood(a);
  auto nb = neighborhood(b);
  if (na.empty() || nb.empty()) return canonical(a) == canonical(b) ? 1.0 : 0.0;
  std::size_t common = 0;
  auto ia = na.begin();
  auto ib = nb.begin();
  while (ia != na.end() && ib != nb.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(common) / static_cast<double>(na.size() + nb.size() - common);
}

std::set<std::string> Graph::entities() const {
  std::set<std::string> out;
  for (const Triple& t : triples_) {
    if (t.predicate == kSubClassOf) continue;
    out.insert(t.subject);
    if (t.object.is_node() && t.predicate != kType) out.insert(t.object.text);
  }
  return out;
}

bool Graph::has_entity(std::string_view id) const {
  if (auto it = by_subject_.find(id); it != by_subject_.end()) {
    for (const Triple* t : it->second)
      if (t->predicate != kSubClassOf) return true;
  }
  if (auto it = by_object_.find(Term::node(std::string(id))); it != by_object_.end()) {
    for (const Triple* t : it->second)
      if (t->predicate != kSubClassOf && t->predicate != kType) return true;
  }
  return false;
}

IndexStats Graph::stats() const {
  return {triples_.size(),       by_subject_.size(),
          by_predicate_.size(),  by_object_.size(),
          by_subject_predicate_.size(), members_.size()};
}

bool Graph::indexes_consistent() const {
  Graph fresh(*this);  // copy constructor rebuilds every index
  auto same = [](const auto& x, const auto& y) {
    if (x.size() != y.size()) return false;
    auto ix = x.begin();
    auto iy = y.begin();
    for (; ix != x.end(); ++ix, ++iy) {
      if (!(ix->first == iy->first) || ix->second.size() != iy->second.size()) return false;
      auto bx = ix->second.begin();
      auto by = iy->second.begin();
      for (; bx != ix->second.end(); ++bx, ++by)
        if (!(**bx == **by)) return false;
    }
    return true;
  };
  return same(by_subject_, fresh.by_subject_) && same(by_predicate_, fresh.by_predicate_) &&
         same(by_object_, fresh.by_object_) &&
         same(by_subject_predicate_, fresh.by_subject_predicate_);
}

bool operator==(const Graph& a, const Graph& b) {
  return a.schema_ == b.schema_ && a.triples_ == b.triples_ && a.members_ == b.members_ &&
         a.stats() == b.stats();
}

void Graph::save(std::ostream& out) const {
  for (const Triple& t : triples_) out << to_string(t) << '\n';
}

Graph Graph::load(std::istream& in, Schema schema) {
  Graph g(std::move(schema));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = text::trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto fail = [&](const std::string& msg) {
      throw Error(ErrorCode::MalformedInput, "graph line " + std::to_string(lineno) + ": " + msg);
    };
    if (view.size() < 2 || view.substr(view.size() - 2) != " .") fail("missing terminating ' .'");
    view = text::trim(view.substr(0, view.size() - 1));
    auto s_end = view.find(' ');
    if (s_end == std::string_view::npos) fail("expected three terms");
    std::string_view subject = view.substr(0, s_end);
    view = text::trim(view.substr(s_end));
    auto p_end = view.find(' ');
    if (p_end == std::string_view::npos) fail("expected three terms");
    std::string_view predicate = view.substr(0, p_end);
    std::string_view object = text::trim(view.substr(p_end));
    Term term;
    if (!object.empty() && object.front() == '"') {
      if (object.size() < 2 || object.back() != '"') fail("unterminated literal");
      std::string value;
      for (std::size_t i = 1; i + 1 < object.size(); ++i) {
        char c = object[i];
        if (c == '\\') {
          if (i + 2 >= object.size()) fail("dangling escape");
          char n = object[++i];
          value.push_back(n == 'n' ? '\n' : n);
        } else if (c == '"') {
          fail("unescaped quote in literal");
        } else {
          value.push_back(c);
        }
      }
      term = Term::literal(std::move(value));
    } else {
      if (object.empty() || text::has_whitespace(object)) fail("expected three terms");
      term = Term::node(std::string(object));
    }
    try {
      g.assert_triple({std::string(subject), std::string(predicate), std::move(term)});
    } catch (const Error& e) {
      throw Error(e.code(), "graph line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return g;
}

}  // namespace vkg::kg
