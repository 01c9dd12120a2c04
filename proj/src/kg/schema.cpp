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

#include "vkg/kg/schema.hpp"

#include <deque>
#include <fstream>
#include <istream>
#include <ostream>

#include "vkg/error.hpp"
#include "vkg/text.hpp"

namespace vkg::kg {

namespace {

void require_identifier(std::string_view name, std::string_view what) {
  if (name.empty() || text::has_whitespace(name))
    throw Error(ErrorCode::InvalidTerm,
                std::string(what) + " '" + std::string(name) + "' is not a valid identifier");
}

}  // namespace

bool is_reserved_relation(std::string_view name) noexcept {
  return name == kType || name == kSubClassOf || name == kSameAs ||
         name == kHasVector;
}

void Schema::add_class(std::string_view name) {
  require_identifier(name, "class");
  classes_.emplace(name);
}

void Schema::add_subclass(std::string_view child, std::string_view parent) {
  for (auto c : {child, parent}) {
    if (!has_class(c))
      throw Error(ErrorCode::UnknownClass, "class '" + std::string(c) + "' is not declared");
  }
  if (child == parent || is_subclass_of(parent, child))
    throw Error(ErrorCode::SchemaCycle, "subclass edge " + std::string(child) +
                                            " -> " + std::string(parent) +
                                            " would create a cycle");
  if (subclass_edges_.emplace(std::string(child), std::string(parent)).second)
    children_[std::string(parent)].emplace_back(child);
}

void Schema::add_relation(RelationDecl decl) {
  require_identifier(decl.name, "relation");
  if (is_reserved_relation(decl.name))
    throw Error(ErrorCode::InvalidTerm, "relation '" + decl.name + "' is reserved");
  for (const auto& cls : {decl.domain, decl.range}) {
    if (cls && !has_class(*cls))
      throw Error(ErrorCode::UnknownClass, "class '" + *cls + "' is not declared");
  }
  std::string key = decl.name;
  relations_.insert_or_assign(std::move(key), std::move(decl));
}

void Schema::add_alias(std::string_view keyword, std::string_view relation) {
  require_identifier(keyword, "alias");
  if (!has_relation(relation))
    throw Error(ErrorCode::UnknownRelation,
                "alias target '" + std::string(relation) + "' is not declared");
  aliases_.insert_or_assign(text::to_lower(keyword), std::string(relation));
}

bool Schema::has_class(std::string_view name) const {
  return classes_.find(name) != classes_.end();
}

bool Schema::has_relation(std::string_view name) const {
  return is_reserved_relation(name) || relations_.find(name) != relations_.end();
}

std::optional<std::string> Schema::resolve_relation(std::string_view keyword) const {
  if (auto it = aliases_.find(text::to_lower(keyword)); it != aliases_.end())
    return it->second;
  if (has_relation(keyword)) return std::string(keyword);
  return std::nullopt;
}

std::set<std::string> Schema::descendants(std::string_view cls) const {
  std::set<std::string> out;
  if (!has_class(cls)) return out;
  std::deque<std::string> work{std::string(cls)};
  while (!work.empty()) {
    std::string c = std::move(work.front());
    work.pop_front();
    if (!out.insert(c).second) continue;
    if (auto it = children_.find(c); it != children_.end())
      for (const auto& child : it->second) work.push_back(child);
  }
  return out;
}

bool Schema::is_subclass_of(std::string_view child, std::string_view ancestor) const {
  return descendants(ancestor).count(std::string(child)) > 0;
}

Schema Schema::parse(std::istream& in) {
  enum class Section { None, Classes, Subclass, Relations, Aliases };
  Schema schema;
  Section section = Section::None;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::MalformedInput, "schema line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = text::trim(view);
    if (view.empty()) continue;
    if (view.front() == '[') {
      if (view == "[classes]") section = Section::Classes;
      else if (view == "[subclass]") section = Section::Subclass;
      else if (view == "[relations]") section = Section::Relations;
      else if (view == "[aliases]") section = Section::Aliases;
      else fail("unknown section " + std::string(view));
      continue;
    }
    auto fields = text::split_whitespace(view);
    switch (section) {
      case Section::None:
        fail("entry outside of a section");
        break;
      case Section::Classes:
        if (fields.size() != 1) fail("expected one class name");
        schema.add_class(fields[0]);
        break;
      case Section::Subclass:
        if (fields.size() != 2) fail("expected 'child parent'");
        schema.add_subclass(fields[0], fields[1]);
        break;
      case Section::Relations: {
        if (fields.empty() || fields.size() > 3) fail("expected 'name [domain [range]]'");
        RelationDecl decl{std::string(fields[0]), std::nullopt, std::nullopt};
        auto optional_class = [](std::string_view f) -> std::optional<std::string> {
          if (f == "-") return std::nullopt;
          return std::string(f);
        };
        if (fields.size() > 1) decl.domain = optional_class(fields[1]);
        if (fields.size() > 2) decl.range = optional_class(fields[2]);
        schema.add_relation(std::move(decl));
        break;
      }
      case Section::Aliases:
        if (fields.size() != 2) fail("expected 'keyword relation'");
        schema.add_alias(fields[0], fields[1]);
        break;
    }
  }
  return schema;
}

Schema Schema::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open schema file " + path);
  return parse(in);
}

void Schema::write(std::ostream& out) const {
  out << "[classes]\n";
  for (const auto& c : classes_) out << c << '\n';
  out << "[subclass]\n";
  for (const auto& [child, parent] : subclass_edges_) out << child << ' ' << parent << '\n';
  out << "[relations]\n";
  for (const auto& [name, decl] : relations_) {
    out << name;
    if (decl.domain || decl.range)
      out << ' ' << decl.domain.value_or("-") << ' ' << decl.range.value_or("-");
    out << '\n';
  }
  out << "[aliases]\n";
  for (const auto& [kw, rel] : aliases_) out << kw << ' ' << rel << '\n';
}

}  // namespace vkg::kg
