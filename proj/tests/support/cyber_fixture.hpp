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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace vkg::fixture {

// Text of every input file of the bundled threat-intelligence workspace.
struct CyberFiles {
  std::string schema;
  std::string gazetteer;
  std::string templates;
  std::string stopwords;
  std::string rules;
  std::string groups;
  std::string corpus;
  std::string manifest;
};

// Deterministic for a given seed on every platform.
//
// Layout: each similarity group has a pool of topic words; topic documents
// pair one entity with words from its group's pool. Every group also has one
// entity of another class drawn from the same pool, so raw embedding
// neighborhoods mix classes. Relation documents pair products with random
// vulnerabilities, attacks, attackers and means, which gives the graph side
// edges that carry little group signal.
CyberFiles make_cyber_files(std::uint64_t seed = 7);

void write_cyber_files(const CyberFiles& files, const std::filesystem::path& dir);

// Entities that occur in exactly one document of the generated corpus.
std::vector<std::string> cyber_singletons();

// The sentence used for the product/vulnerability/means example.
inline constexpr const char* kIeSentence =
    "Microsoft Internet Explorer lets remote attackers execute arbitrary code or trigger a "
    "denial of service through memory corruption when a user opens a crafted web site.";

inline constexpr const char* kOverlapQuery =
    "SEARCH 'denial_of_service' AS V; LIST vulnerability OF 'MySQL' AS K; "
    "INFER alert FROM V, K ON 'MySQL' AS A";

}  // namespace vkg::fixture
