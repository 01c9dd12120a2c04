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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vkg/vec/sgns.hpp"

namespace vkg::cli {

// Paths are resolved against the directory holding the manifest file.
struct Manifest {
  std::filesystem::path corpus;
  std::filesystem::path schema;
  std::filesystem::path gazetteer;
  std::filesystem::path templates;
  std::filesystem::path stopwords;
  std::filesystem::path rules;
  std::filesystem::path groups;
  std::filesystem::path model;
  std::filesystem::path graph;
  std::filesystem::path tokens;
  std::filesystem::path link_audit;
  std::filesystem::path report;
  std::filesystem::path sweep_report;
  vec::TrainingConfig training;
};

// Throws Io, MalformedInput.
Manifest load_manifest(const std::filesystem::path& path);

// Reads VKG_SEED; nullopt when unset. Throws InvalidConfig on garbage.
std::optional<std::uint64_t> seed_from_env();

enum ExitCode : int { kOk = 0, kUserError = 1, kInternalError = 2 };

// Entry point shared by the executable and the tests. `in` feeds the REPL.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in);

}  // namespace vkg::cli
