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

#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared by the loaders and the DSL front ends.
namespace vkg::text {

// Lowercases, trims, and collapses whitespace runs into single underscores.
// Idempotent: normalize_entity(normalize_entity(x)) == normalize_entity(x).
std::string normalize_entity(std::string_view raw);

std::string to_lower(std::string_view s);

std::string_view trim(std::string_view s);

// Splits on runs of ASCII whitespace; no empty fields.
std::vector<std::string_view> split_whitespace(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);

bool has_whitespace(std::string_view s);

// Fixed-point rendering with the given number of decimals ("%.*f").
std::string format_fixed(double value, int decimals = 6);

// Parses a complete decimal double; returns false on trailing junk.
bool parse_double(std::string_view s, double& out);

bool iequals(std::string_view a, std::string_view b);

}  // namespace vkg::text
