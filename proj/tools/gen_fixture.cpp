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

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cyber_fixture.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write the bundled threat-intelligence fixture", "gen_fixture"};
  std::string dir = "fixtures/cyber";
  std::uint64_t seed = 7;
  app.add_option("-o,--out", dir, "Output directory");
  app.add_option("--seed", seed, "Generator seed");
  CLI11_PARSE(app, argc, argv);
  try {
    vkg::fixture::write_cyber_files(vkg::fixture::make_cyber_files(seed), dir);
  } catch (const std::exception& e) {
    std::cerr << "gen_fixture: " << e.what() << '\n';
    return 1;
  }
  std::cout << "wrote " << dir << '\n';
  return 0;
}
