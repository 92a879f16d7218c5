// Copyright 2026 The mtopos Authors
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

// A seeded, self-contained run of the main algebraic laws, used by the
// `selftest` command and the Python module.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mtopos {

struct SelftestCheck {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  bool passed() const { return failures == 0; }
};

/// Deterministic for a given seed on a given platform.
std::vector<SelftestCheck> run_selftest(std::uint64_t seed,
                                        std::size_t depth = 3);

}  // namespace mtopos
