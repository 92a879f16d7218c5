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

#pragma once

#include <random>
#include <set>
#include <vector>

#include "mtopos/error.hpp"
#include "mtopos/monoid.hpp"

namespace mtopos::fixtures {

/// {1, e} with ee = e; element 0 is the identity.
inline MonoidPtr idempotent_pair() {
  return make_monoid({{0, 1}, {1, 1}}, {"1", "e"});
}

/// Cyclic group of order 2.
inline MonoidPtr z2() { return make_monoid({{0, 1}, {1, 0}}, {"1", "g"}); }

/// Map({0,1},{0,1}) indexed as f(0) + 2 f(1):
/// 0 = const0, 1 = swap, 2 = id, 3 = const1.
inline TransformationMonoid map_monoid_2() {
  return TransformationMonoid::full(2);
}

/// Random monoid of order in [lo, hi], realised as the submonoid of Map(X,X)
/// generated by random maps on a small set.
inline MonoidPtr random_monoid(std::mt19937_64& rng, std::size_t lo,
                               std::size_t hi) {
  for (;;) {
    std::uniform_int_distribution<std::size_t> degree(2, 4);
    const std::size_t n = degree(rng);
    std::uniform_int_distribution<std::uint32_t> point(0, n - 1);
    std::uniform_int_distribution<int> gens(1, 2);
    std::vector<TransformationMonoid::Map> generators;
    for (int g = gens(rng); g > 0; --g) {
      TransformationMonoid::Map f(n);
      for (auto& v : f) v = point(rng);
      generators.push_back(f);
    }
    try {
      auto t = TransformationMonoid::generated(n, generators, hi);
      if (t.monoid()->size() >= lo) return t.monoid();
    } catch (const CapacityError&) {
      // too large, draw again
    }
  }
}

/// The monoid corpus: every monoid of order ≤ 4 up to isomorphism plus
/// random order-5 monoids, deduplicated up to isomorphism, at least
/// `min_size` entries.
inline std::vector<MonoidPtr> monoid_corpus(std::uint64_t seed,
                                            std::size_t min_size = 50) {
  std::vector<MonoidPtr> out;
  std::set<Table> seen;
  for (std::size_t order = 1; order <= 4; ++order) {
    for (auto& m : enumerate_monoids(order)) {
      seen.insert(canonical_table(*m));
      out.push_back(m);
    }
  }
  std::mt19937_64 rng(seed);
  std::size_t random_added = 0;
  while (out.size() < min_size || random_added < 8) {
    auto m = random_monoid(rng, 5, 5);
    if (seen.insert(canonical_table(*m)).second) {
      out.push_back(m);
      ++random_added;
    }
  }
  return out;
}

}  // namespace mtopos::fixtures
