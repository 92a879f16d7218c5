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

// Projector alphabets and ray universes with many exact annihilations, so
// that polars and sieves are not trivially full.

#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "mtopos/context.hpp"
#include "support/quantum_fixtures.hpp"

namespace mtopos::fixtures {

inline ComplexVector basis(std::size_t n, std::size_t i) {
  ComplexVector v(n);
  v[i] = 1.0;
  return v;
}

/// k-th vector of the discrete Fourier basis.
inline ComplexVector fourier(std::size_t n, std::size_t k) {
  ComplexVector v(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = 2 * std::numbers::pi * double(j * k) / double(n);
    v[j] = std::polar(1.0 / std::sqrt(double(n)), a);
  }
  return v;
}

/// Projector onto span{vs[i] : bit i of mask}, for orthonormal vs.
inline ComplexMatrix mask_projector(const std::vector<ComplexVector>& vs,
                                    unsigned mask) {
  const std::size_t n = vs.front().size();
  ComplexMatrix p(n, n);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (mask >> i & 1U) p += ComplexMatrix::outer(vs[i], vs[i]);
  }
  return p;
}

/// 1–3 projectors of proper nonzero rank, each diagonal in the standard
/// or the Fourier basis.
inline ReductionTable structured_table(std::mt19937_64& rng, std::size_t n,
                                       std::size_t max_letters = 3) {
  std::vector<ComplexVector> std_basis, dft;
  for (std::size_t i = 0; i < n; ++i) {
    std_basis.push_back(basis(n, i));
    dft.push_back(fourier(n, i));
  }
  std::uniform_int_distribution<std::size_t> count(1, max_letters);
  std::uniform_int_distribution<unsigned> mask(1, (1U << n) - 2);
  std::bernoulli_distribution coin;
  std::vector<std::pair<std::string, ComplexMatrix>> letters;
  for (std::size_t i = count(rng); letters.size() < i;) {
    auto p = mask_projector(coin(rng) ? std_basis : dft, mask(rng));
    bool fresh = true;
    for (const auto& [name, q] : letters) {
      fresh = fresh && !approx_equal(p, q, 1e-12);
    }
    if (fresh) letters.emplace_back("P" + std::to_string(letters.size()), p);
  }
  return ReductionTable(std::make_shared<const Alphabet>(std::move(letters)));
}

/// Up to `count` distinct rays: basis vectors, normalised sums of two basis
/// vectors, Fourier vectors and a few generic vectors.
inline RaySet structured_rays(std::mt19937_64& rng, std::size_t n,
                              std::size_t count) {
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_int_distribution<std::size_t> index(0, n - 1);
  RaySet out;
  for (int attempts = 0; out.size() < count && attempts < 200; ++attempts) {
    ComplexVector v;
    switch (kind(rng)) {
      case 0: v = basis(n, index(rng)); break;
      case 1: {
        const auto i = index(rng), j = index(rng);
        if (i == j) continue;
        v = basis(n, i);
        v[j] = 1.0;
        break;
      }
      case 2: v = fourier(n, index(rng)); break;
      default: v = random_vector(rng, n);
    }
    const auto r = Ray::of(v);
    if (!out.index_of(r)) out.add(r, "v" + std::to_string(out.size()));
  }
  return out;
}

}  // namespace mtopos::fixtures
