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

#include "mtopos/selftest.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "mtopos/classical.hpp"
#include "mtopos/context.hpp"
#include "mtopos/ideal.hpp"
#include "mtopos/mset.hpp"
#include "mtopos/quantum.hpp"
#include "mtopos/reduction.hpp"

namespace mtopos {

namespace {

using Rng = std::mt19937_64;

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

ComplexVector gaussian(Rng& rng, std::size_t n) {
  std::normal_distribution<double> g;
  ComplexVector v(n);
  for (auto& z : v) z = Complex(g(rng), g(rng));
  return v;
}

std::vector<ComplexVector> orthonormal(Rng& rng, std::size_t n) {
  std::vector<ComplexVector> out;
  while (out.size() < n) {
    auto v = gaussian(rng, n);
    for (const auto& b : out) {
      const Complex c = inner(b, v);
      for (std::size_t i = 0; i < n; ++i) v[i] -= c * b[i];
    }
    if (norm(v) < 1e-6) continue;
    out.push_back(scaled(v, 1.0 / norm(v)));
  }
  return out;
}

ComplexMatrix hermitian(const std::vector<ComplexVector>& u,
                        const std::vector<double>& values) {
  const std::size_t n = u.size();
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a += ComplexMatrix::outer(u[i], u[i]) * Complex(values[i]);
  }
  return (a + a.adjoint()) * Complex(0.5);
}

ValueSet random_subset(Rng& rng, std::size_t n) {
  ValueSet s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = pick(rng, 0, 1) == 1;
  return s;
}

// Projectors diagonal in the standard or the Fourier basis, so strings
// annihilate vectors exactly often enough to matter.
ReductionTable structured_table(Rng& rng, std::size_t n) {
  std::vector<std::pair<std::string, ComplexMatrix>> letters;
  const std::size_t count = pick(rng, 1, 3);
  while (letters.size() < count) {
    const bool fourier = pick(rng, 0, 1) == 1;
    const auto mask = pick(rng, 1, (std::size_t{1} << n) - 2);
    ComplexMatrix p(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      if (!(mask >> k & 1U)) continue;
      ComplexVector v(n);
      for (std::size_t j = 0; j < n; ++j) {
        v[j] = fourier ? std::polar(1 / std::sqrt(double(n)),
                                    2 * std::numbers::pi * double(j * k) /
                                        double(n))
                       : Complex(j == k ? 1.0 : 0.0);
      }
      p += ComplexMatrix::outer(v, v);
    }
    bool fresh = true;
    for (const auto& l : letters) fresh = fresh && !approx_equal(l.second, p, 1e-12);
    if (fresh) letters.emplace_back("P" + std::to_string(letters.size()), p);
  }
  return ReductionTable(std::make_shared<const Alphabet>(std::move(letters)));
}

SelftestCheck heyting(Rng& rng) {
  SelftestCheck c{"heyting-laws"};
  std::vector<MonoidPtr> corpus;
  for (std::size_t order = 1; order <= 3; ++order) {
    for (auto& m : enumerate_monoids(order)) corpus.push_back(m);
  }
  for (int i = 0; i < 4; ++i) {
    const auto n = pick(rng, 2, 3);
    TransformationMonoid::Map f(n);
    for (auto& v : f) v = static_cast<std::uint32_t>(pick(rng, 0, n - 1));
    corpus.push_back(TransformationMonoid::generated(n, {f}).monoid());
  }
  bool witness = false;
  for (const auto& m : corpus) {
    const auto report = verify_heyting_algebra(m);
    for (const auto& law : report.laws) {
      c.cases += law.cases;
      c.failures += law.failures;
    }
    witness = witness || report.excluded_middle_witness.has_value();
  }
  c.cases += 1;
  c.failures += witness ? 0 : 1;
  return c;
}

SelftestCheck arrow_bijection() {
  SelftestCheck c{"characteristic-arrow-bijection"};
  for (std::size_t order = 1; order <= 3; ++order) {
    for (auto& m : enumerate_monoids(order)) {
      for (const auto& x : {MSet::regular(m), MSet::truth_object(m)}) {
        const auto subsets = enumerate_invariant_subsets(x);
        const auto arrows = enumerate_equivariant_maps(x);
        ++c.cases;
        if (subsets.size() != arrows.size()) ++c.failures;
        for (const auto& j : subsets) {
          ++c.cases;
          const auto chi = characteristic_arrow(x, j);
          if (!is_equivariant(x, chi) || classified_subset(x, chi) != j) {
            ++c.failures;
          }
        }
        for (const auto& chi : arrows) {
          ++c.cases;
          if (characteristic_arrow(x, classified_subset(x, chi)) != chi) {
            ++c.failures;
          }
        }
      }
    }
  }
  return c;
}

SelftestCheck classical_routes(Rng& rng) {
  SelftestCheck c{"classical-routes"};
  for (int trial = 0; trial < 30; ++trial) {
    const auto nx = pick(rng, 1, 3);
    const auto ns = pick(rng, 1, 3);
    std::vector<double> values;
    for (std::size_t i = 0; i < nx; ++i) values.push_back(double(i) - 1.0);
    std::vector<std::string> states;
    std::vector<double> a;
    for (std::size_t s = 0; s < ns; ++s) {
      states.push_back("s" + std::to_string(s));
      a.push_back(values[pick(rng, 0, nx - 1)]);
    }
    ClassicalSystem sys(states, values, {{"A", a}});
    QuantityProduct product(sys);
    for (std::size_t s = 0; s < ns; ++s) {
      const auto delta = random_subset(rng, nx);
      ++c.cases;
      if (generalized_classical_valuation(sys, s, 0, delta) !=
          E_s_valuation(sys, s, 0, delta, &product)) {
        ++c.failures;
      }
    }
  }
  return c;
}

SelftestCheck quantum_routes(Rng& rng) {
  SelftestCheck c{"quantum-routes"};
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = pick(rng, 2, 3);
    const auto nx = pick(rng, 2, 3);
    std::vector<double> x;
    for (std::size_t i = 0; i < nx; ++i) x.push_back(double(i) - 1.0);
    std::vector<double> spectrum;
    for (std::size_t i = 0; i < n; ++i) spectrum.push_back(x[pick(rng, 0, nx - 1)]);
    const auto u = orthonormal(rng, n);
    QuantumSystem sys(n, x, {{"A", hermitian(u, spectrum)}});
    // eigenvectors make the valuations non-trivial
    const auto psi = pick(rng, 0, 1) ? u[pick(rng, 0, n - 1)] : gaussian(rng, n);
    const auto delta = random_subset(rng, nx);
    ++c.cases;
    if (quantum_function_valuation(sys, psi, 0, delta) !=
        E_psi_valuation_via_arrow(sys, psi, 0, delta)) {
      ++c.failures;
    }
  }
  return c;
}

SelftestCheck projector_ordering(Rng& rng) {
  SelftestCheck c{"projector-ordering"};
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = pick(rng, 2, 5);
    std::vector<double> spectrum;
    for (std::size_t i = 0; i < n; ++i) spectrum.push_back(double(pick(rng, 0, 3)));
    const auto a = hermitian_eig(hermitian(orthonormal(rng, n), spectrum));
    std::vector<double> domain = a.eigenvalues(), image, delta, f_delta;
    for (double v : domain) {
      image.push_back(double(pick(rng, 0, 2)));
      if (pick(rng, 0, 1)) {
        delta.push_back(v);
        f_delta.push_back(image.back());
      }
    }
    const auto fa = apply_function(a, domain, image);
    const auto e = spectral_projector(a, delta).matrix();
    const auto ef = spectral_projector(fa, f_delta).matrix();
    ++c.cases;
    if (max_abs_diff(e * ef, e) > 1e-8) ++c.failures;
  }
  return c;
}

SelftestCheck certificates(Rng& rng, std::size_t depth) {
  SelftestCheck c{"ideal-certificates"};
  for (int trial = 0; trial < 10; ++trial) {
    const auto n = pick(rng, 2, 3);
    const auto t = structured_table(rng, n);
    const auto psi = gaussian(rng, n);
    const auto phi = gaussian(rng, n);
    const auto k = Subspace::span({gaussian(rng, n)}, n);
    const auto rho = DensityMatrix(ComplexMatrix::outer(psi, psi) +
                                   ComplexMatrix::outer(phi, phi));
    for (const auto& ideal :
         {valuation_vector(t, psi, k, depth), valuation_ray(t, psi, k, depth),
          valuation_density(t, rho, k, depth),
          truth_ray_equal_SP(t, psi, phi, depth)}) {
      ++c.cases;
      if (!ideal.certificate().ok()) ++c.failures;
    }
  }
  return c;
}

SelftestCheck presheaf(Rng& rng, std::size_t depth) {
  SelftestCheck c{"presheaf-functoriality"};
  for (int trial = 0; trial < 5; ++trial) {
    const auto n = pick(rng, 2, 3);
    const auto t = structured_table(rng, n);
    const auto psi = gaussian(rng, n);
    const StringUniverse u(t, depth);
    for (const auto& q : u.members()) {
      if (!presheaf_at(t, q, psi)) continue;
      for (const auto& a : arrows_out(t, q)) {
        const auto once = presheaf_restrict(t, a, psi);
        for (const auto& b : arrows_out(t, a.target)) {
          ++c.cases;
          const auto diff = subtract(presheaf_restrict(t, b, once),
                                     presheaf_restrict(t, compose(a, b), psi));
          if (norm(diff) > 1e-9) ++c.failures;
        }
      }
    }
  }
  return c;
}

SelftestCheck galois(Rng& rng, std::size_t depth) {
  SelftestCheck c{"galois-laws"};
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = pick(rng, 2, 3);
    const auto t = structured_table(rng, n);
    RaySet rays;
    for (std::size_t i = 0; i < n; ++i) {
      ComplexVector e(n);
      e[i] = 1.0;
      rays.add(Ray::of(e));
    }
    for (int extra = 0; extra < 3; ++extra) rays.add(Ray::of(gaussian(rng, n)));
    const GaloisContext g(StringUniverse(t, depth), rays);
    const auto xi = random_subset(rng, rays.size());
    auto bigger = xi | random_subset(rng, rays.size());
    const auto j0 = g.polar_of_strings(random_subset(rng, g.strings().size()));
    c.cases += 3;
    if (!xi.is_subset_of(g.closure_rays(xi))) ++c.failures;
    if (!g.polar_of_rays(bigger).is_subset_of(g.polar_of_rays(xi))) ++c.failures;
    if (!g.is_full(j0)) ++c.failures;
  }
  return c;
}

}  // namespace

std::vector<SelftestCheck> run_selftest(std::uint64_t seed, std::size_t depth) {
  Rng rng(seed);
  std::vector<SelftestCheck> out;
  out.push_back(heyting(rng));
  out.push_back(arrow_bijection());
  out.push_back(classical_routes(rng));
  out.push_back(quantum_routes(rng));
  out.push_back(projector_ordering(rng));
  out.push_back(certificates(rng, depth));
  out.push_back(presheaf(rng, depth));
  out.push_back(galois(rng, depth));
  return out;
}

}  // namespace mtopos
