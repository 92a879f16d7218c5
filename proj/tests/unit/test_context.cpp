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

#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "mtopos/context.hpp"
#include "mtopos/error.hpp"
#include "support/context_fixtures.hpp"
#include "support/eigen_oracle.hpp"

using namespace mtopos;
using fixtures::basis;
using fixtures::proj_plus;
using fixtures::proj_up;

namespace {

const double kH = 1 / std::sqrt(2.0);
const ComplexVector kE1{1.0, 0.0};
const ComplexVector kE2{0.0, 1.0};

ReductionTable table(std::vector<std::pair<std::string, ComplexMatrix>> letters) {
  return ReductionTable(std::make_shared<const Alphabet>(std::move(letters)));
}

ReductionTable qubit_table() {
  return table({{"Pz", proj_up()}, {"Pplus", proj_plus()}});
}

RaySet rays(const std::vector<ComplexVector>& vs) {
  RaySet out;
  for (const auto& v : vs) out.add(Ray::of(v));
  return out;
}

// Q̂ψ in Eigen, letters multiplied out left to right.
oracle::EVector oracle_apply(const ReductionTable& t, const ProjString& q,
                             const ComplexVector& psi) {
  oracle::EVector v = oracle::to_eigen(psi).normalized();
  for (std::size_t i = q.length(); i-- > 0;) {
    v = oracle::to_eigen(t.alphabet().matrix(q[i])) * v;
  }
  return v;
}

bool oracle_related(const ReductionTable& t, const ProjString& q,
                    const ComplexVector& psi) {
  return oracle_apply(t, q, psi).norm() > 1e-9;
}

using Index = std::set<std::size_t>;

Index members(const ElementSet& s) {
  Index out;
  for (auto i = s.find_first(); i != ElementSet::npos; i = s.find_next(i)) {
    out.insert(i);
  }
  return out;
}

ElementSet selection(std::size_t n, const Index& idx) {
  ElementSet s(n);
  for (auto i : idx) s.set(i);
  return s;
}

Index random_subset(std::mt19937_64& rng, std::size_t n, double p) {
  std::bernoulli_distribution pick(p);
  Index out;
  for (std::size_t i = 0; i < n; ++i) {
    if (pick(rng)) out.insert(i);
  }
  return out;
}

}  // namespace

TEST_CASE("non-annihilating strings") {
  auto t = table({{"P", proj_up()}, {"Q", ComplexMatrix({{0.0, 0.0}, {0.0, 1.0}})}});
  CHECK(in_SP0(t, {}));
  CHECK(in_SP0(t, {0, 0}));
  CHECK_FALSE(in_SP0(t, {1, 0}));
  CHECK_FALSE(in_SP0(t, {0, 1}));

  StringUniverse u(t, 3);
  // only constant strings survive orthogonal letters
  CHECK(u.size() == 7);
  CHECK(u.index_of({1, 1, 1}).has_value());
  CHECK_FALSE(u.index_of({0, 1}).has_value());
  CHECK(*u.index_of({}) == 0);
}

TEST_CASE("string universe against brute force") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 3;
    auto t = fixtures::structured_table(rng, n);
    StringUniverse u(t, 3);
    std::set<ProjString> expected;
    for (const auto& q : enumerate_strings(t.alphabet().size(), 3)) {
      oracle::EMatrix m = oracle::EMatrix::Identity(Eigen::Index(n), Eigen::Index(n));
      for (auto l : q.letters()) m = m * oracle::to_eigen(t.alphabet().matrix(l));
      if (oracle::rank(m, 1e-9) > 0) expected.insert(q);
    }
    CHECK(std::set<ProjString>(u.members().begin(), u.members().end()) ==
          expected);
    for (std::size_t i = 0; i < u.size(); ++i) {
      CHECK(u.index_of(u.members()[i]) == i);
    }
  }
}

TEST_CASE("ray sets reject duplicates up to phase") {
  RaySet s;
  s.add(Ray::of(kE1), "e1");
  CHECK_THROWS_AS(s.add(Ray::of({Complex(0, 2), 0.0})), UsageError);
  CHECK_THROWS_AS(s.add(Ray::of({1.0, 0.0, 0.0})), UsageError);
  s.add(Ray::of({kH, kH}), "plus");
  CHECK(s.size() == 2);
  CHECK(s.names()[1] == "plus");
  CHECK(*s.index_of(Ray::of({-1.0, -1.0})) == 1);
}

TEST_CASE("polar examples") {
  auto t = table({{"Pz", proj_up()}});
  StringUniverse u(t, 3);
  REQUIRE(u.size() == 4);
  // [e2] survives only the empty string
  CHECK(polar_of_rays(rays({kE2}), u) == std::vector<ProjString>{{}});
  CHECK(polar_of_rays(rays({kE1}), u) == u.members());
  CHECK(polar_of_rays(RaySet{}, u) == u.members());

  auto q = qubit_table();
  auto v = rays({kE1, kE2, {kH, kH}, {kH, -kH}});
  auto j0 = polar_of_strings({{0}}, v, q);
  REQUIRE(j0.size() == 3);
  CHECK(j0.index_of(Ray::of(kE2)) == std::nullopt);
  CHECK(polar_of_strings({}, v, q).size() == 4);
  // (Pz, Pplus) kills [e1 - e2] only
  CHECK(polar_of_strings({{0, 1}}, v, q).size() == 3);
}

TEST_CASE("Galois laws against brute force") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 2;
    auto t = fixtures::structured_table(rng, n);
    GaloisContext g(StringUniverse(t, 3), fixtures::structured_rays(rng, n, 8));
    const auto& u = g.strings();
    const auto& v = g.rays();
    for (std::size_t q = 0; q < u.size(); ++q) {
      for (std::size_t r = 0; r < v.size(); ++r) {
        REQUIRE(g.related(q, r) ==
                oracle_related(t, u.members()[q], v.rays()[r].representative()));
      }
    }
    const auto xi = random_subset(rng, v.size(), 0.3);
    const auto j = random_subset(rng, u.size(), 0.2);

    Index xi0;
    for (std::size_t q = 0; q < u.size(); ++q) {
      bool all = true;
      for (auto r : xi) all = all && g.related(q, r);
      if (all) xi0.insert(q);
    }
    Index j0;
    for (std::size_t r = 0; r < v.size(); ++r) {
      bool all = true;
      for (auto q : j) all = all && g.related(q, r);
      if (all) j0.insert(r);
    }
    const auto sxi = selection(v.size(), xi);
    const auto sj = selection(u.size(), j);
    CHECK(members(g.polar_of_rays(sxi)) == xi0);
    CHECK(members(g.polar_of_strings(sj)) == j0);

    // extensive, antitone, and polars are closed
    CHECK(sxi.is_subset_of(g.closure_rays(sxi)));
    auto bigger = sxi;
    bigger |= selection(v.size(), random_subset(rng, v.size(), 0.3));
    CHECK(g.polar_of_rays(bigger).is_subset_of(g.polar_of_rays(sxi)));
    const auto pj = g.polar_of_strings(sj);
    CHECK(g.closure_rays(pj) == pj);
    CHECK(g.is_full(pj));
  }
}

TEST_CASE("contextual valuations restrict the global ones") {
  auto t = qubit_table();
  StringUniverse u(t, 3);
  const ComplexVector plus{kH, kH};
  auto xi = rays({kE1, plus});
  const auto ctx = polar_of_rays(xi, u);
  auto k = Subspace::span({kE1}, 2);
  const auto val = context_valuation_X(kE1, k, xi, u);
  const auto eq = context_truth_equal_X(kE1, plus, xi, u);
  for (const auto& q : ctx) {
    CHECK((std::find(val.begin(), val.end(), q) != val.end()) ==
          vector_member(t, kE1, k, q));
    CHECK((std::find(eq.begin(), eq.end(), q) != eq.end()) ==
          ray_equal_member(t, kE1, plus, q));
  }
  // (Pz) sends both to [e1]
  CHECK(std::find(eq.begin(), eq.end(), ProjString{0}) != eq.end());
  CHECK(std::find(eq.begin(), eq.end(), ProjString{}) == eq.end());
  CHECK_THROWS_AS(context_valuation_X(kE2, k, xi, u), PreconditionError);
  CHECK_THROWS_AS(context_truth_equal_X(kE1, kE2, xi, u), PreconditionError);
}

TEST_CASE("arrows out of a string") {
  auto t = qubit_table();
  const ProjString q{0, 1};
  auto arrows = arrows_out(t, q);
  REQUIRE(arrows.size() == 3);
  CHECK(arrows[0].target == q);
  CHECK(arrows[1].target == ProjString{0});
  CHECK(arrows[1].tail == ProjString{1});
  CHECK(arrows[2].target == ProjString{});
  for (const auto& a : arrows) {
    CHECK(string_concat(a.target, a.tail) == a.source);
  }
  auto chain = minimal_chain(q);
  REQUIRE(chain.size() == 2);
  auto whole = compose(chain[0], chain[1]);
  CHECK(whole.source == q);
  CHECK(whole.target == ProjString{});
  CHECK(whole.tail == q);
  CHECK_THROWS_AS(compose(chain[1], chain[0]), UsageError);

  auto orth = table({{"P", proj_up()}, {"Q", ComplexMatrix({{0.0, 0.0}, {0.0, 1.0}})}});
  CHECK_THROWS_AS(arrows_out(orth, {0, 1}), PreconditionError);
}

TEST_CASE("reduction presheaf is functorial") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 3;
    auto t = fixtures::structured_table(rng, n);
    StringUniverse u(t, 4);
    const auto psi = fixtures::random_vector(rng, n);
    for (const auto& q : u.members()) {
      if (!presheaf_at(t, q, psi)) {
        CHECK_THROWS_AS(presheaf_restrict(t, arrows_out(t, q).back(), psi),
                        PreconditionError);
        continue;
      }
      for (const auto& a : arrows_out(t, q)) {
        const auto once = presheaf_restrict(t, a, psi);
        CHECK(presheaf_at(t, a.target, once));
        for (const auto& b : arrows_out(t, a.target)) {
          const auto twice = presheaf_restrict(t, b, once);
          const auto direct = presheaf_restrict(t, compose(a, b), psi);
          CHECK(norm(subtract(twice, direct)) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("sieve example on a qubit") {
  auto t = qubit_table();
  auto s = sieve_truth_equal(t, kE1, kE2, {0, 1});
  CHECK(s.included_tail_lengths() == std::vector<std::size_t>{1, 2});
  CHECK(s.tails() == std::vector<ProjString>{{1}, {0, 1}});
  CHECK_FALSE(s.full());
  CHECK_FALSE(s.empty());
  CHECK(s.includes(2));
  CHECK_FALSE(s.includes(3));

  CHECK(sieve_truth_equal(t, kE1, kE1, {0, 1}).full());
  // Pz kills e2
  CHECK_THROWS_AS(sieve_truth_equal(t, kE1, kE2, {0}), ContextError);
  auto orth = table({{"P", proj_up()}, {"Q", ComplexMatrix({{0.0, 0.0}, {0.0, 1.0}})}});
  CHECK_THROWS_AS(sieve_valuation(orth, kE1, Subspace::full(2), {0, 1}),
                  ContextError);
}

TEST_CASE("sieves are final segments") {
  CHECK(Sieve::from_flags({0, 1}, {false, false, true}).min_tail() == 2);
  CHECK(Sieve::from_flags({0, 1}, {false, false, false}).empty());
  CHECK_THROWS_AS(Sieve::from_flags({0, 1}, {false, true, false}),
                  StructuralError);
  CHECK_THROWS_AS(Sieve::from_flags({0, 1}, {true, true}), StructuralError);
}

TEST_CASE("the same pair gets different sieves in different contexts") {
  const auto e1 = basis(3, 0), e2 = basis(3, 1), e3 = basis(3, 2);
  ComplexVector f{kH, kH, 0.0};
  auto t = table({{"Qp", fixtures::mask_projector({e1, e2}, 3)},
                  {"Q", fixtures::mask_projector({f, e3}, 3)}});
  CHECK(sieve_truth_equal(t, e1, e2, {0}).empty());
  auto s = sieve_truth_equal(t, e1, e2, {1});
  CHECK(s.included_tail_lengths() == std::vector<std::size_t>{1});
}

TEST_CASE("sieves agree with the global valuation tail by tail") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 2;
    auto t = fixtures::structured_table(rng, n);
    const auto psi = fixtures::random_vector(rng, n);
    const auto phi = fixtures::structured_rays(rng, n, 1).rays()[0].representative();
    auto k = Subspace::span({phi}, n);
    const StringUniverse u(t, 3);
    for (const auto& q : u.members()) {
      if (!presheaf_at(t, q, psi) || !presheaf_at(t, q, phi)) continue;
      const auto sv = sieve_valuation(t, psi, k, q);
      const auto se = sieve_truth_equal(t, psi, phi, q);
      CHECK(sv == se);
      for (std::size_t len = 0; len <= q.length(); ++len) {
        CHECK(sv.includes(len) == vector_member(t, psi, k, q.tail(len)));
      }
    }
  }
}
