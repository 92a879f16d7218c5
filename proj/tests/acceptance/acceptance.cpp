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

// One PASS/FAIL line per acceptance criterion. Every check compares the
// library against an oracle that shares no code with it: plain std::set
// algebra for the discrete parts, Eigen for the numerical ones.

#include <sys/wait.h>
#include <unistd.h>

#include <Eigen/Dense>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mtopos/classical.hpp"
#include "mtopos/context.hpp"
#include "mtopos/ideal.hpp"
#include "mtopos/mset.hpp"
#include "mtopos/quantum.hpp"
#include "mtopos/reduction.hpp"
#include "mtopos/selftest.hpp"
#include "support/context_fixtures.hpp"
#include "support/eigen_oracle.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/quantum_fixtures.hpp"

using namespace mtopos;
using oracle::Set;

namespace {

// Pinned tolerances and budgets.
constexpr double kOrderingTol = 1e-8;
constexpr double kFunctorTol = 1e-9;
constexpr double kRankThreshold = 1e-9;
constexpr double kFixedTol = 1e-7;
constexpr double kBudgetHeyting = 30.0;
constexpr double kBudgetBijection = 10.0;
constexpr double kBudgetCertificates = 60.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    ++cases;
    if (!ok && ++failures <= 5) notes.push_back(what);
  }
};

bool report(int id, const std::string& title, const Outcome& o, double secs,
            double budget = 0.0, bool extra = true,
            const std::string& extra_note = {}) {
  const bool in_time = budget <= 0.0 || secs < budget;
  const bool pass = o.cases > 0 && o.failures == 0 && in_time && extra;
  std::printf("%s %d %s: %zu checks, %zu failures, %.2fs", pass ? "PASS" : "FAIL",
              id, title.c_str(), o.cases, o.failures, secs);
  if (budget > 0.0) std::printf(" (budget %.0fs)", budget);
  if (!extra_note.empty()) std::printf(", %s", extra_note.c_str());
  std::printf("\n");
  for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
  std::fflush(stdout);
  return pass;
}

oracle::RawTable raw(const FiniteMonoid& m) {
  oracle::RawTable t(m.size(), std::vector<std::uint32_t>(m.size()));
  for (Element a = 0; a < m.size(); ++a) {
    for (Element b = 0; b < m.size(); ++b) t[a][b] = m.product(a, b);
  }
  return t;
}

Set as_set(const LeftIdeal& i) { return oracle::to_set(i.members()); }

Set unite(const Set& a, Set b) {
  b.insert(a.begin(), a.end());
  return b;
}

// ---------------------------------------------------------------- 1

bool heyting_suite() {
  const auto start = Clock::now();
  Outcome o;
  const auto corpus = fixtures::monoid_corpus(2026);
  bool witness = false;
  for (const auto& m : corpus) {
    const auto t = raw(*m);
    const auto oracle_ideals = oracle::left_ideals(t);
    const auto ideals = enumerate_left_ideals(m);
    {
      std::set<Set> a(oracle_ideals.begin(), oracle_ideals.end()), b;
      for (const auto& i : ideals) b.insert(as_set(i));
      o.check(a == b, "ideal lattice differs from the subset filter");
    }
    o.check(verify_heyting_algebra(m).all_hold(), "verify_heyting_algebra");
    const Set empty;
    auto implies = [&](const Set& i, const Set& j) {
      Set out;
      for (const auto& k : oracle_ideals) {
        if (oracle::subset(oracle::intersect(k, i), j)) out.insert(k.begin(), k.end());
      }
      return out;
    };
    const std::size_t n = ideals.size();
    std::vector<std::vector<Set>> imp(n, std::vector<Set>(n));
    for (std::size_t a = 0; a < n; ++a) {
      const Set ia = as_set(ideals[a]);
      const Set neg = as_set(heyting_not(ideals[a]));
      o.check(neg == implies(ia, empty), "negation");
      const bool lem = unite(ia, neg).size() == m->size();
      o.check(as_set(heyting_join(ideals[a], heyting_not(ideals[a]))) == unite(ia, neg),
              "join with the negation");
      if (!lem && m->size() == 2) witness = true;
      for (std::size_t b = 0; b < n; ++b) {
        const Set ib = as_set(ideals[b]);
        o.check(as_set(heyting_meet(ideals[a], ideals[b])) == oracle::intersect(ia, ib),
                "meet");
        o.check(as_set(heyting_join(ideals[a], ideals[b])) == unite(ia, ib), "join");
        imp[a][b] = as_set(heyting_implies(ideals[a], ideals[b]));
        o.check(imp[a][b] == implies(ia, ib), "implication against the adjunction");
        for (Element e = 0; e < m->size(); ++e) {
          o.check(as_set(ideal_action(e, ideals[a])) == oracle::act(t, e, ia),
                  "left action on ideals");
        }
      }
    }
    for (std::size_t a = 0; a < n; ++a) {
      const Set ia = as_set(ideals[a]);
      for (std::size_t b = 0; b < n; ++b) {
        const Set ib = as_set(ideals[b]);
        for (std::size_t c = 0; c < n; ++c) {
          const Set ic = as_set(ideals[c]);
          // residuation: C ∩ A ⊆ B iff C ⊆ (A ⇒ B)
          o.check(oracle::subset(oracle::intersect(ic, ia), ib) ==
                      oracle::subset(ic, imp[a][b]),
                  "residuation");
          o.check(oracle::intersect(ia, unite(ib, ic)) ==
                      unite(oracle::intersect(ia, ib), oracle::intersect(ia, ic)),
                  "distributivity");
        }
      }
    }
  }
  const std::string note = std::to_string(corpus.size()) + " monoids" +
                           (witness ? ", excluded middle fails on {1,e}" : "");
  return report(1, "Heyting suite", o, seconds_since(start), kBudgetHeyting,
                witness && corpus.size() >= 50, note);
}

// ---------------------------------------------------------------- 2

// Every action of m on n points: images of the elements in Map(n,n),
// found by backtracking on the homomorphism equations.
std::vector<std::vector<std::vector<Point>>> all_actions(const FiniteMonoid& m,
                                                         std::size_t n) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) count *= n;
  std::vector<std::vector<Point>> maps(count, std::vector<Point>(n));
  for (std::size_t c = 0; c < count; ++c) {
    std::size_t code = c;
    for (std::size_t x = 0; x < n; ++x) {
      maps[c][x] = static_cast<Point>(code % n);
      code /= n;
    }
  }
  std::map<std::vector<Point>, std::size_t> code_of;
  for (std::size_t c = 0; c < count; ++c) code_of[maps[c]] = c;
  std::vector<std::vector<std::size_t>> comp(count, std::vector<std::size_t>(count));
  for (std::size_t f = 0; f < count; ++f) {
    for (std::size_t g = 0; g < count; ++g) {
      std::vector<Point> fg(n);
      for (std::size_t x = 0; x < n; ++x) fg[x] = maps[f][maps[g][x]];
      comp[f][g] = code_of[fg];
    }
  }
  std::vector<Point> id(n);
  for (std::size_t x = 0; x < n; ++x) id[x] = static_cast<Point>(x);

  const std::size_t k = m.size();
  constexpr std::size_t kUnset = ~std::size_t{0};
  std::vector<std::size_t> image(k, kUnset);
  image[m.identity()] = code_of[id];
  std::vector<Element> order;
  for (Element e = 0; e < k; ++e) {
    if (e != m.identity()) order.push_back(e);
  }
  auto consistent = [&](Element a) {
    for (Element x = 0; x < k; ++x) {
      if (image[x] == kUnset) continue;
      for (Element y = 0; y < k; ++y) {
        if (image[y] == kUnset) continue;
        const Element xy = m.product(x, y);
        if (x != a && y != a && xy != a) continue;
        if (image[xy] != kUnset && image[xy] != comp[image[x]][image[y]]) return false;
      }
    }
    return true;
  };
  std::vector<std::vector<std::vector<Point>>> out;
  std::function<void(std::size_t)> go = [&](std::size_t depth) {
    if (depth == order.size()) {
      std::vector<std::vector<Point>> action(k);
      for (Element e = 0; e < k; ++e) action[e] = maps[image[e]];
      out.push_back(std::move(action));
      return;
    }
    const Element a = order[depth];
    for (std::size_t c = 0; c < count; ++c) {
      image[a] = c;
      if (consistent(a)) go(depth + 1);
    }
    image[a] = kUnset;
  };
  go(0);
  return out;
}

bool bijection_suite() {
  const auto start = Clock::now();
  Outcome o;
  std::size_t msets = 0;
  for (std::size_t order = 1; order <= 4; ++order) {
    for (const auto& m : enumerate_monoids(order)) {
      const auto t = raw(*m);
      const auto ideals = oracle::left_ideals(t);
      for (std::size_t n = 1; n <= 4; ++n) {
        for (const auto& action : all_actions(*m, n)) {
          const MSet x(m, action);
          ++msets;
          // invariant subsets by filtering every subset
          std::set<Set> oracle_inv;
          for (unsigned mask = 0; mask < (1U << n); ++mask) {
            bool inv = true;
            for (Element e = 0; e < m->size() && inv; ++e) {
              for (Point p = 0; p < n && inv; ++p) {
                if (mask >> p & 1U) inv = mask >> action[e][p] & 1U;
              }
            }
            if (!inv) continue;
            Set s;
            for (Point p = 0; p < n; ++p) {
              if (mask >> p & 1U) s.insert(p);
            }
            oracle_inv.insert(s);
          }
          const auto subsets = enumerate_invariant_subsets(x);
          std::set<Set> lib_inv;
          for (const auto& j : subsets) lib_inv.insert(oracle::to_set(j));
          o.check(lib_inv == oracle_inv, "invariant subsets");

          for (const auto& j : subsets) {
            const Set js = oracle::to_set(j);
            const auto chi = characteristic_arrow(x, j);
            bool same = true;
            for (Point p = 0; p < n; ++p) {
              Set want;
              for (Element e = 0; e < m->size(); ++e) {
                if (js.count(action[e][p])) want.insert(e);
              }
              same = same && as_set(chi[p]) == want;
            }
            o.check(same, "characteristic arrow against its definition");
            o.check(classified_subset(x, chi) == j, "J -> chi -> J");
          }

          const auto arrows = enumerate_equivariant_maps(x);
          o.check(arrows.size() == oracle_inv.size(), "bijection cardinality");
          for (const auto& chi : arrows) {
            bool equivariant = true;
            for (Element e = 0; e < m->size() && equivariant; ++e) {
              for (Point p = 0; p < n && equivariant; ++p) {
                equivariant = as_set(chi[action[e][p]]) == oracle::act(t, e, as_set(chi[p]));
              }
            }
            o.check(equivariant, "enumerated arrow is equivariant");
            o.check(characteristic_arrow(x, classified_subset(x, chi)) == chi,
                    "chi -> J -> chi");
          }

          // independent count of equivariant maps where it is cheap
          std::size_t space = 1;
          for (std::size_t p = 0; p < n; ++p) space *= ideals.size();
          if (space <= 256) {
            std::size_t count = 0;
            for (std::size_t code = 0; code < space; ++code) {
              std::vector<const Set*> pick(n);
              std::size_t c = code;
              for (std::size_t p = 0; p < n; ++p) {
                pick[p] = &ideals[c % ideals.size()];
                c /= ideals.size();
              }
              bool ok = true;
              for (Element e = 0; e < m->size() && ok; ++e) {
                for (Point p = 0; p < n && ok; ++p) {
                  ok = *pick[action[e][p]] == oracle::act(t, e, *pick[p]);
                }
              }
              count += ok;
            }
            o.check(count == arrows.size(), "brute-force count of equivariant maps");
          }
        }
      }
    }
  }
  return report(2, "classification bijection", o, seconds_since(start),
                kBudgetBijection, true, std::to_string(msets) + " M-sets");
}

// ---------------------------------------------------------------- 3

std::vector<std::uint32_t> decode(std::uint32_t code, std::size_t n) {
  std::vector<std::uint32_t> f(n);
  for (std::size_t x = 0; x < n; ++x) {
    f[x] = code % n;
    code /= static_cast<std::uint32_t>(n);
  }
  return f;
}

std::uint32_t ipow(std::size_t b, std::size_t e) {
  std::uint32_t r = 1;
  while (e-- > 0) r *= static_cast<std::uint32_t>(b);
  return r;
}

Set image_of(const std::vector<std::uint32_t>& f, const ValueSet& delta) {
  Set s;
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (delta.test(x)) s.insert(f[x]);
  }
  return s;
}

bool valuation_routes() {
  const auto start = Clock::now();
  Outcome o;
  std::mt19937_64 rng(303);
  // classical: every quantity on up to three states, every Δ
  const std::vector<std::vector<double>> value_sets{{0.0}, {0.0, 1.0}, {-1.0, 0.0, 2.0}};
  for (const auto& xs : value_sets) {
    const std::size_t nx = xs.size();
    for (std::size_t ns = 1; ns <= 3; ++ns) {
      for (std::uint32_t code = 0; code < ipow(nx, ns); ++code) {
        std::vector<double> values(ns);
        std::uint32_t c = code;
        for (auto& v : values) {
          v = xs[c % nx];
          c /= static_cast<std::uint32_t>(nx);
        }
        std::vector<std::string> states;
        for (std::size_t s = 0; s < ns; ++s) states.push_back("s" + std::to_string(s));
        const ClassicalSystem sys(states, xs, {{"A", values}});
        const QuantityProduct product(sys);
        for (unsigned mask = 0; mask < (1U << nx); ++mask) {
          const ValueSet delta(nx, mask);
          for (std::size_t s = 0; s < ns; ++s) {
            const auto direct = generalized_classical_valuation(sys, s, 0, delta);
            const auto arrow = E_s_valuation(sys, s, 0, delta, &product);
            o.check(direct == arrow, "classical direct vs arrow");
            Set want;
            const auto a = sys.value(s, 0);
            for (std::uint32_t f = 0; f < ipow(nx, nx); ++f) {
              const auto map = decode(f, nx);
              if (image_of(map, delta).count(map[a])) want.insert(f);
            }
            o.check(as_set(direct) == want, "classical valuation against f(A(s)) in f(D)");
          }
        }
      }
    }
  }
  // quantum: random (state, operator, Δ) triples
  std::size_t triples = 0;
  std::uniform_int_distribution<std::size_t> dim(1, 4), nvals(1, 3);
  std::bernoulli_distribution coin;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = dim(rng);
    const auto& xs = value_sets[nvals(rng) - 1];
    std::uniform_int_distribution<std::size_t> pick(0, xs.size() - 1);
    std::vector<double> spectrum(n);
    for (auto& v : spectrum) v = xs[pick(rng)];
    const auto a = fixtures::random_hermitian(rng, spectrum);
    const QuantumSystem sys(n, xs, {{"A", a}});
    ComplexVector psi(n);
    if (coin(rng)) {
      psi = fixtures::random_vector(rng, n);
    } else {
      while (norm(psi) < 1e-3) {
        psi.assign(n, 0.0);
        for (const auto& e : sys.op(0).spectrum()) {
          if (!coin(rng)) continue;
          const auto v = e.projector.matrix() * fixtures::random_vector(rng, n);
          for (std::size_t i = 0; i < n; ++i) psi[i] += v[i];
        }
      }
    }
    const ValueSet delta(xs.size(), std::uniform_int_distribution<unsigned long>(
                                        0, (1UL << xs.size()) - 1)(rng));
    ++triples;
    const auto direct = quantum_function_valuation(sys, psi, 0, delta);
    o.check(direct == E_psi_valuation_via_arrow(sys, psi, 0, delta),
            "quantum direct vs arrow");
    // Eigen: Ê[f(A)∈f(Δ)] from the eigenvectors of A
    Eigen::SelfAdjointEigenSolver<oracle::EMatrix> es(oracle::to_eigen(a));
    const oracle::EVector unit = oracle::to_eigen(psi).normalized();
    Set want;
    for (std::uint32_t f = 0; f < ipow(xs.size(), xs.size()); ++f) {
      const auto map = decode(f, xs.size());
      const Set target = image_of(map, delta);
      oracle::EMatrix p = oracle::EMatrix::Zero(static_cast<Eigen::Index>(n),
                                                static_cast<Eigen::Index>(n));
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        std::size_t nearest = 0;
        for (std::size_t x = 1; x < xs.size(); ++x) {
          if (std::abs(xs[x] - es.eigenvalues()(i)) <
              std::abs(xs[nearest] - es.eigenvalues()(i))) {
            nearest = x;
          }
        }
        if (target.count(map[nearest])) {
          p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
        }
      }
      if ((p * unit - unit).norm() <= kFixedTol) want.insert(f);
    }
    o.check(as_set(direct) == want, "quantum valuation against Eigen");
  }
  return report(3, "direct and arrow valuations", o, seconds_since(start), 0.0,
                triples >= 200, std::to_string(triples) + " quantum triples");
}

// ---------------------------------------------------------------- 4

bool projector_ordering() {
  const auto start = Clock::now();
  Outcome o;
  std::mt19937_64 rng(404);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  std::uniform_int_distribution<int> value(-2, 2);
  std::bernoulli_distribution coin;
  for (int trial = 0; trial < 600; ++trial) {
    const std::size_t n = dim(rng);
    std::vector<double> spectrum(n);
    for (auto& v : spectrum) v = value(rng);
    const auto a = hermitian_eig(fixtures::random_hermitian(rng, spectrum));
    std::vector<double> domain = a.eigenvalues(), image, delta, f_delta;
    for (double v : domain) {
      image.push_back(value(rng));
      if (coin(rng)) {
        delta.push_back(v);
        f_delta.push_back(image.back());
      }
    }
    const auto fa = apply_function(a, domain, image);
    const auto e = spectral_projector(a, delta).matrix();
    const auto ef = spectral_projector(fa, f_delta).matrix();
    o.check(max_abs_diff(e * ef, e) <= kOrderingTol, "E[A in D] E[f(A) in f(D)] = E[A in D]");
    o.check(max_abs_diff(ef * e, e) <= kOrderingTol, "E[f(A) in f(D)] E[A in D] = E[A in D]");
    // Eigen cross-check of Ê[A∈Δ]
    Eigen::SelfAdjointEigenSolver<oracle::EMatrix> es(oracle::to_eigen(a.matrix()));
    oracle::EMatrix p = oracle::EMatrix::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      for (double d : delta) {
        if (std::abs(es.eigenvalues()(i) - d) < 1e-6) {
          p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
          break;
        }
      }
    }
    o.check((p - oracle::to_eigen(e)).cwiseAbs().maxCoeff() <= kOrderingTol,
            "spectral projector against Eigen");
  }
  return report(4, "projector ordering", o, seconds_since(start));
}

// ---------------------------------------------------------------- 5

oracle::EMatrix reduce_eigen(const ReductionTable& t, const ProjString& q) {
  const auto n = static_cast<Eigen::Index>(t.alphabet().dim());
  oracle::EMatrix m = oracle::EMatrix::Identity(n, n);
  for (Letter l : q.letters()) m = m * oracle::to_eigen(t.alphabet().matrix(l));
  return m;
}

bool oracle_in_image(const oracle::EMatrix& q, const oracle::EMatrix& k,
                     const oracle::EVector& v) {
  return oracle::in_span(q * k, q * v, kRankThreshold);
}

ReductionTable random_table(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::size_t> letters(1, 3), rank(1, n - 1);
  std::vector<std::pair<std::string, ComplexMatrix>> ls;
  for (std::size_t i = letters(rng); ls.size() < i;) {
    ls.emplace_back("P" + std::to_string(ls.size()),
                    fixtures::random_projector(rng, n, rank(rng)));
  }
  return ReductionTable(std::make_shared<const Alphabet>(std::move(ls)));
}

bool certificates() {
  const auto start = Clock::now();
  Outcome o;
  constexpr std::size_t kDepth = 4;
  std::mt19937_64 rng(505);
  std::bernoulli_distribution coin;
  std::size_t fixtures_done = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 2 + trial % 2;
    const auto t = trial % 3 == 0 ? random_table(rng, n)
                                  : fixtures::structured_table(rng, n);
    const auto rays = fixtures::structured_rays(rng, n, 3);
    const auto psi = rays.rays()[0].representative();
    const auto phi = rays.rays()[rays.size() > 1 ? 1 : 0].representative();
    std::vector<ComplexVector> kvecs{fixtures::random_vector(rng, n)};
    if (n == 3 && coin(rng)) kvecs.push_back(rays.rays().back().representative());
    const auto k = Subspace::span(kvecs, n);
    const auto rho_in = ComplexMatrix::outer(psi, psi) +
                        ComplexMatrix::outer(phi, phi) * Complex(0.5);
    const DensityMatrix rho(rho_in);
    ++fixtures_done;

    const oracle::EMatrix kb = oracle::columns(kvecs, n);
    const oracle::EVector ps = oracle::to_eigen(psi).normalized();
    const oracle::EVector ph = oracle::to_eigen(phi).normalized();
    const auto kdim = oracle::rank(kb, kRankThreshold);
    auto vector_oracle = [&](const oracle::EMatrix& q) {
      return oracle_in_image(q, kb, ps);
    };
    auto ray_oracle = [&](const oracle::EMatrix& q) {
      if ((q * ps).norm() > kRankThreshold) return oracle_in_image(q, kb, ps);
      return oracle::rank(q * kb, kRankThreshold) < kdim;
    };
    auto equal_oracle = [&](const oracle::EMatrix& q) {
      const bool a0 = (q * ps).norm() <= kRankThreshold;
      const bool b0 = (q * ph).norm() <= kRankThreshold;
      if (a0 || b0) return a0 && b0;
      oracle::EMatrix pair(q.rows(), 2);
      pair << q * ps, q * ph;
      return oracle::rank(pair, kRankThreshold) == 1;
    };
    auto density_oracle = [&](const oracle::EMatrix& q) {
      for (std::size_t i = 0; i < rho.vectors().size(); ++i) {
        if (!oracle_in_image(q, kb, oracle::to_eigen(rho.vectors()[i]))) return false;
      }
      return true;
    };
    const std::array<std::pair<BoundedIdeal, std::function<bool(const oracle::EMatrix&)>>, 4>
        valuations{{{valuation_vector(t, psi, k, kDepth), vector_oracle},
                    {valuation_ray(t, psi, k, kDepth), ray_oracle},
                    {valuation_density(t, rho, k, kDepth), density_oracle},
                    {truth_ray_equal_SP(t, psi, phi, kDepth), equal_oracle}}};
    const auto strings = enumerate_strings(t.alphabet().size(), kDepth);
    for (const auto& [ideal, want] : valuations) {
      o.check(ideal.certificate().ok() && ideal.max_verified_length() == kDepth,
              "certificate reports a violation");
      const auto& flags = ideal.membership();
      bool closed = true, agrees = true;
      for (std::size_t i = 0; i < strings.size(); ++i) {
        agrees = agrees && flags[i] == want(reduce_eigen(t, strings[i]));
        if (!flags[i] || strings[i].length() == kDepth) continue;
        for (Letter l = 0; l < t.alphabet().size(); ++l) {
          const auto ext = string_concat(ProjString({l}), strings[i]);
          closed = closed && flags[string_index(ext, t.alphabet().size())];
        }
      }
      o.check(closed, "membership flags not closed under left extension");
      o.check(agrees, "membership differs from the Eigen oracle");
    }
  }
  return report(5, "ideal certificates", o, seconds_since(start), kBudgetCertificates,
                fixtures_done >= 100, std::to_string(fixtures_done) + " fixtures");
}

// ---------------------------------------------------------------- 6

bool presheaf_and_sieves() {
  const auto start = Clock::now();
  Outcome o;
  std::mt19937_64 rng(606);
  std::size_t sieves = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + trial % 2;
    const auto t = fixtures::structured_table(rng, n);
    const StringUniverse u(t, 4);
    const auto rays = fixtures::structured_rays(rng, n, 2);
    const auto psi = fixtures::random_vector(rng, n);
    const auto phi = rays.rays()[0].representative();
    const auto k = Subspace::span({phi}, n);

    // coincidence of the ray valuation on span(φ) with ray equality
    o.check(valuation_ray(t, psi, k, 4).membership() ==
                truth_ray_equal_SP(t, psi, phi, 4).membership(),
            "valuation_ray on span(phi) vs ray equality");

    for (const auto& q : u.members()) {
      // presheaf functoriality on a vector of R(Q)
      ComplexVector v = t.reduce(q) * fixtures::random_vector(rng, n);
      if (presheaf_at(t, q, v)) {
        const auto arrows = arrows_out(t, q);
        for (const auto& a : arrows) {
          const auto once = presheaf_restrict(t, a, v);
          o.check(presheaf_at(t, a.target, once), "restriction leaves R(target)");
          const oracle::EVector want = reduce_eigen(t, a.tail) * oracle::to_eigen(v);
          o.check((oracle::to_eigen(once) - want).norm() <= kFunctorTol,
                  "restriction against Eigen");
          if (a.tail.empty()) {
            o.check(norm(subtract(once, v)) <= kFunctorTol, "identity arrow");
          }
          for (const auto& b : arrows_out(t, a.target)) {
            const auto twice = presheaf_restrict(t, b, once);
            const auto direct = presheaf_restrict(t, compose(a, b), v);
            o.check(norm(subtract(twice, direct)) <= kFunctorTol, "composition");
          }
        }
      }
      // sieves
      if (!presheaf_at(t, q, psi) || !presheaf_at(t, q, phi)) continue;
      const auto se = sieve_truth_equal(t, psi, phi, q);
      const auto sv = sieve_valuation(t, psi, k, q);
      ++sieves;
      o.check(se == sv, "sieve valuation vs sieve equality");
      for (const auto* s : {&se, &sv}) {
        const auto lens = s->included_tail_lengths();
        bool segment = true;
        for (std::size_t i = 0; i < lens.size(); ++i) {
          segment = segment && lens[i] == q.length() - lens.size() + 1 + i;
        }
        o.check(segment, "sieve is not a final segment");
        for (std::size_t len = 0; len <= q.length(); ++len) {
          const auto r = reduce_eigen(t, q.tail(len));
          oracle::EMatrix pair(r.rows(), 2);
          pair << r * oracle::to_eigen(psi), r * oracle::to_eigen(phi);
          const bool equal = oracle::rank(pair, kRankThreshold) <= 1;
          o.check(s->includes(len) == equal, "sieve tail against Eigen");
        }
      }
    }
  }
  return report(6, "presheaf and sieves", o, seconds_since(start), 0.0, sieves > 0,
                std::to_string(sieves) + " sieves");
}

// ---------------------------------------------------------------- 7

bool galois_suite() {
  const auto start = Clock::now();
  Outcome o;
  std::mt19937_64 rng(707);
  std::uniform_int_distribution<std::size_t> vsize(4, 20);
  std::bernoulli_distribution coin;
  std::size_t cases = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 2 + trial % 2;
    const auto t = fixtures::structured_table(rng, n);
    const StringUniverse u(t, 3);
    const auto v = fixtures::structured_rays(rng, n, vsize(rng));
    const GaloisContext g(u, v);
    const std::size_t ns = u.size(), nv = v.size();

    std::vector<std::vector<bool>> rel(ns, std::vector<bool>(nv));
    for (std::size_t q = 0; q < ns; ++q) {
      const auto r = reduce_eigen(t, u.members()[q]);
      for (std::size_t j = 0; j < nv; ++j) {
        rel[q][j] = (r * oracle::to_eigen(v.rays()[j].representative())).norm() >
                    kRankThreshold;
        o.check(g.related(q, j) == rel[q][j], "relation against Eigen");
      }
    }
    auto polar_xi = [&](const RaySelection& xi) {
      StringSelection out(ns);
      for (std::size_t q = 0; q < ns; ++q) {
        bool all = true;
        for (std::size_t j = 0; j < nv; ++j) all = all && (!xi.test(j) || rel[q][j]);
        out[q] = all;
      }
      return out;
    };
    auto polar_j = [&](const StringSelection& js) {
      RaySelection out(nv);
      for (std::size_t j = 0; j < nv; ++j) {
        bool all = true;
        for (std::size_t q = 0; q < ns; ++q) all = all && (!js.test(q) || rel[q][j]);
        out[j] = all;
      }
      return out;
    };
    for (int draw = 0; draw < 4; ++draw, ++cases) {
      RaySelection x1(nv), x2(nv);
      StringSelection j1(ns), j2(ns);
      for (std::size_t j = 0; j < nv; ++j) {
        x1[j] = coin(rng) && coin(rng);
        x2[j] = x1[j] || coin(rng);
      }
      for (std::size_t q = 0; q < ns; ++q) {
        j1[q] = coin(rng) && coin(rng);
        j2[q] = j1[q] || coin(rng);
      }
      o.check(g.polar_of_rays(x1) == polar_xi(x1), "ray polar against the relation");
      o.check(g.polar_of_strings(j1) == polar_j(j1), "string polar against the relation");
      o.check(g.polar_of_rays(x2).is_subset_of(g.polar_of_rays(x1)), "antitone on rays");
      o.check(g.polar_of_strings(j2).is_subset_of(g.polar_of_strings(j1)),
              "antitone on strings");
      o.check(x1.is_subset_of(g.polar_of_strings(g.polar_of_rays(x1))), "extensive on rays");
      o.check(j1.is_subset_of(g.polar_of_rays(g.polar_of_strings(j1))),
              "extensive on strings");
      const auto j0 = g.polar_of_strings(j1);
      o.check(j0 == g.polar_of_strings(g.polar_of_rays(j0)), "J0 = J000");
      o.check(g.is_full(j0), "polar is full");
      o.check(g.closure_rays(x1) == polar_j(polar_xi(x1)), "closure against the relation");
    }
  }
  return report(7, "Galois suite", o, seconds_since(start), 0.0, cases >= 100,
                std::to_string(cases) + " cases");
}

// ---------------------------------------------------------------- 8

struct Run {
  int exit_code = -1;
  std::string out;
};

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// fork/exec rather than a shell: arguments contain ( and {.
Run run_tool(const std::vector<std::string>& args) {
  int fds[2];
  if (pipe(fds) != 0) return {};
  const pid_t pid = fork();
  if (pid == 0) {
    dup2(fds[1], STDOUT_FILENO);
    close(fds[0]);
    close(fds[1]);
    if (chdir(MTOPOS_SOURCE_DIR) != 0) _exit(127);
    std::vector<char*> argv{const_cast<char*>(MTOPOS_TOOL)};
    for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    execv(MTOPOS_TOOL, argv.data());
    _exit(127);
  }
  close(fds[1]);
  Run r;
  std::array<char, 4096> buf;
  for (ssize_t got; (got = read(fds[0], buf.data(), buf.size())) > 0;) {
    r.out.append(buf.data(), static_cast<std::size_t>(got));
  }
  close(fds[0]);
  int status = 0;
  waitpid(pid, &status, 0);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool determinism() {
  const auto start = Clock::now();
  Outcome o;
  {
    const auto a = run_selftest(1), b = run_selftest(1);
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) {
      same = a[i].name == b[i].name && a[i].cases == b[i].cases &&
             a[i].failures == b[i].failures;
      o.check(a[i].passed(), "selftest check " + a[i].name);
    }
    o.check(same, "in-process selftest repeat differs");
  }
  const std::string golden = std::string(MTOPOS_SOURCE_DIR) + "/tests/golden/";
  std::ifstream cases(golden + "cases.txt");
  std::size_t count = 0;
  for (std::string line; std::getline(cases, line);) {
    if (line.empty() || line[0] == '#') continue;
    auto words = split_words(line);
    if (words.size() < 2) continue;
    const std::string name = words[0];
    const int exit_code = std::stoi(words[1]);
    const std::vector<std::string> args(words.begin() + 2, words.end());
    const auto first = run_tool(args), second = run_tool(args);
    ++count;
    o.check(first.out == second.out && first.exit_code == second.exit_code,
            name + ": two runs differ");
    o.check(first.exit_code == exit_code, name + ": exit code " +
                                              std::to_string(first.exit_code));
    o.check(first.out == slurp(golden + name + ".json"), name + ": differs from golden");
  }
  return report(8, "determinism and goldens", o, seconds_since(start), 0.0, count > 0,
                std::to_string(count) + " CLI cases run twice");
}

}  // namespace

int main() {
  bool ok = true;
  ok &= heyting_suite();
  ok &= bijection_suite();
  ok &= valuation_routes();
  ok &= projector_ordering();
  ok &= certificates();
  ok &= presheaf_and_sieves();
  ok &= galois_suite();
  ok &= determinism();
  return ok ? 0 : 1;
}
