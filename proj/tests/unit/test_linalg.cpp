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

#include "doctest.h"
#include "mtopos/error.hpp"
#include "mtopos/linalg.hpp"
#include "support/context_fixtures.hpp"
#include "support/eigen_oracle.hpp"
#include "support/quantum_fixtures.hpp"

using namespace mtopos;
using fixtures::pauli_x;
using fixtures::pauli_z;
using fixtures::proj_plus;
using fixtures::proj_up;

namespace {

const TolerancePolicy kTol;

// Closed-form spectrum of a 2x2 Hermitian matrix: eigenvalues ascending
// and the projector onto each, P_λ = (A - μ) / (λ - μ).
struct TwoByTwo {
  double lo, hi;
  ComplexMatrix p_lo, p_hi;
};

TwoByTwo analytic(const ComplexMatrix& a) {
  const double m = (a(0, 0).real() + a(1, 1).real()) / 2;
  const double d = (a(0, 0).real() - a(1, 1).real()) / 2;
  const double r = std::sqrt(d * d + std::norm(a(0, 1)));
  TwoByTwo out{m - r, m + r, {}, {}};
  auto id = ComplexMatrix::identity(2);
  out.p_lo = (a - id * Complex(out.hi)) * Complex(1.0 / (out.lo - out.hi));
  out.p_hi = (a - id * Complex(out.lo)) * Complex(1.0 / (out.hi - out.lo));
  return out;
}

ComplexMatrix reconstruct(const HermitianOperator& a) {
  ComplexMatrix s = ComplexMatrix::zero(a.dim());
  for (const auto& e : a.spectrum()) s += e.projector.matrix() * Complex(e.value);
  return s;
}

}  // namespace

TEST_CASE("tolerance policy validation") {
  CHECK_NOTHROW(kTol.validate());
  CHECK_THROWS_AS((TolerancePolicy{0.0, 1e-9}.validate()), ValidationError);
  CHECK_THROWS_AS((TolerancePolicy{1e-9, -1.0}.validate()), ValidationError);
}

TEST_CASE("matrix basics") {
  ComplexMatrix a({{1.0, Complex(0, 2)}, {3.0, 4.0}});
  CHECK(a.adjoint()(0, 1) == Complex(3.0));
  CHECK(a.adjoint()(1, 0) == Complex(0, -2));
  CHECK(a.trace() == Complex(5.0));
  CHECK((a * ComplexMatrix::identity(2)) == a);
  CHECK_THROWS_AS(ComplexMatrix({{1.0}, {1.0, 2.0}}), ValidationError);
  CHECK_THROWS_AS(a * ComplexMatrix::identity(3), UsageError);
  CHECK(inner({Complex(0, 1)}, {Complex(0, 1)}) == Complex(1.0));
}

TEST_CASE("diagonal and degenerate spectra") {
  auto d = hermitian_eig(proj_up());
  REQUIRE(d.spectrum().size() == 2);
  CHECK(d.spectrum()[0].value == doctest::Approx(0.0));
  CHECK(approx_equal(d.spectrum()[0].projector.matrix(),
                     ComplexMatrix({{0.0, 0.0}, {0.0, 1.0}}), 1e-12));
  CHECK(d.spectrum()[1].value == doctest::Approx(1.0));
  CHECK(approx_equal(d.spectrum()[1].projector.matrix(), proj_up(), 1e-12));

  auto id = hermitian_eig(ComplexMatrix::identity(3));
  REQUIRE(id.spectrum().size() == 1);
  CHECK(id.spectrum()[0].value == doctest::Approx(1.0));
  CHECK(approx_equal(id.spectrum()[0].projector.matrix(),
                     ComplexMatrix::identity(3), 1e-12));
}

TEST_CASE("sigma_x against the closed form") {
  auto a = hermitian_eig(pauli_x());
  REQUIRE(a.spectrum().size() == 2);
  auto half = Complex(0.5);
  auto id = ComplexMatrix::identity(2);
  CHECK(a.spectrum()[0].value == doctest::Approx(-1.0));
  CHECK(approx_equal(a.spectrum()[0].projector.matrix(),
                     (id - pauli_x()) * half, 1e-12));
  CHECK(a.spectrum()[1].value == doctest::Approx(1.0));
  CHECK(approx_equal(a.spectrum()[1].projector.matrix(),
                     (id + pauli_x()) * half, 1e-12));
}

TEST_CASE("random 2x2 against the closed form") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    const Complex b(g(rng), g(rng));
    ComplexMatrix a({{g(rng), b}, {std::conj(b), g(rng)}});
    auto want = analytic(a);
    auto got = hermitian_eig(a);
    REQUIRE(got.spectrum().size() == 2);
    CHECK(std::abs(got.spectrum()[0].value - want.lo) < 1e-12);
    CHECK(std::abs(got.spectrum()[1].value - want.hi) < 1e-12);
    CHECK(approx_equal(got.spectrum()[0].projector.matrix(), want.p_lo, 1e-10));
    CHECK(approx_equal(got.spectrum()[1].projector.matrix(), want.p_hi, 1e-10));
  }
}

TEST_CASE("reconstruction and projector invariants on random matrices") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  for (std::size_t n = 1; n <= 8; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      ComplexMatrix a(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = g(rng);
        for (std::size_t j = i + 1; j < n; ++j) {
          a(i, j) = Complex(g(rng), g(rng));
          a(j, i) = std::conj(a(i, j));
        }
      }
      auto h = hermitian_eig(a);
      const double bound = 10 * kTol.eps * a.frobenius_norm();
      CHECK(max_abs_diff(reconstruct(h), a) <= bound);
      ComplexMatrix sum = ComplexMatrix::zero(n);
      for (std::size_t i = 0; i < h.spectrum().size(); ++i) {
        const auto& p = h.spectrum()[i].projector.matrix();
        CHECK(is_projector(p));
        sum += p;
        for (std::size_t j = i + 1; j < h.spectrum().size(); ++j) {
          CHECK((p * h.spectrum()[j].projector.matrix()).max_abs() < 1e-10);
        }
      }
      CHECK(approx_equal(sum, ComplexMatrix::identity(n), 1e-10));
    }
  }
}

TEST_CASE("prescribed spectra with degeneracy are recovered and snapped") {
  std::mt19937_64 rng(29);
  const std::vector<double> values{-1.0, 0.5, 0.5, 2.0, 2.0, 2.0};
  const std::vector<double> x{-1.0, 0.5, 2.0};
  for (int trial = 0; trial < 20; ++trial) {
    auto a = fixtures::random_hermitian(rng, values);
    auto h = hermitian_eig(a, kTol, &x);
    REQUIRE(h.eigenvalues() == x);  // exact after snapping
    CHECK(h.spectrum()[1].space.dim() == 2);
    CHECK(h.spectrum()[2].space.dim() == 3);
  }
}

TEST_CASE("eigensolver rejects bad input") {
  CHECK_THROWS_AS(hermitian_eig(ComplexMatrix({{0.0, 1.0}, {0.0, 0.0}})),
                  ValidationError);
  CHECK_THROWS_AS(hermitian_eig(ComplexMatrix(2, 3)), ValidationError);
}

TEST_CASE("spectral projectors") {
  auto z = hermitian_eig(pauli_z());
  CHECK(approx_equal(spectral_projector(z, {1.0}).matrix(), proj_up(), 1e-12));
  CHECK(approx_equal(spectral_projector(z, {1.0, -1.0}).matrix(),
                     ComplexMatrix::identity(2), 1e-12));
  CHECK(spectral_projector(z, {3.0}).matrix().max_abs() == 0.0);
  CHECK(spectral_projector(z, {}).matrix().max_abs() == 0.0);
}

TEST_CASE("functions of operators") {
  auto z = hermitian_eig(pauli_z());
  auto same = apply_function(z, [](double x) { return std::optional(x); });
  CHECK(approx_equal(same.matrix(), pauli_z(), 1e-12));
  auto c = apply_function(z, [](double) { return std::optional(3.0); });
  CHECK(approx_equal(c.matrix(), ComplexMatrix::identity(2) * Complex(3.0),
                     1e-12));
  REQUIRE(c.spectrum().size() == 1);
  auto sq = apply_function(z, {-1.0, 1.0}, {1.0, 1.0});
  CHECK(approx_equal(sq.matrix(), ComplexMatrix::identity(2), 1e-12));
  CHECK_THROWS_AS(apply_function(z, {1.0}, {0.0}), DomainError);
}

TEST_CASE("projector ordering under functions of operators") {
  // Ê[A∈Δ] Ê[f(A)∈f(Δ)] = Ê[A∈Δ]
  std::mt19937_64 rng(31);
  const std::vector<double> x{-1.0, 0.0, 1.0};
  std::uniform_int_distribution<std::size_t> pick(0, 2);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> values(dim(rng));
    for (auto& v : values) v = x[pick(rng)];
    auto a = hermitian_eig(fixtures::random_hermitian(rng, values), kTol, &x);
    std::vector<double> delta, image(3), f_delta;
    for (double v : x) {
      if (pick(rng) == 0) delta.push_back(v);
    }
    for (auto& y : image) y = x[pick(rng)];
    for (double d : delta) {
      f_delta.push_back(image[static_cast<std::size_t>(d + 1.0)]);
    }
    auto fa = apply_function(a, x, image);
    auto e = spectral_projector(a, delta).matrix();
    auto ef = spectral_projector(fa, f_delta).matrix();
    CHECK(max_abs_diff(e * ef, e) <= 1e-8);
  }
}

TEST_CASE("image subspaces") {
  const std::size_t n = 2;
  auto e1 = Subspace::span({basis_vector(n, 0)}, n);
  CHECK(subspace_equal(image_subspace(ComplexMatrix::identity(n), e1), e1));
  CHECK(image_subspace(ComplexMatrix::zero(n), e1).dim() == 0);
  auto plus = image_subspace(proj_plus(), e1);
  REQUIRE(plus.dim() == 1);
  const double h = 1 / std::sqrt(2.0);
  CHECK(ray_equal(plus.basis()[0], {h, h}));
  CHECK(in_subspace({0.0, 0.0}, Subspace::zero(n)));
  CHECK(in_subspace(basis_vector(n, 0), e1));
  CHECK_FALSE(in_subspace(basis_vector(n, 0), plus));
  CHECK(norm(plus.residual(basis_vector(n, 0))) ==
        doctest::Approx(1 / std::sqrt(2.0)));
}

TEST_CASE("image of a product is the image of the image") {
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<std::size_t> dim(2, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = dim(rng);
    std::uniform_int_distribution<std::size_t> rank(0, n);
    auto a = fixtures::random_projector(rng, n, rank(rng));
    auto b = fixtures::random_projector(rng, n, rank(rng));
    auto k = Subspace::span(fixtures::random_orthonormal(rng, n, rank(rng)), n);
    CHECK(subspace_equal(image_subspace(a * b, k),
                         image_subspace(a, image_subspace(b, k))));
    auto img = image_subspace(a * b, k);
    CHECK(img.dim() <= k.dim());
    // projectors are contractions
    auto v = fixtures::random_vector(rng, n);
    CHECK(norm(a * v) <= norm(v) * (1 + kTol.eps));
  }
}

TEST_CASE("singular values") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    auto a = fixtures::random_hermitian(rng, {3.0, -2.0, 0.5, 0.0});
    auto d = svd(a);
    REQUIRE(d.values.size() == 4);
    CHECK(d.values[0] == doctest::Approx(3.0));
    CHECK(d.values[1] == doctest::Approx(2.0));
    CHECK(d.values[2] == doctest::Approx(0.5));
    CHECK(d.values[3] < 1e-12);
    CHECK(operator_norm(a) == doctest::Approx(3.0));
    for (std::size_t i = 0; i < 3; ++i) {
      auto av = a * d.right[i];
      CHECK(norm(subtract(av, scaled(d.left[i], d.values[i]))) < 1e-10);
    }
  }
  CHECK(operator_norm(proj_up() * ComplexMatrix({{0.0, 0.0}, {0.0, 1.0}})) ==
        0.0);
}

TEST_CASE("rays") {
  const ComplexVector psi{Complex(0.6, 0), Complex(0, 0.8)};
  CHECK(ray_equal(psi, scaled(psi, Complex(0, 1))));
  CHECK_FALSE(ray_equal(basis_vector(2, 0), basis_vector(2, 1)));
  CHECK(ray_equal({1.0, 1.0}, {2.0, 2.0}));
  CHECK_THROWS_AS(ray_equal({0.0, 0.0}, {1.0, 0.0}), PreconditionError);
  auto r = Ray::of(scaled(psi, Complex(0, -3)));
  CHECK(norm(r.representative()) == doctest::Approx(1.0));
  CHECK(r.representative()[1].imag() == doctest::Approx(0.0));
  CHECK(r.representative()[1].real() > 0);
  auto zero = ExtendedRay::from_vector(proj_up() * basis_vector(2, 1));
  CHECK(zero.is_zero());
  CHECK(extended_ray_equal(zero, ExtendedRay::zero()));
  CHECK_FALSE(extended_ray_equal(zero, ExtendedRay::of(r)));
  CHECK_THROWS_AS(zero.ray(), PreconditionError);
}

TEST_CASE("projector validation") {
  CHECK_NOTHROW(Projector{proj_plus()});
  CHECK_THROWS_AS(Projector{pauli_x()}, ValidationError);
  CHECK(Projector(proj_plus()).rank() == 1);
}

TEST_CASE("eigenvalues and ranks against Eigen") {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> g;
  for (std::size_t n = 2; n <= 8; ++n) {
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      a(i, i) = g(rng);
      for (std::size_t j = i + 1; j < n; ++j) {
        a(i, j) = Complex(g(rng), g(rng));
        a(j, i) = std::conj(a(i, j));
      }
    }
    Eigen::SelfAdjointEigenSolver<oracle::EMatrix> es(oracle::to_eigen(a));
    auto got = hermitian_eig(a).eigenvalues();
    REQUIRE(got.size() == n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(got[i] - es.eigenvalues()(static_cast<Eigen::Index>(i))) <
            1e-10);
    }
    std::uniform_int_distribution<std::size_t> rank(0, n);
    auto p = fixtures::random_projector(rng, n, rank(rng));
    auto q = fixtures::random_projector(rng, n, rank(rng));
    auto pq = p * q;
    CHECK(static_cast<Eigen::Index>(
              image_subspace(pq, Subspace::full(n)).dim()) ==
          oracle::rank(oracle::to_eigen(pq), 1e-9));
  }
}

TEST_CASE("singular values of products of structured projectors") {
  // exact zeros mixed with Fourier phases leave rounding-level columns
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 4;
    auto t = fixtures::structured_table(rng, n);
    ComplexMatrix prod = ComplexMatrix::identity(n);
    for (std::size_t l = 0; l < 4; ++l) {
      prod = prod * t.alphabet().matrix(static_cast<Letter>(l % t.alphabet().size()));
    }
    const auto s = svd(prod);
    Eigen::JacobiSVD<oracle::EMatrix> ref(oracle::to_eigen(prod));
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(s.values[i] - ref.singularValues()(Eigen::Index(i))) <= 1e-10);
    }
  }
}
