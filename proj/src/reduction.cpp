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

#include "mtopos/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "mtopos/error.hpp"

namespace mtopos {

namespace {

std::vector<std::string> letter_names(
    const std::vector<std::pair<std::string, ComplexMatrix>>& letters) {
  std::vector<std::string> out;
  for (const auto& [name, m] : letters) out.push_back(name);
  return out;
}

}  // namespace

Alphabet::Alphabet(std::vector<std::pair<std::string, ComplexMatrix>> letters,
                   AlphabetKind kind, const TolerancePolicy& tol)
    : kind_(kind), strings_(letter_names(letters)) {
  for (std::size_t i = 0; i < letters.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (letters[i].first == letters[j].first) {
        throw ValidationError("letter '" + letters[i].first +
                              "' declared twice");
      }
    }
  }
  for (auto& [name, m] : letters) {
    if (!m.square() || m.rows() == 0) {
      throw ValidationError("letter '" + name + "' is not a square matrix");
    }
    if (dim_ == 0) dim_ = m.rows();
    if (m.rows() != dim_) {
      throw ValidationError("letter '" + name + "' has dimension " +
                            std::to_string(m.rows()) + ", expected " +
                            std::to_string(dim_));
    }
    if (kind_ == AlphabetKind::projector && !is_projector(m, tol)) {
      throw ValidationError("letter '" + name + "' is not a projector");
    }
    if (kind_ == AlphabetKind::hermitian &&
        max_abs_diff(m, m.adjoint()) > tol.eps * std::max(1.0, m.max_abs())) {
      throw ValidationError("letter '" + name + "' is not Hermitian");
    }
    matrices_.push_back(std::move(m));
  }
}

const ComplexMatrix& Alphabet::matrix(Letter l) const {
  if (l >= matrices_.size()) {
    throw LookupError("letter " + std::to_string(l) + " not in the alphabet");
  }
  return matrices_[l];
}

ComplexMatrix reduce(const Alphabet& alphabet, const ProjString& q) {
  ComplexMatrix out = ComplexMatrix::identity(alphabet.dim());
  for (std::size_t i = q.length(); i-- > 0;) {
    out = alphabet.matrix(q[i]) * out;
  }
  return out;
}

struct ReductionTable::Cache {
  std::mutex mutex;
  std::map<ProjString, ComplexMatrix> memo;
};

ReductionTable::ReductionTable(std::shared_ptr<const Alphabet> alphabet,
                               TolerancePolicy tol)
    : alphabet_(std::move(alphabet)), tol_(tol),
      cache_(std::make_shared<Cache>()) {
  tol_.validate();
}

ComplexMatrix ReductionTable::reduce(const ProjString& q) const {
  std::lock_guard lock(cache_->mutex);
  auto& memo = cache_->memo;
  if (auto it = memo.find(q); it != memo.end()) return it->second;
  // longest cached suffix, then multiply the remaining letters on the left
  std::size_t k = q.length();
  ComplexMatrix acc = ComplexMatrix::identity(alphabet_->dim());
  for (; k > 0; --k) {
    if (auto it = memo.find(q.tail(k)); it != memo.end()) {
      acc = it->second;
      break;
    }
  }
  for (std::size_t i = q.length() - k; i-- > 0;) {
    acc = alphabet_->matrix(q[i]) * acc;
    memo.emplace(q.tail(q.length() - i), acc);
  }
  return acc;
}

ExtendedRay act_on_ray(const ComplexMatrix& a, const ExtendedRay& r,
                       const TolerancePolicy& tol) {
  if (r.is_zero()) return r;
  return ExtendedRay::from_vector(a * r.ray().representative(), tol);
}

ComplexVector normalized_reduction(const ReductionTable& table,
                                   const ComplexVector& psi,
                                   const ProjString& q) {
  auto v = table.reduce(q) * psi;
  const double n = norm(v);
  if (n <= table.tolerance().null_threshold) {
    throw NullReduction("string annihilates the state");
  }
  return scaled(v, 1.0 / n);
}

DensityMatrix::DensityMatrix(const ComplexMatrix& m,
                             const TolerancePolicy& tol) {
  auto h = hermitian_eig(m, tol);  // validates shape and Hermiticity
  const double scale = std::max(1.0, m.max_abs());
  double trace = 0.0;
  for (const auto& e : h.spectrum()) {
    if (e.value < -tol.eps * scale) {
      throw ValidationError("density matrix has a negative eigenvalue");
    }
    trace += std::max(e.value, 0.0) * static_cast<double>(e.space.dim());
  }
  if (trace <= tol.null_threshold) {
    throw ValidationError("density matrix has zero trace");
  }
  matrix_ = m * Complex(1.0 / trace);
  for (const auto& e : h.spectrum()) {
    if (e.value <= 0.0) continue;
    for (const auto& v : e.space.basis()) {
      weights_.push_back(e.value / trace);
      vectors_.push_back(v);
    }
  }
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi,
                                  const TolerancePolicy& tol) {
  const double n = norm(psi);
  if (n <= tol.null_threshold) {
    throw ValidationError("pure state needs a non-null vector");
  }
  auto unit = scaled(psi, 1.0 / n);
  DensityMatrix rho(ComplexMatrix::outer(unit, unit), tol);
  rho.weights_ = {1.0};
  rho.vectors_ = {unit};
  return rho;
}

DensityMatrix reduce_density(const ComplexMatrix& q, const DensityMatrix& rho,
                             const TolerancePolicy& tol) {
  auto m = q * rho.matrix() * q.adjoint();
  if (std::abs(m.trace()) <= tol.null_threshold * tol.null_threshold) {
    throw NullReduction("string annihilates the state");
  }
  return DensityMatrix(m, tol);
}

namespace {

void require_projectors(const ReductionTable& t) {
  if (t.alphabet().kind() != AlphabetKind::projector) {
    throw UsageError("valuations need a projector alphabet");
  }
}

ComplexVector unit_state(const ReductionTable& t, const ComplexVector& psi) {
  if (psi.size() != t.alphabet().dim()) {
    throw UsageError("state has the wrong dimension");
  }
  const double n = norm(psi);
  if (n <= t.tolerance().null_threshold) {
    throw PreconditionError("state vector is null");
  }
  return scaled(psi, 1.0 / n);
}

void check_subspace(const ReductionTable& t, const Subspace& k) {
  if (k.ambient() != t.alphabet().dim()) {
    throw UsageError("subspace has the wrong dimension");
  }
}

bool vector_test(const ReductionTable& t, const ComplexVector& unit,
                 const Subspace& k, const ProjString& q) {
  const auto r = t.reduce(q);
  const auto v = r * unit;
  const auto img = image_subspace(r, k, t.tolerance());
  return norm(img.residual(v)) <=
         t.tolerance().null_threshold * std::max(norm(v), 1.0);
}

bool ray_test(const ReductionTable& t, const ComplexVector& unit,
              const Subspace& k, const ProjString& q) {
  const auto r = t.reduce(q);
  if (norm(r * unit) > t.tolerance().null_threshold) {
    return vector_test(t, unit, k, q);
  }
  return image_subspace(r, k, t.tolerance()).dim() < k.dim();
}

bool ray_equal_test(const ReductionTable& t, const ComplexVector& a,
                    const ComplexVector& b, const ProjString& q) {
  const auto r = t.reduce(q);
  const auto ea = ExtendedRay::from_vector(r * a, t.tolerance());
  const auto eb = ExtendedRay::from_vector(r * b, t.tolerance());
  return extended_ray_equal(ea, eb, t.tolerance());
}

bool density_test(const ReductionTable& t, const DensityMatrix& rho,
                  const Subspace& k, const ProjString& q) {
  const auto r = t.reduce(q);
  const auto img = image_subspace(r, k, t.tolerance());
  double diff = 0.0;
  double trace = 0.0;
  for (std::size_t i = 0; i < rho.weights().size(); ++i) {
    const auto v = r * rho.vectors()[i];
    const double res = norm(img.residual(v));
    diff += rho.weights()[i] * res * res;
    const double len = norm(v);
    trace += rho.weights()[i] * len * len;
  }
  return std::sqrt(diff) <=
         t.tolerance().null_threshold * std::max(std::sqrt(trace), 1.0);
}

}  // namespace

bool vector_member(const ReductionTable& t, const ComplexVector& psi,
                   const Subspace& k, const ProjString& q) {
  check_subspace(t, k);
  return vector_test(t, unit_state(t, psi), k, q);
}

bool ray_member(const ReductionTable& t, const ComplexVector& psi,
                const Subspace& k, const ProjString& q) {
  check_subspace(t, k);
  return ray_test(t, unit_state(t, psi), k, q);
}

bool ray_equal_member(const ReductionTable& t, const ComplexVector& psi,
                      const ComplexVector& phi, const ProjString& q) {
  return ray_equal_test(t, unit_state(t, psi), unit_state(t, phi), q);
}

bool density_member(const ReductionTable& t, const DensityMatrix& rho,
                    const Subspace& k, const ProjString& q) {
  check_subspace(t, k);
  if (rho.dim() != t.alphabet().dim()) {
    throw UsageError("density matrix has the wrong dimension");
  }
  return density_test(t, rho, k, q);
}

BoundedIdeal valuation_vector(const ReductionTable& t, const ComplexVector& psi,
                              const Subspace& k, std::size_t depth) {
  require_projectors(t);
  check_subspace(t, k);
  auto unit = unit_state(t, psi);
  return BoundedIdeal::verify(
      t.alphabet().size(),
      [t, unit, k](const ProjString& q) { return vector_test(t, unit, k, q); },
      depth);
}

BoundedIdeal valuation_ray(const ReductionTable& t, const ComplexVector& psi,
                           const Subspace& k, std::size_t depth) {
  require_projectors(t);
  check_subspace(t, k);
  auto unit = unit_state(t, psi);
  return BoundedIdeal::verify(
      t.alphabet().size(),
      [t, unit, k](const ProjString& q) { return ray_test(t, unit, k, q); },
      depth);
}

BoundedIdeal truth_ray_equal_SP(const ReductionTable& t,
                                const ComplexVector& psi,
                                const ComplexVector& phi, std::size_t depth) {
  require_projectors(t);
  auto a = unit_state(t, psi);
  auto b = unit_state(t, phi);
  return BoundedIdeal::verify(
      t.alphabet().size(),
      [t, a, b](const ProjString& q) { return ray_equal_test(t, a, b, q); },
      depth);
}

BoundedIdeal valuation_density(const ReductionTable& t, const DensityMatrix& rho,
                               const Subspace& k, std::size_t depth) {
  require_projectors(t);
  check_subspace(t, k);
  if (rho.dim() != t.alphabet().dim()) {
    throw UsageError("density matrix has the wrong dimension");
  }
  return BoundedIdeal::verify(
      t.alphabet().size(),
      [t, rho, k](const ProjString& q) { return density_test(t, rho, k, q); },
      depth);
}

}  // namespace mtopos
