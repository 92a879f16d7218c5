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

// Projector strings acting on vectors, rays and density matrices, and the
// valuations they induce as left ideals of the free string monoid.

#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mtopos/linalg.hpp"
#include "mtopos/proj_string.hpp"

namespace mtopos {

enum class AlphabetKind {
  projector,  // letters are projectors (the monoid of projector strings)
  hermitian,  // arbitrary Hermitian letters (products of observables)
};

/// Named matrices that string letters refer to.
class Alphabet {
 public:
  /// Validates every letter against `kind` and a common dimension; throws
  /// ValidationError otherwise.
  Alphabet(std::vector<std::pair<std::string, ComplexMatrix>> letters,
           AlphabetKind kind = AlphabetKind::projector,
           const TolerancePolicy& tol = {});

  AlphabetKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return matrices_.size(); }
  const ProjStringMonoid& strings() const noexcept { return strings_; }
  const std::vector<std::string>& names() const noexcept {
    return strings_.alphabet();
  }
  /// Throws LookupError for a letter outside the alphabet.
  const ComplexMatrix& matrix(Letter l) const;

 private:
  AlphabetKind kind_;
  std::size_t dim_ = 0;
  ProjStringMonoid strings_;
  std::vector<ComplexMatrix> matrices_;
};

/// Q̂ = Q̂_1 Q̂_2 ··· Q̂_p for Q = (Q_1, ..., Q_p): the rightmost letter
/// acts first and the empty string reduces to the identity.
ComplexMatrix reduce(const Alphabet& alphabet, const ProjString& q);

/// Memoised reductions. Copies share one cache, guarded by a mutex.
class ReductionTable {
 public:
  explicit ReductionTable(std::shared_ptr<const Alphabet> alphabet,
                          TolerancePolicy tol = {});

  const Alphabet& alphabet() const noexcept { return *alphabet_; }
  const std::shared_ptr<const Alphabet>& alphabet_ptr() const noexcept {
    return alphabet_;
  }
  const TolerancePolicy& tolerance() const noexcept { return tol_; }
  ComplexMatrix reduce(const ProjString& q) const;

 private:
  struct Cache;
  std::shared_ptr<const Alphabet> alphabet_;
  TolerancePolicy tol_;
  std::shared_ptr<Cache> cache_;
};

/// ℓ_A[ψ] = [Aψ], or [0] when Aψ is null; [0] is absorbing.
ExtendedRay act_on_ray(const ComplexMatrix& a, const ExtendedRay& r,
                       const TolerancePolicy& tol = {});

/// Q̂ψ/‖Q̂ψ‖. Throws NullReduction when ‖Q̂ψ‖ ≤ null threshold.
ComplexVector normalized_reduction(const ReductionTable& table,
                                   const ComplexVector& psi,
                                   const ProjString& q);

/// A state ρ: Hermitian, positive semidefinite, normalised to unit trace on
/// construction. Keeps its eigendecomposition.
class DensityMatrix {
 public:
  /// Throws ValidationError unless the matrix is Hermitian, PSD within eps
  /// and of positive trace.
  explicit DensityMatrix(const ComplexMatrix& m, const TolerancePolicy& tol = {});
  static DensityMatrix pure(const ComplexVector& psi,
                            const TolerancePolicy& tol = {});

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return matrix_.rows(); }
  /// ρ = Σ weights[i] |vectors[i]⟩⟨vectors[i]|, weights > 0.
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<ComplexVector>& vectors() const noexcept {
    return vectors_;
  }

 private:
  ComplexMatrix matrix_;
  std::vector<double> weights_;
  std::vector<ComplexVector> vectors_;
};

/// Q̂ρQ̂†/tr(Q̂ρQ̂†). Throws NullReduction when the trace vanishes.
DensityMatrix reduce_density(const ComplexMatrix& q, const DensityMatrix& rho,
                             const TolerancePolicy& tol = {});

/// Membership tests for single strings; the valuations below wrap these.
/// States are normalised first, so every test is scale invariant.
bool vector_member(const ReductionTable& t, const ComplexVector& psi,
                   const Subspace& k, const ProjString& q);
bool ray_member(const ReductionTable& t, const ComplexVector& psi,
                const Subspace& k, const ProjString& q);
bool ray_equal_member(const ReductionTable& t, const ComplexVector& psi,
                      const ComplexVector& phi, const ProjString& q);
bool density_member(const ReductionTable& t, const DensityMatrix& rho,
                    const Subspace& k, const ProjString& q);

/// {Q | Q̂ψ ∈ Q̂K}. Throws PreconditionError for a null ψ and UsageError for
/// a non-projector alphabet.
BoundedIdeal valuation_vector(const ReductionTable& t, const ComplexVector& psi,
                              const Subspace& k, std::size_t depth = 4);

/// {Q | ℓ_Q[ψ] ∈ ℓ_Q(PK ∪ {[0]})}: for Q̂ψ ≠ 0 the vector test, for
/// Q̂ψ = 0 membership iff Q̂ annihilates some nonzero vector of K.
BoundedIdeal valuation_ray(const ReductionTable& t, const ComplexVector& psi,
                           const Subspace& k, std::size_t depth = 4);

/// {Q | [Q̂ψ] = [Q̂φ]} where both images null also counts as equal.
BoundedIdeal truth_ray_equal_SP(const ReductionTable& t,
                                const ComplexVector& psi,
                                const ComplexVector& phi,
                                std::size_t depth = 4);

/// {Q | tr(Q̂ρQ̂† Π_Q) = tr(Q̂ρQ̂†)}, Π_Q the projector onto Q̂K. Evaluated as
/// Σ wᵢ‖(1−Π_Q)Q̂uᵢ‖² against null_threshold²·max(tr Q̂ρQ̂†, 1).
BoundedIdeal valuation_density(const ReductionTable& t, const DensityMatrix& rho,
                               const Subspace& k, std::size_t depth = 4);

}  // namespace mtopos
