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

// Generalised valuations of quantum propositions "A ∈ Δ" as left ideals of
// Map(X,X), with X a finite set containing every operator's spectrum.

#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mtopos/classical.hpp"
#include "mtopos/ideal.hpp"
#include "mtopos/linalg.hpp"
#include "mtopos/mset.hpp"

namespace mtopos {

/// A finite-dimensional Hilbert space with named Hermitian operators whose
/// spectra lie in the finite value set X (after snapping within eps).
class QuantumSystem {
 public:
  /// An empty `values` means X := the union of the operator spectra.
  /// Throws ValidationError for non-Hermitian operators, wrong dimensions or
  /// an eigenvalue outside X; CapacityError when dim exceeds `max_dim`.
  QuantumSystem(std::size_t dim, std::vector<double> values,
                const std::vector<std::pair<std::string, ComplexMatrix>>& ops,
                TolerancePolicy tol = {}, std::size_t max_dim = 16);

  std::size_t dim() const noexcept { return dim_; }
  const TolerancePolicy& tolerance() const noexcept { return tol_; }
  const std::vector<double>& values() const noexcept { return values_; }
  /// Map(X,X); throws CapacityError when |X|^|X| is too large.
  const FunctionMonoid& functions() const;
  const FunctionMonoidPtr& functions_ptr() const;

  std::size_t operator_count() const noexcept { return ops_.size(); }
  const std::string& operator_name(std::size_t i) const {
    return ops_.at(i).first;
  }
  const HermitianOperator& op(std::size_t i) const { return ops_.at(i).second; }
  /// Throws LookupError for unknown names.
  std::size_t operator_index(const std::string& name) const;

  /// f(B) for f ∈ Map(X,X).
  HermitianOperator apply(Element f, const HermitianOperator& b) const;

 private:
  std::size_t dim_;
  TolerancePolicy tol_;
  std::vector<double> values_;
  FunctionMonoidPtr functions_;
  std::vector<std::pair<std::string, HermitianOperator>> ops_;
};

/// Ê[B∈Γ]ψ = ψ, i.e. ‖Ê[B∈Γ]ψ − ψ‖ ≤ null_threshold·‖ψ‖. Throws
/// PreconditionError for a null ψ.
bool E_psi_membership(const QuantumSystem& sys, const ComplexVector& psi,
                      const HermitianOperator& b, const ValueSet& gamma);

/// {f ∈ Map(X,X) | Ê[f(A)∈f(Δ)]ψ = ψ}.
LeftIdeal quantum_function_valuation(const QuantumSystem& sys,
                                     const ComplexVector& psi,
                                     std::size_t op, const ValueSet& delta);

/// The orbit {(f(A), f(Δ)) | f ∈ Map(X,X)} as an M-set, with operators
/// identified by matrix equality within eps. Point 0 is (A, Δ). The action
/// is computed from the point data, not from the monoid table.
class OperatorOrbit {
 public:
  OperatorOrbit(const QuantumSystem& sys, std::size_t op,
                const ValueSet& delta);

  const MSetPtr& mset() const noexcept { return mset_; }
  const HermitianOperator& op(Point p) const { return points_.at(p).first; }
  const ValueSet& subset(Point p) const { return points_.at(p).second; }

 private:
  std::vector<std::pair<HermitianOperator, ValueSet>> points_;
  MSetPtr mset_;
};

/// E^ψ restricted to an orbit.
PointSet E_psi_subset(const QuantumSystem& sys, const ComplexVector& psi,
                      const OperatorOrbit& orbit);

/// [(Â,Δ) ∈ E^ψ] through the characteristic arrow of E^ψ on the orbit.
LeftIdeal E_psi_valuation_via_arrow(const QuantumSystem& sys,
                                    const ComplexVector& psi, std::size_t op,
                                    const ValueSet& delta);

}  // namespace mtopos
