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

// Either-or valuations of classical quantities and their generalisation to
// left ideals of the monoid of all maps on a finite value set.

#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "mtopos/ideal.hpp"
#include "mtopos/monoid.hpp"
#include "mtopos/mset.hpp"

namespace mtopos {

/// Index of a value in a finite value set X.
using ValueIndex = std::uint32_t;
/// Subset of X, one bit per value.
using ValueSet = ElementSet;

/// Map(X,X) for a finite X ⊂ ℝ, stored as a transformation monoid on the
/// indices of X. Element f acts on values by f(x_i) = x_{f[i]}.
class FunctionMonoid {
 public:
  /// Values must be distinct and finite; |X|^|X| capped at `max_size`.
  explicit FunctionMonoid(std::vector<double> values,
                          std::size_t max_size = 4096);

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t value_count() const noexcept { return values_.size(); }
  const MonoidPtr& monoid() const noexcept { return maps_.monoid(); }
  const TransformationMonoid& maps() const noexcept { return maps_; }
  std::size_t size() const noexcept { return maps_.maps().size(); }

  ValueIndex apply(Element f, ValueIndex x) const { return maps_.apply(f, x); }
  /// f(Δ) as a subset of X.
  ValueSet image(Element f, const ValueSet& delta) const {
    return maps_.image(f, delta);
  }
  /// Throws DomainError when `x` is not in X (compared within 1e-9).
  ValueIndex index_of(double x) const;
  ValueSet subset(const std::vector<double>& xs) const;
  std::vector<double> members(const ValueSet& s) const;
  /// "[a,b,...]" listing f(x_0), f(x_1), ... as values.
  std::string describe(Element f) const;

 private:
  std::vector<double> values_;
  TransformationMonoid maps_;
};

using FunctionMonoidPtr = std::shared_ptr<const FunctionMonoid>;

/// A named quantity Ā: 𝒮 → X, stored as value indices per state.
struct Quantity {
  std::string name;
  std::vector<ValueIndex> values;
};

/// Finite state space 𝒮, finite value set X and named quantities.
class ClassicalSystem {
 public:
  /// `quantities[k].second[s]` is the value of quantity k in state s; every
  /// value must lie in X (DomainError otherwise).
  ClassicalSystem(
      std::vector<std::string> states, std::vector<double> values,
      const std::vector<std::pair<std::string, std::vector<double>>>&
          quantities);

  const std::vector<std::string>& states() const noexcept { return states_; }
  const std::vector<Quantity>& quantities() const noexcept {
    return quantities_;
  }
  const FunctionMonoidPtr& functions() const noexcept { return functions_; }

  /// Throw LookupError for unknown names.
  std::size_t state_index(const std::string& name) const;
  std::size_t quantity_index(const std::string& name) const;
  /// Ā(s) as an index into X.
  ValueIndex value(std::size_t state, std::size_t quantity) const;

 private:
  std::vector<std::string> states_;
  FunctionMonoidPtr functions_;
  std::vector<Quantity> quantities_;
};

/// Ā(s) ∈ Δ.
bool classical_truth(const ClassicalSystem& sys, std::size_t state,
                     std::size_t quantity, const ValueSet& delta);

/// {f | f(Ā(s)) ∈ f(Δ)}, a left ideal of Map(X,X).
LeftIdeal generalized_classical_valuation(const ClassicalSystem& sys,
                                          std::size_t state,
                                          std::size_t quantity,
                                          const ValueSet& delta);

/// The M-set of pairs (B̄, Γ) with B̄ any map 𝒮 → X and Γ ⊆ X, acted on
/// by f(B̄, Γ) = (f∘B̄, f(Γ)). Point index = code(B̄)·2^|X| + mask(Γ) with
/// code(B̄) = Σ_s B̄(s)|X|^s. Throws CapacityError past `max_points`.
class QuantityProduct {
 public:
  explicit QuantityProduct(const ClassicalSystem& sys,
                           std::size_t max_points = 1 << 16);

  const MSetPtr& mset() const noexcept { return mset_; }
  Point point(const std::vector<ValueIndex>& map, const ValueSet& gamma) const;
  std::vector<ValueIndex> map_of(Point p) const;
  ValueSet subset_of(Point p) const;

 private:
  std::size_t states_;
  std::size_t values_;
  MSetPtr mset_;
};

/// B̄(s) ∈ Γ for a map given by its values per state.
bool E_s_membership(const ClassicalSystem& sys, std::size_t state,
                    const std::vector<ValueIndex>& map, const ValueSet& gamma);

/// E^s as a subset of the product M-set.
PointSet E_s_subset(const ClassicalSystem& sys, const QuantityProduct& product,
                    std::size_t state);

/// [(Ā,Δ) ∈ E^s] through the characteristic arrow of E^s. Builds the
/// product M-set unless one is supplied.
LeftIdeal E_s_valuation(const ClassicalSystem& sys, std::size_t state,
                        std::size_t quantity, const ValueSet& delta,
                        const QuantityProduct* product = nullptr);

}  // namespace mtopos
