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

// Contextual valuations: the partial monoid of non-annihilating strings,
// Galois polars between strings and rays over finite universes, the
// category of strings with its reduction presheaf, and sieve-valued truth.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mtopos/linalg.hpp"
#include "mtopos/monoid.hpp"
#include "mtopos/proj_string.hpp"
#include "mtopos/reduction.hpp"

namespace mtopos {

/// Q̂ ≠ 0, tested as largest singular value > null threshold.
bool in_SP0(const ReductionTable& t, const ProjString& q);

/// Every string of length ≤ L with nonzero reduction, shortest first.
class StringUniverse {
 public:
  StringUniverse(ReductionTable table, std::size_t max_len);

  const ReductionTable& table() const noexcept { return table_; }
  std::size_t max_len() const noexcept { return max_len_; }
  const std::vector<ProjString>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  /// Position in `members()`, or nullopt.
  std::optional<std::size_t> index_of(const ProjString& q) const;

 private:
  ReductionTable table_;
  std::size_t max_len_;
  std::vector<ProjString> members_;
};

/// A finite set of rays with optional names, duplicates (equal rays)
/// rejected with UsageError.
class RaySet {
 public:
  RaySet() = default;
  void add(const Ray& r, std::string name = {},
           const TolerancePolicy& tol = {});

  std::size_t size() const noexcept { return rays_.size(); }
  const std::vector<Ray>& rays() const noexcept { return rays_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<std::size_t> index_of(const Ray& r,
                                      const TolerancePolicy& tol = {}) const;

 private:
  std::vector<Ray> rays_;
  std::vector<std::string> names_;
};

/// Selections of universe members, one bit per member.
using StringSelection = ElementSet;
using RaySelection = ElementSet;

/// The relation Q̂ψ ≠ 0 between a string universe U and a ray universe V,
/// with the two polar maps it induces.
class GaloisContext {
 public:
  GaloisContext(StringUniverse strings, RaySet rays);

  const StringUniverse& strings() const noexcept { return strings_; }
  const RaySet& rays() const noexcept { return rays_; }
  bool related(std::size_t q, std::size_t ray) const {
    return relation_[q * rays_.size() + ray];
  }

  /// Ξ⁰ = {Q ∈ U | Q̂ψ ≠ 0 for all [ψ] ∈ Ξ}.
  StringSelection polar_of_rays(const RaySelection& xi) const;
  /// J⁰ = {[ψ] ∈ V | Q̂ψ ≠ 0 for all Q ∈ J}.
  RaySelection polar_of_strings(const StringSelection& j) const;
  /// Ξ⁰⁰.
  RaySelection closure_rays(const RaySelection& xi) const;
  bool is_full(const RaySelection& xi) const { return closure_rays(xi) == xi; }

  /// Ξ as a selection of V; UsageError when some ray is not in V.
  RaySelection select(const RaySet& xi) const;
  std::vector<ProjString> strings_of(const StringSelection& s) const;

 private:
  StringUniverse strings_;
  RaySet rays_;
  std::vector<bool> relation_;
};

/// Ξ⁰ ∩ U for an arbitrary finite Ξ.
std::vector<ProjString> polar_of_rays(const RaySet& xi,
                                      const StringUniverse& u);
/// J⁰ within V.
RaySet polar_of_strings(const std::vector<ProjString>& j, const RaySet& v,
                        const ReductionTable& t);

/// {Q ∈ Ξ⁰∩U | [Q̂ψ] = [Q̂φ]}. PreconditionError unless [ψ], [φ] ∈ Ξ.
std::vector<ProjString> context_truth_equal_X(const ComplexVector& psi,
                                              const ComplexVector& phi,
                                              const RaySet& xi,
                                              const StringUniverse& u);
/// {Q ∈ Ξ⁰∩U | Q̂ψ ∈ Q̂K}. PreconditionError unless [ψ] ∈ Ξ.
std::vector<ProjString> context_valuation_X(const ComplexVector& psi,
                                            const Subspace& k,
                                            const RaySet& xi,
                                            const StringUniverse& u);

/// The unique arrow source → target, which exists iff source = target⋆tail.
struct StringArrow {
  ProjString source;
  ProjString target;
  ProjString tail;
};

/// The |Q|+1 arrows out of Q, by tail length 0..|Q|. PreconditionError
/// unless Q ∈ SP₀.
std::vector<StringArrow> arrows_out(const ReductionTable& t,
                                    const ProjString& q);
/// b∘a, whose tail is b.tail⋆a.tail. UsageError unless a.target = b.source.
StringArrow compose(const StringArrow& a, const StringArrow& b);
/// Q → Q with its letters stripped one at a time from the right.
std::vector<StringArrow> minimal_chain(const ProjString& q);

/// ψ ∈ 𝐑(Q), i.e. Q̂ψ ≠ 0.
bool presheaf_at(const ReductionTable& t, const ProjString& q,
                 const ComplexVector& psi);
/// 𝐑(S)ψ = Ŝψ for an arrow with tail S. PreconditionError unless
/// ψ ∈ 𝐑(source).
ComplexVector presheaf_restrict(const ReductionTable& t, const StringArrow& s,
                                const ComplexVector& psi);

/// A sieve on a string Q: the arrows whose tail length is ≥ `min_tail`.
/// Sieves on strings are final segments of the chain of tails.
class Sieve {
 public:
  /// Flags indexed by tail length 0..|Q|; throws StructuralError unless
  /// they form a final segment.
  static Sieve from_flags(ProjString context, const std::vector<bool>& flags);

  const ProjString& context() const noexcept { return context_; }
  std::optional<std::size_t> min_tail() const noexcept { return min_tail_; }
  bool empty() const noexcept { return !min_tail_.has_value(); }
  bool full() const noexcept { return min_tail_ == 0; }
  bool includes(std::size_t tail_length) const;
  std::vector<std::size_t> included_tail_lengths() const;
  std::vector<ProjString> tails() const;

  friend bool operator==(const Sieve&, const Sieve&) = default;

 private:
  ProjString context_;
  std::optional<std::size_t> min_tail_;
};

/// Tails S of Q with [Ŝψ] = [Ŝφ]. ContextError unless Q ∈ SP₀ and
/// ψ, φ ∈ 𝐑(Q).
Sieve sieve_truth_equal(const ReductionTable& t, const ComplexVector& psi,
                        const ComplexVector& phi, const ProjString& q);
/// Tails S of Q with Ŝψ ∈ ŜK. ContextError unless Q ∈ SP₀ and ψ ∈ 𝐑(Q).
Sieve sieve_valuation(const ReductionTable& t, const ComplexVector& psi,
                      const Subspace& k, const ProjString& q);

}  // namespace mtopos
