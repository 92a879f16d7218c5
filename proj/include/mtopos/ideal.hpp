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

// Left ideals of a finite monoid and the Heyting algebra LM they form.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mtopos/monoid.hpp"

namespace mtopos {

bool is_left_ideal(const FiniteMonoid& m, const ElementSet& s);

/// A left ideal I of a finite monoid: mI ⊆ I for every m. The value holds
/// a shared reference to its monoid; operations on ideals of different
/// monoids throw UsageError.
class LeftIdeal {
 public:
  /// Throws PreconditionError unless `members` is a left ideal.
  LeftIdeal(MonoidPtr monoid, ElementSet members);

  static LeftIdeal empty(MonoidPtr monoid);
  static LeftIdeal full(MonoidPtr monoid);
  /// The smallest left ideal containing `generators`: M·generators.
  static LeftIdeal generated_by(MonoidPtr monoid,
                                const std::vector<Element>& generators);

  const MonoidPtr& monoid() const noexcept { return monoid_; }
  const ElementSet& members() const noexcept { return members_; }
  bool contains(Element m) const { return members_.test(m); }
  std::size_t count() const { return members_.count(); }
  bool is_empty() const { return members_.none(); }
  bool is_full() const { return members_.all(); }
  bool subset_of(const LeftIdeal& other) const;
  std::vector<Element> elements() const { return members_of(members_); }

  friend bool operator==(const LeftIdeal& a, const LeftIdeal& b) {
    return a.members_ == b.members_ && *a.monoid_ == *b.monoid_;
  }

 private:
  struct Unchecked {};
  LeftIdeal(MonoidPtr monoid, ElementSet members, Unchecked);
  friend LeftIdeal trusted_ideal(MonoidPtr, ElementSet);

  MonoidPtr monoid_;
  ElementSet members_;
};

/// Wraps a set the caller has already proven to be a left ideal. In debug
/// builds the ideal property is asserted.
LeftIdeal trusted_ideal(MonoidPtr monoid, ElementSet members);

/// ℓ_m(I) = {m' | m'm ∈ I}. Acting by n and then by m equals acting by
/// mn: ℓ_m(ℓ_n(I)) = ℓ_{mn}(I).
LeftIdeal ideal_action(Element m, const LeftIdeal& ideal);

LeftIdeal heyting_meet(const LeftIdeal& a, const LeftIdeal& b);
LeftIdeal heyting_join(const LeftIdeal& a, const LeftIdeal& b);
/// I ⇒ J = {m | ℓ_m(I) ⊆ ℓ_m(J)}.
LeftIdeal heyting_implies(const LeftIdeal& a, const LeftIdeal& b);
/// ¬I = {m | nm ∉ I for all n}, which equals I ⇒ ∅.
LeftIdeal heyting_not(const LeftIdeal& a);

/// Every left ideal of `m`, duplicate-free, ordered by the bit pattern read
/// as a binary number (so ∅ first and M last). Monoids up to 12 elements
/// are handled by filtering all subsets; larger ones by closing unions of
/// principal ideals. Throws CapacityError once more than `max_ideals`
/// ideals exist.
std::vector<LeftIdeal> enumerate_left_ideals(const MonoidPtr& m,
                                             std::size_t max_ideals = 1 << 16);

/// Outcome of checking one law over all ideals of a monoid.
struct LawResult {
  std::string law;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_counterexample;  // empty when the law holds
  bool holds() const { return failures == 0; }
};

/// Full verification of the Heyting algebra (LM, ∩, ∪, ⇒, ¬, ∅, M) and of
/// the ideal action, exhaustive over pairs and triples of ideals.
struct HeytingReport {
  std::size_t monoid_size = 0;
  std::size_t ideal_count = 0;
  std::vector<LawResult> laws;
  /// An ideal P with P ∨ ¬P ≠ M, when one exists.
  std::optional<LeftIdeal> excluded_middle_witness;
  bool all_hold() const;
};

HeytingReport verify_heyting_algebra(const MonoidPtr& m);

/// "{a,b,...}" using the monoid's element names.
std::string to_string(const LeftIdeal& ideal);

}  // namespace mtopos
