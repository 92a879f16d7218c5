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

// M-sets over a finite monoid and the truth values they give rise to in
// the topos of M-sets. Every truth value is a left ideal of the monoid.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mtopos/ideal.hpp"
#include "mtopos/monoid.hpp"

namespace mtopos {

using Point = std::uint32_t;
/// Subset of an M-set's carrier, one bit per point.
using PointSet = ElementSet;

/// A finite carrier with a left action of a finite monoid, stored densely:
/// `act(m, x)` is mx. Construction checks ℓ_1 = id and m(nx) = (mn)x and
/// throws StructuralError when either fails.
class MSet {
 public:
  /// `action[m][x]` = mx.
  MSet(MonoidPtr monoid, const std::vector<std::vector<Point>>& action,
       std::vector<std::string> point_names = {});

  /// M acting on itself by left multiplication.
  static MSet regular(MonoidPtr monoid);
  /// LM with the action ℓ_m; the points are `enumerate_left_ideals` order.
  static MSet truth_object(MonoidPtr monoid);

  const MonoidPtr& monoid() const noexcept { return monoid_; }
  std::size_t size() const noexcept { return points_; }
  Point act(Element m, Point x) const { return action_[m * points_ + x]; }
  /// mK = {mx | x ∈ K}.
  PointSet act(Element m, const PointSet& k) const;

  std::string name(Point x) const;
  const std::vector<std::string>& point_names() const noexcept {
    return names_;
  }
  PointSet empty_set() const { return PointSet(points_); }
  PointSet full_set() const { return PointSet(points_).set(); }
  std::vector<std::vector<Point>> action_table() const;

 private:
  MonoidPtr monoid_;
  std::size_t points_ = 0;
  std::vector<Point> action_;
  std::vector<std::string> names_;
};

using MSetPtr = std::shared_ptr<const MSet>;

/// True iff mJ ⊆ J for every m.
bool is_invariant(const MSet& x, const PointSet& j);

/// All invariant subsets (sub-objects) of a carrier of at most 20 points.
std::vector<PointSet> enumerate_invariant_subsets(const MSet& x);

/// χ^J(x) = {m | mx ∈ J} for every point, an equivariant map X → LM.
/// Throws PreconditionError when J is not invariant.
std::vector<LeftIdeal> characteristic_arrow(const MSet& x, const PointSet& j);

/// J^χ = {x | χ(x) = M}, the sub-object classified by an arrow X → LM.
PointSet classified_subset(const MSet& x, const std::vector<LeftIdeal>& chi);

/// True iff χ(mx) = ℓ_m(χ(x)) for all m and x.
bool is_equivariant(const MSet& x, const std::vector<LeftIdeal>& chi);

/// Every equivariant map X → LM, found by propagation along the action
/// (χ(mx) is forced by χ(x)). Throws CapacityError past `max_maps`.
std::vector<std::vector<LeftIdeal>> enumerate_equivariant_maps(
    const MSet& x, std::size_t max_maps = 1 << 16);

/// [x ∈ J] = {m | mx ∈ J} for an invariant J.
LeftIdeal truth_in_invariant(const MSet& x, Point point, const PointSet& j);
/// [x ∈ K] = {m | mx ∈ mK} for an arbitrary K. Not the same value as
/// `truth_in_invariant` even when K is invariant.
LeftIdeal truth_in_subset(const MSet& x, Point point, const PointSet& k);
/// [K1 ⊆ K2] = {m | mK1 ⊆ mK2}.
LeftIdeal truth_subset_leq(const MSet& x, const PointSet& k1,
                           const PointSet& k2);
/// [x = y] = {m | mx = my}.
LeftIdeal truth_equal(const MSet& x, Point a, Point b);

/// A family {K_m} of subsets with m'K_m ⊆ K_{m'm} for all m', m.
class KFamily {
 public:
  /// Throws PreconditionError when the family condition fails.
  KFamily(MSetPtr base, std::vector<PointSet> sets);
  /// K_m := mK for a fixed subset K.
  static KFamily from_subset(MSetPtr base, const PointSet& k);

  const MSetPtr& base() const noexcept { return base_; }
  const PointSet& at(Element m) const { return sets_.at(m); }
  const std::vector<PointSet>& sets() const noexcept { return sets_; }

  friend bool operator==(const KFamily& a, const KFamily& b) {
    return a.sets_ == b.sets_;
  }

 private:
  MSetPtr base_;
  std::vector<PointSet> sets_;
};

bool is_valid_family(const MSet& x, const std::vector<PointSet>& sets);

/// [x ∈ K] = {m | mx ∈ K_m}.
LeftIdeal truth_in_family(const MSet& x, Point point, const KFamily& family);

/// λ: X × M → LM, stored as `values[x * |M| + m]`.
struct FamilyArrow {
  MSetPtr base;
  std::vector<LeftIdeal> values;
  const LeftIdeal& at(Point x, Element m) const {
    return values[x * base->monoid()->size() + m];
  }
};

/// λ^K(x, m) = {m' | m'x ∈ K_{m'm}}.
FamilyArrow family_to_lambda(const KFamily& family);
/// K^λ_m = {x | λ(x, m) = M}. Throws PreconditionError unless λ is
/// equivariant for the action m'(x, m) = (m'x, m'm).
KFamily lambda_to_family(const FamilyArrow& lambda);

}  // namespace mtopos
