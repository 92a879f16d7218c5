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

// Finite monoids given by their multiplication table.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace mtopos {

using Element = std::uint32_t;
using Table = std::vector<std::vector<Element>>;

/// Bit-set over element (or point) indices. Bit i set means index i is a
/// member. All sets attached to one carrier have the carrier's size.
using ElementSet = boost::dynamic_bitset<std::uint64_t>;

std::vector<Element> members_of(const ElementSet& s);
ElementSet set_of(std::size_t universe, const std::vector<Element>& members);

/// A finite monoid. `table[a][b]` is the product ab. Construction checks
/// the shape and the identity, not associativity; use
/// `verify_associativity` or `make_monoid` for that.
class FiniteMonoid {
 public:
  /// Detects the identity; throws StructuralError when there is none.
  explicit FiniteMonoid(Table table, std::vector<std::string> names = {});
  FiniteMonoid(Table table, Element identity,
               std::vector<std::string> names = {});

  std::size_t size() const noexcept { return size_; }
  Element identity() const noexcept { return identity_; }
  Element product(Element a, Element b) const noexcept {
    return products_[a * size_ + b];
  }
  Element operator()(Element a, Element b) const noexcept {
    return product(a, b);
  }
  Table table() const;

  /// Display name of an element; defaults to its index.
  std::string name(Element a) const;
  const std::vector<std::string>& names() const noexcept { return names_; }

  ElementSet empty_set() const { return ElementSet(size_); }
  ElementSet full_set() const { return ElementSet(size_).set(); }

  friend bool operator==(const FiniteMonoid& a, const FiniteMonoid& b) {
    return a.size_ == b.size_ && a.identity_ == b.identity_ &&
           a.products_ == b.products_;
  }

 private:
  void init(Table const& table);

  std::size_t size_ = 0;
  Element identity_ = 0;
  std::vector<Element> products_;
  std::vector<std::string> names_;
};

using MonoidPtr = std::shared_ptr<const FiniteMonoid>;

/// True iff (ab)c = a(bc) for every triple. Throws StructuralError on a
/// ragged table or an out-of-range entry.
bool verify_associativity(const Table& table);
bool verify_associativity(const FiniteMonoid& m);

/// Validated construction: structure, identity and associativity.
MonoidPtr make_monoid(Table table, std::vector<std::string> names = {});

/// The monoid Map(X,X) of all maps on {0..n-1} (or the submonoid generated
/// by a list of maps), with f*g = f∘g. Element i of the underlying
/// FiniteMonoid is the map `maps()[i]`.
class TransformationMonoid {
 public:
  using Map = std::vector<std::uint32_t>;

  /// All n^n maps, indexed by sum_x f(x) n^x. Throws CapacityError when
  /// n^n exceeds `max_size`.
  static TransformationMonoid full(std::size_t n, std::size_t max_size = 4096);
  /// Closure of `generators` plus the identity under composition.
  static TransformationMonoid generated(std::size_t n,
                                        const std::vector<Map>& generators,
                                        std::size_t max_size = 4096);

  std::size_t degree() const noexcept { return degree_; }
  const MonoidPtr& monoid() const noexcept { return monoid_; }
  const std::vector<Map>& maps() const noexcept { return maps_; }
  const Map& map(Element f) const { return maps_.at(f); }
  /// Index of a map; throws LookupError when it is not in the monoid.
  Element index_of(const Map& f) const;

  std::uint32_t apply(Element f, std::uint32_t x) const {
    return maps_[f][x];
  }
  /// f(S) for S ⊆ {0..n-1}.
  ElementSet image(Element f, const ElementSet& s) const;

 private:
  TransformationMonoid(std::size_t n, std::vector<Map> maps);

  std::size_t degree_ = 0;
  std::vector<Map> maps_;
  std::vector<std::pair<Map, Element>> sorted_;  // for index_of
  MonoidPtr monoid_;
};

/// All monoids of the given order up to isomorphism, in canonical form
/// (identity is element 0, table lexicographically minimal over
/// relabellings). Orders above 5 throw CapacityError.
std::vector<MonoidPtr> enumerate_monoids(std::size_t order);

/// Canonical relabelling of a monoid: identity at 0, lexicographically
/// minimal table. Isomorphic monoids have equal canonical tables.
Table canonical_table(const FiniteMonoid& m);

}  // namespace mtopos
