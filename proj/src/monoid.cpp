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

#include "mtopos/monoid.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "mtopos/error.hpp"

namespace mtopos {

std::vector<Element> members_of(const ElementSet& s) {
  std::vector<Element> out;
  out.reserve(s.count());
  for (auto i = s.find_first(); i != ElementSet::npos; i = s.find_next(i)) {
    out.push_back(static_cast<Element>(i));
  }
  return out;
}

ElementSet set_of(std::size_t universe, const std::vector<Element>& members) {
  ElementSet s(universe);
  for (Element e : members) {
    if (e >= universe) {
      throw LookupError("index " + std::to_string(e) + " outside a set of size " +
                        std::to_string(universe));
    }
    s.set(e);
  }
  return s;
}

namespace {

void check_shape(const Table& table) {
  const std::size_t n = table.size();
  if (n == 0) {
    throw StructuralError("monoid table is empty");
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (table[a].size() != n) {
      throw StructuralError("monoid table row " + std::to_string(a) +
                            " has " + std::to_string(table[a].size()) +
                            " entries, expected " + std::to_string(n));
    }
    for (Element v : table[a]) {
      if (v >= n) {
        throw StructuralError("monoid table entry " + std::to_string(v) +
                              " out of range in row " + std::to_string(a));
      }
    }
  }
}

bool is_identity(const Table& table, Element e) {
  for (Element a = 0; a < table.size(); ++a) {
    if (table[e][a] != a || table[a][e] != a) {
      return false;
    }
  }
  return true;
}

}  // namespace

FiniteMonoid::FiniteMonoid(Table table, std::vector<std::string> names)
    : names_(std::move(names)) {
  check_shape(table);
  bool found = false;
  for (Element e = 0; e < table.size(); ++e) {
    if (is_identity(table, e)) {
      identity_ = e;
      found = true;
      break;
    }
  }
  if (!found) {
    throw StructuralError("monoid table has no two-sided identity");
  }
  init(table);
}

FiniteMonoid::FiniteMonoid(Table table, Element identity,
                           std::vector<std::string> names)
    : identity_(identity), names_(std::move(names)) {
  check_shape(table);
  if (identity >= table.size() || !is_identity(table, identity)) {
    throw StructuralError("element " + std::to_string(identity) +
                          " is not a two-sided identity");
  }
  init(table);
}

void FiniteMonoid::init(Table const& table) {
  size_ = table.size();
  if (!names_.empty() && names_.size() != size_) {
    throw StructuralError("expected " + std::to_string(size_) +
                          " element names, got " +
                          std::to_string(names_.size()));
  }
  products_.resize(size_ * size_);
  for (std::size_t a = 0; a < size_; ++a) {
    std::copy(table[a].begin(), table[a].end(),
              products_.begin() + static_cast<std::ptrdiff_t>(a * size_));
  }
}

Table FiniteMonoid::table() const {
  Table t(size_, std::vector<Element>(size_));
  for (std::size_t a = 0; a < size_; ++a) {
    for (std::size_t b = 0; b < size_; ++b) {
      t[a][b] = products_[a * size_ + b];
    }
  }
  return t;
}

std::string FiniteMonoid::name(Element a) const {
  if (a < names_.size()) {
    return names_[a];
  }
  return std::to_string(a);
}

bool verify_associativity(const Table& table) {
  check_shape(table);
  const std::size_t n = table.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const Element ab = table[a][b];
      for (std::size_t c = 0; c < n; ++c) {
        if (table[ab][c] != table[a][table[b][c]]) {
          return false;
        }
      }
    }
  }
  return true;
}

bool verify_associativity(const FiniteMonoid& m) {
  const std::size_t n = m.size();
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      const Element ab = m(a, b);
      for (Element c = 0; c < n; ++c) {
        if (m(ab, c) != m(a, m(b, c))) {
          return false;
        }
      }
    }
  }
  return true;
}

MonoidPtr make_monoid(Table table, std::vector<std::string> names) {
  auto m = std::make_shared<const FiniteMonoid>(std::move(table),
                                                std::move(names));
  if (!verify_associativity(*m)) {
    throw StructuralError("monoid table is not associative");
  }
  return m;
}

// ---------------------------------------------------------------------------
// TransformationMonoid
// ---------------------------------------------------------------------------

TransformationMonoid::TransformationMonoid(std::size_t n, std::vector<Map> maps)
    : degree_(n), maps_(std::move(maps)) {
  const std::size_t size = maps_.size();
  sorted_.reserve(size);
  for (Element i = 0; i < size; ++i) {
    sorted_.emplace_back(maps_[i], i);
  }
  std::sort(sorted_.begin(), sorted_.end());

  Table table(size, std::vector<Element>(size));
  Map composed(n);
  for (Element f = 0; f < size; ++f) {
    for (Element g = 0; g < size; ++g) {
      for (std::size_t x = 0; x < n; ++x) {
        composed[x] = maps_[f][maps_[g][x]];
      }
      table[f][g] = index_of(composed);
    }
  }
  std::vector<std::string> names;
  names.reserve(size);
  for (const Map& f : maps_) {
    std::string s = "[";
    for (std::size_t x = 0; x < n; ++x) {
      if (x > 0) s += ",";
      s += std::to_string(f[x]);
    }
    names.push_back(s + "]");
  }
  monoid_ = std::make_shared<const FiniteMonoid>(std::move(table),
                                                 std::move(names));
}

TransformationMonoid TransformationMonoid::full(std::size_t n,
                                                std::size_t max_size) {
  if (n == 0) {
    throw StructuralError("transformation monoid needs a non-empty set");
  }
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) {
    count *= n;
    if (count > max_size) {
      throw CapacityError("Map(X,X) with |X| = " + std::to_string(n) +
                          " exceeds the element cap " +
                          std::to_string(max_size));
    }
  }
  std::vector<Map> maps(count, Map(n));
  for (std::size_t code = 0; code < count; ++code) {
    std::size_t rest = code;
    for (std::size_t x = 0; x < n; ++x) {
      maps[code][x] = static_cast<std::uint32_t>(rest % n);
      rest /= n;
    }
  }
  return TransformationMonoid(n, std::move(maps));
}

TransformationMonoid TransformationMonoid::generated(
    std::size_t n, const std::vector<Map>& generators, std::size_t max_size) {
  Map id(n);
  std::iota(id.begin(), id.end(), 0U);
  for (const Map& g : generators) {
    if (g.size() != n ||
        std::any_of(g.begin(), g.end(), [n](auto v) { return v >= n; })) {
      throw StructuralError("generator is not a map on a set of size " +
                            std::to_string(n));
    }
  }
  std::set<Map> seen{id};
  std::vector<Map> maps{id};
  std::deque<Map> frontier{id};
  while (!frontier.empty()) {
    Map f = frontier.front();
    frontier.pop_front();
    for (const Map& g : generators) {
      Map gf(n);
      for (std::size_t x = 0; x < n; ++x) gf[x] = g[f[x]];
      if (seen.insert(gf).second) {
        if (maps.size() >= max_size) {
          throw CapacityError("generated transformation monoid exceeds " +
                              std::to_string(max_size) + " elements");
        }
        maps.push_back(gf);
        frontier.push_back(std::move(gf));
      }
    }
  }
  return TransformationMonoid(n, std::move(maps));
}

Element TransformationMonoid::index_of(const Map& f) const {
  auto it = std::lower_bound(
      sorted_.begin(), sorted_.end(), f,
      [](const auto& entry, const Map& key) { return entry.first < key; });
  if (it == sorted_.end() || it->first != f) {
    throw LookupError("map is not an element of this transformation monoid");
  }
  return it->second;
}

ElementSet TransformationMonoid::image(Element f, const ElementSet& s) const {
  ElementSet out(degree_);
  for (auto x = s.find_first(); x != ElementSet::npos; x = s.find_next(x)) {
    out.set(maps_[f][x]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration up to isomorphism
// ---------------------------------------------------------------------------

Table canonical_table(const FiniteMonoid& m) {
  const std::size_t n = m.size();
  // perm[new] = old, with the identity pinned to 0.
  std::vector<Element> others;
  for (Element a = 0; a < n; ++a) {
    if (a != m.identity()) others.push_back(a);
  }
  std::vector<Element> inverse(n);
  Table best;
  do {
    std::vector<Element> perm{m.identity()};
    perm.insert(perm.end(), others.begin(), others.end());
    for (Element i = 0; i < n; ++i) inverse[perm[i]] = i;
    Table t(n, std::vector<Element>(n));
    for (Element a = 0; a < n; ++a) {
      for (Element b = 0; b < n; ++b) {
        t[a][b] = inverse[m(perm[a], perm[b])];
      }
    }
    if (best.empty() || t < best) best = std::move(t);
  } while (std::next_permutation(others.begin(), others.end()));
  return best;
}

namespace {

constexpr Element kUnset = static_cast<Element>(-1);

struct MonoidSearch {
  std::size_t n;
  Table t;
  std::set<Table> found;

  bool known(Element a, Element b) const { return t[a][b] != kUnset; }

  // (xy)z == x(yz) whenever every product involved is known.
  bool consistent(Element x, Element y, Element z) const {
    if (!known(x, y) || !known(y, z)) return true;
    const Element xy = t[x][y];
    const Element yz = t[y][z];
    if (!known(xy, z) || !known(x, yz)) return true;
    return t[xy][z] == t[x][yz];
  }

  // Every triple whose last missing product is the cell (a, b) is checked
  // here, so complete tables reaching the leaves are associative.
  bool check_cell(Element a, Element b) const {
    for (Element z = 0; z < n; ++z) {
      if (!consistent(a, b, z)) return false;
    }
    for (Element x = 0; x < n; ++x) {
      if (!consistent(x, a, b)) return false;
    }
    for (Element x = 0; x < n; ++x) {
      for (Element y = 0; y < n; ++y) {
        if (known(x, y) && t[x][y] == a && !consistent(x, y, b)) return false;
        if (known(x, y) && t[x][y] == b && !consistent(a, x, y)) return false;
      }
    }
    return true;
  }

  void run(std::size_t cell) {
    const std::size_t free = n - 1;
    if (cell == free * free) {
      FiniteMonoid m(t, 0);
      found.insert(canonical_table(m));
      return;
    }
    const Element a = static_cast<Element>(1 + cell / free);
    const Element b = static_cast<Element>(1 + cell % free);
    for (Element v = 0; v < n; ++v) {
      t[a][b] = v;
      if (check_cell(a, b)) run(cell + 1);
    }
    t[a][b] = kUnset;
  }
};

}  // namespace

std::vector<MonoidPtr> enumerate_monoids(std::size_t order) {
  if (order == 0) {
    throw StructuralError("monoids have at least one element");
  }
  if (order > 5) {
    throw CapacityError("monoid enumeration is capped at order 5");
  }
  MonoidSearch search{order, Table(order, std::vector<Element>(order, kUnset)),
                      {}};
  for (Element a = 0; a < order; ++a) {
    search.t[0][a] = a;
    search.t[a][0] = a;
  }
  search.run(0);
  std::vector<MonoidPtr> out;
  out.reserve(search.found.size());
  for (const Table& t : search.found) {
    out.push_back(std::make_shared<const FiniteMonoid>(t, 0));
  }
  return out;
}

}  // namespace mtopos
