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

#include "mtopos/mset.hpp"

#include <algorithm>
#include <map>

#include "mtopos/error.hpp"

namespace mtopos {

MSet::MSet(MonoidPtr monoid, const std::vector<std::vector<Point>>& action,
           std::vector<std::string> point_names)
    : monoid_(std::move(monoid)), names_(std::move(point_names)) {
  const std::size_t n = monoid_->size();
  if (action.size() != n) {
    throw StructuralError("action table needs one row per monoid element (" +
                          std::to_string(n) + "), got " +
                          std::to_string(action.size()));
  }
  points_ = action.front().size();
  if (!names_.empty() && names_.size() != points_) {
    throw StructuralError("expected " + std::to_string(points_) +
                          " point names");
  }
  action_.reserve(n * points_);
  for (std::size_t m = 0; m < n; ++m) {
    if (action[m].size() != points_) {
      throw StructuralError("action row " + std::to_string(m) +
                            " has the wrong length");
    }
    for (Point p : action[m]) {
      if (p >= points_) {
        throw StructuralError("action maps to point " + std::to_string(p) +
                              " outside the carrier");
      }
      action_.push_back(p);
    }
  }
  for (Point x = 0; x < points_; ++x) {
    if (act(monoid_->identity(), x) != x) {
      throw StructuralError("identity does not fix point " + name(x));
    }
  }
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      const Element ab = (*monoid_)(a, b);
      for (Point x = 0; x < points_; ++x) {
        if (act(a, act(b, x)) != act(ab, x)) {
          throw StructuralError("m(nx) != (mn)x for m=" + monoid_->name(a) +
                                ", n=" + monoid_->name(b) + ", x=" + name(x));
        }
      }
    }
  }
}

MSet MSet::regular(MonoidPtr monoid) {
  const auto table = monoid->table();
  std::vector<std::string> names;
  for (Element a = 0; a < monoid->size(); ++a) names.push_back(monoid->name(a));
  return MSet(std::move(monoid), table, std::move(names));
}

MSet MSet::truth_object(MonoidPtr monoid) {
  const auto ideals = enumerate_left_ideals(monoid);
  std::map<ElementSet, Point> index;
  std::vector<std::string> names;
  for (Point i = 0; i < ideals.size(); ++i) {
    index.emplace(ideals[i].members(), i);
    names.push_back(to_string(ideals[i]));
  }
  std::vector<std::vector<Point>> action(monoid->size(),
                                         std::vector<Point>(ideals.size()));
  for (Element m = 0; m < monoid->size(); ++m) {
    for (Point i = 0; i < ideals.size(); ++i) {
      action[m][i] = index.at(ideal_action(m, ideals[i]).members());
    }
  }
  return MSet(std::move(monoid), action, std::move(names));
}

PointSet MSet::act(Element m, const PointSet& k) const {
  PointSet out(points_);
  for (auto x = k.find_first(); x != PointSet::npos; x = k.find_next(x)) {
    out.set(act(m, static_cast<Point>(x)));
  }
  return out;
}

std::string MSet::name(Point x) const {
  return x < names_.size() ? names_[x] : std::to_string(x);
}

std::vector<std::vector<Point>> MSet::action_table() const {
  std::vector<std::vector<Point>> t(monoid_->size(),
                                    std::vector<Point>(points_));
  for (Element m = 0; m < monoid_->size(); ++m) {
    for (Point x = 0; x < points_; ++x) t[m][x] = act(m, x);
  }
  return t;
}

namespace {

void check_subset(const MSet& x, const PointSet& s) {
  if (s.size() != x.size()) {
    throw UsageError("subset has " + std::to_string(s.size()) +
                     " bits but the carrier has " + std::to_string(x.size()) +
                     " points");
  }
}

void check_point(const MSet& x, Point p) {
  if (p >= x.size()) {
    throw LookupError("point " + std::to_string(p) + " not in the carrier");
  }
}

}  // namespace

bool is_invariant(const MSet& x, const PointSet& j) {
  check_subset(x, j);
  for (Element m = 0; m < x.monoid()->size(); ++m) {
    for (auto p = j.find_first(); p != PointSet::npos; p = j.find_next(p)) {
      if (!j.test(x.act(m, static_cast<Point>(p)))) return false;
    }
  }
  return true;
}

std::vector<PointSet> enumerate_invariant_subsets(const MSet& x) {
  if (x.size() > 20) {
    throw CapacityError("invariant-subset enumeration is capped at 20 points");
  }
  std::vector<PointSet> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << x.size()); ++mask) {
    PointSet s(x.size(), mask);
    if (is_invariant(x, s)) out.push_back(std::move(s));
  }
  return out;
}

namespace {

LeftIdeal pullback(const MSet& x, Point point, const PointSet& j) {
  const auto& monoid = x.monoid();
  ElementSet out = monoid->empty_set();
  for (Element m = 0; m < monoid->size(); ++m) {
    if (j.test(x.act(m, point))) out.set(m);
  }
  return trusted_ideal(monoid, std::move(out));
}

}  // namespace

LeftIdeal truth_in_invariant(const MSet& x, Point point, const PointSet& j) {
  check_point(x, point);
  if (!is_invariant(x, j)) {
    throw PreconditionError("subset is not M-invariant");
  }
  return pullback(x, point, j);
}

std::vector<LeftIdeal> characteristic_arrow(const MSet& x, const PointSet& j) {
  if (!is_invariant(x, j)) {
    throw PreconditionError("subset is not M-invariant");
  }
  std::vector<LeftIdeal> chi;
  chi.reserve(x.size());
  for (Point p = 0; p < x.size(); ++p) chi.push_back(pullback(x, p, j));
  return chi;
}

PointSet classified_subset(const MSet& x, const std::vector<LeftIdeal>& chi) {
  if (chi.size() != x.size()) {
    throw UsageError("arrow must assign an ideal to every point");
  }
  PointSet out = x.empty_set();
  for (Point p = 0; p < x.size(); ++p) {
    if (chi[p].is_full()) out.set(p);
  }
  return out;
}

bool is_equivariant(const MSet& x, const std::vector<LeftIdeal>& chi) {
  if (chi.size() != x.size()) return false;
  for (Point p = 0; p < x.size(); ++p) {
    for (Element m = 0; m < x.monoid()->size(); ++m) {
      if (!(chi[x.act(m, p)] == ideal_action(m, chi[p]))) return false;
    }
  }
  return true;
}

namespace {

struct EquivariantSearch {
  const MSet& x;
  const std::vector<LeftIdeal>& ideals;
  // lact[m * k + i]: index of ℓ_m(ideal i).
  std::vector<std::size_t> lact;
  std::size_t max_maps;
  std::vector<std::vector<std::size_t>> found;

  static constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

  void run(std::vector<std::size_t> assigned, Point next) {
    while (next < x.size() && assigned[next] != kUnset) ++next;
    if (next == x.size()) {
      if (found.size() >= max_maps) {
        throw CapacityError("more than " + std::to_string(max_maps) +
                            " equivariant maps");
      }
      found.push_back(std::move(assigned));
      return;
    }
    const std::size_t k = ideals.size();
    for (std::size_t i = 0; i < k; ++i) {
      auto trial = assigned;
      bool ok = true;
      for (Element m = 0; m < x.monoid()->size() && ok; ++m) {
        const Point y = x.act(m, next);
        const std::size_t forced = lact[m * k + i];
        if (trial[y] == kUnset) {
          trial[y] = forced;
        } else {
          ok = trial[y] == forced;
        }
      }
      if (ok) run(std::move(trial), next + 1);
    }
  }
};

}  // namespace

std::vector<std::vector<LeftIdeal>> enumerate_equivariant_maps(
    const MSet& x, std::size_t max_maps) {
  const auto& monoid = x.monoid();
  const auto ideals = enumerate_left_ideals(monoid);
  const std::size_t k = ideals.size();
  std::map<ElementSet, std::size_t> index;
  for (std::size_t i = 0; i < k; ++i) index.emplace(ideals[i].members(), i);

  EquivariantSearch search{x, ideals, {}, max_maps, {}};
  search.lact.resize(monoid->size() * k);
  for (Element m = 0; m < monoid->size(); ++m) {
    for (std::size_t i = 0; i < k; ++i) {
      search.lact[m * k + i] = index.at(ideal_action(m, ideals[i]).members());
    }
  }
  search.run(std::vector<std::size_t>(x.size(), EquivariantSearch::kUnset), 0);

  std::vector<std::vector<LeftIdeal>> out;
  out.reserve(search.found.size());
  for (const auto& assignment : search.found) {
    std::vector<LeftIdeal> chi;
    chi.reserve(assignment.size());
    for (std::size_t i : assignment) chi.push_back(ideals[i]);
    out.push_back(std::move(chi));
  }
  return out;
}

LeftIdeal truth_in_subset(const MSet& x, Point point, const PointSet& k) {
  check_point(x, point);
  check_subset(x, k);
  const auto& monoid = x.monoid();
  ElementSet out = monoid->empty_set();
  for (Element m = 0; m < monoid->size(); ++m) {
    if (x.act(m, k).test(x.act(m, point))) out.set(m);
  }
  return trusted_ideal(monoid, std::move(out));
}

LeftIdeal truth_subset_leq(const MSet& x, const PointSet& k1,
                           const PointSet& k2) {
  check_subset(x, k1);
  check_subset(x, k2);
  const auto& monoid = x.monoid();
  ElementSet out = monoid->empty_set();
  for (Element m = 0; m < monoid->size(); ++m) {
    if (x.act(m, k1).is_subset_of(x.act(m, k2))) out.set(m);
  }
  return trusted_ideal(monoid, std::move(out));
}

LeftIdeal truth_equal(const MSet& x, Point a, Point b) {
  check_point(x, a);
  check_point(x, b);
  const auto& monoid = x.monoid();
  ElementSet out = monoid->empty_set();
  for (Element m = 0; m < monoid->size(); ++m) {
    if (x.act(m, a) == x.act(m, b)) out.set(m);
  }
  return trusted_ideal(monoid, std::move(out));
}

// ---------------------------------------------------------------------------
// Families and their arrows X × M → LM
// ---------------------------------------------------------------------------

bool is_valid_family(const MSet& x, const std::vector<PointSet>& sets) {
  const auto& monoid = *x.monoid();
  if (sets.size() != monoid.size()) return false;
  for (const auto& s : sets) {
    if (s.size() != x.size()) return false;
  }
  for (Element mp = 0; mp < monoid.size(); ++mp) {
    for (Element m = 0; m < monoid.size(); ++m) {
      if (!x.act(mp, sets[m]).is_subset_of(sets[monoid(mp, m)])) return false;
    }
  }
  return true;
}

KFamily::KFamily(MSetPtr base, std::vector<PointSet> sets)
    : base_(std::move(base)), sets_(std::move(sets)) {
  if (!is_valid_family(*base_, sets_)) {
    throw PreconditionError("family violates m'K_m ⊆ K_{m'm}");
  }
}

KFamily KFamily::from_subset(MSetPtr base, const PointSet& k) {
  check_subset(*base, k);
  std::vector<PointSet> sets;
  for (Element m = 0; m < base->monoid()->size(); ++m) {
    sets.push_back(base->act(m, k));
  }
  return KFamily(std::move(base), std::move(sets));
}

LeftIdeal truth_in_family(const MSet& x, Point point, const KFamily& family) {
  check_point(x, point);
  if (!is_valid_family(x, family.sets())) {
    throw PreconditionError("family does not belong to this M-set");
  }
  const auto& monoid = x.monoid();
  ElementSet out = monoid->empty_set();
  for (Element m = 0; m < monoid->size(); ++m) {
    if (family.at(m).test(x.act(m, point))) out.set(m);
  }
  return trusted_ideal(monoid, std::move(out));
}

FamilyArrow family_to_lambda(const KFamily& family) {
  const MSet& x = *family.base();
  const auto& monoid = x.monoid();
  FamilyArrow lambda{family.base(), {}};
  lambda.values.reserve(x.size() * monoid->size());
  for (Point p = 0; p < x.size(); ++p) {
    for (Element m = 0; m < monoid->size(); ++m) {
      ElementSet members = monoid->empty_set();
      for (Element mp = 0; mp < monoid->size(); ++mp) {
        if (family.at((*monoid)(mp, m)).test(x.act(mp, p))) members.set(mp);
      }
      lambda.values.push_back(trusted_ideal(monoid, std::move(members)));
    }
  }
  return lambda;
}

KFamily lambda_to_family(const FamilyArrow& lambda) {
  const MSet& x = *lambda.base;
  const auto& monoid = *x.monoid();
  if (lambda.values.size() != x.size() * monoid.size()) {
    throw PreconditionError("arrow must cover X × M");
  }
  for (Point p = 0; p < x.size(); ++p) {
    for (Element m = 0; m < monoid.size(); ++m) {
      for (Element mp = 0; mp < monoid.size(); ++mp) {
        if (!(lambda.at(x.act(mp, p), monoid(mp, m)) ==
              ideal_action(mp, lambda.at(p, m)))) {
          throw PreconditionError("arrow X × M → LM is not equivariant");
        }
      }
    }
  }
  std::vector<PointSet> sets(monoid.size(), x.empty_set());
  for (Point p = 0; p < x.size(); ++p) {
    for (Element m = 0; m < monoid.size(); ++m) {
      if (lambda.at(p, m).is_full()) sets[m].set(p);
    }
  }
  return KFamily(lambda.base, std::move(sets));
}

}  // namespace mtopos
