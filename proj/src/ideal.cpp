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

#include "mtopos/ideal.hpp"

#include <cassert>
#include <functional>
#include <set>

#include "mtopos/error.hpp"

namespace mtopos {

bool is_left_ideal(const FiniteMonoid& m, const ElementSet& s) {
  if (s.size() != m.size()) return false;
  for (auto i = s.find_first(); i != ElementSet::npos; i = s.find_next(i)) {
    for (Element a = 0; a < m.size(); ++a) {
      if (!s.test(m(a, static_cast<Element>(i)))) return false;
    }
  }
  return true;
}

LeftIdeal::LeftIdeal(MonoidPtr monoid, ElementSet members)
    : monoid_(std::move(monoid)), members_(std::move(members)) {
  if (!monoid_) {
    throw UsageError("left ideal without a monoid");
  }
  if (members_.size() != monoid_->size()) {
    throw PreconditionError("member set has size " +
                            std::to_string(members_.size()) +
                            " but the monoid has " +
                            std::to_string(monoid_->size()) + " elements");
  }
  if (!is_left_ideal(*monoid_, members_)) {
    throw PreconditionError("set is not closed under left multiplication");
  }
}

LeftIdeal::LeftIdeal(MonoidPtr monoid, ElementSet members, Unchecked)
    : monoid_(std::move(monoid)), members_(std::move(members)) {}

LeftIdeal trusted_ideal(MonoidPtr monoid, ElementSet members) {
  assert(is_left_ideal(*monoid, members));
  return LeftIdeal(std::move(monoid), std::move(members),
                   LeftIdeal::Unchecked{});
}

LeftIdeal LeftIdeal::empty(MonoidPtr monoid) {
  ElementSet s = monoid->empty_set();
  return trusted_ideal(std::move(monoid), std::move(s));
}

LeftIdeal LeftIdeal::full(MonoidPtr monoid) {
  ElementSet s = monoid->full_set();
  return trusted_ideal(std::move(monoid), std::move(s));
}

LeftIdeal LeftIdeal::generated_by(MonoidPtr monoid,
                                  const std::vector<Element>& generators) {
  ElementSet s = monoid->empty_set();
  for (Element g : generators) {
    if (g >= monoid->size()) {
      throw LookupError("element " + std::to_string(g) + " not in the monoid");
    }
    for (Element a = 0; a < monoid->size(); ++a) s.set((*monoid)(a, g));
  }
  return trusted_ideal(std::move(monoid), std::move(s));
}

bool LeftIdeal::subset_of(const LeftIdeal& other) const {
  if (members_.size() != other.members_.size()) {
    throw UsageError("comparing ideals of different monoids");
  }
  return members_.is_subset_of(other.members_);
}

namespace {

const MonoidPtr& common_monoid(const LeftIdeal& a, const LeftIdeal& b) {
  if (a.monoid() != b.monoid() && !(*a.monoid() == *b.monoid())) {
    throw UsageError("ideals belong to different monoids");
  }
  return a.monoid();
}

ElementSet act(const FiniteMonoid& m, Element by, const ElementSet& ideal) {
  ElementSet out(m.size());
  for (Element a = 0; a < m.size(); ++a) {
    if (ideal.test(m(a, by))) out.set(a);
  }
  return out;
}

}  // namespace

LeftIdeal ideal_action(Element m, const LeftIdeal& ideal) {
  const auto& monoid = ideal.monoid();
  if (m >= monoid->size()) {
    throw UsageError("element " + std::to_string(m) +
                     " does not belong to the ideal's monoid");
  }
  return trusted_ideal(monoid, act(*monoid, m, ideal.members()));
}

LeftIdeal heyting_meet(const LeftIdeal& a, const LeftIdeal& b) {
  const auto& m = common_monoid(a, b);
  return trusted_ideal(m, a.members() & b.members());
}

LeftIdeal heyting_join(const LeftIdeal& a, const LeftIdeal& b) {
  const auto& m = common_monoid(a, b);
  return trusted_ideal(m, a.members() | b.members());
}

LeftIdeal heyting_implies(const LeftIdeal& a, const LeftIdeal& b) {
  const auto& m = common_monoid(a, b);
  ElementSet out = m->empty_set();
  for (Element x = 0; x < m->size(); ++x) {
    if (act(*m, x, a.members()).is_subset_of(act(*m, x, b.members()))) {
      out.set(x);
    }
  }
  return trusted_ideal(m, std::move(out));
}

LeftIdeal heyting_not(const LeftIdeal& a) {
  const auto& m = a.monoid();
  ElementSet out = m->empty_set();
  for (Element x = 0; x < m->size(); ++x) {
    bool escapes = true;
    for (Element n = 0; n < m->size() && escapes; ++n) {
      escapes = !a.contains((*m)(n, x));
    }
    if (escapes) out.set(x);
  }
  return trusted_ideal(m, std::move(out));
}

std::vector<LeftIdeal> enumerate_left_ideals(const MonoidPtr& m,
                                             std::size_t max_ideals) {
  const std::size_t n = m->size();
  std::vector<LeftIdeal> out;
  if (n <= 12) {
    const std::uint64_t subsets = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
      ElementSet s(n, mask);
      if (is_left_ideal(*m, s)) {
        if (out.size() >= max_ideals) {
          throw CapacityError("more than " + std::to_string(max_ideals) +
                              " left ideals");
        }
        out.push_back(trusted_ideal(m, std::move(s)));
      }
    }
    return out;
  }

  // Every left ideal is a union of principal ideals Mx.
  std::vector<ElementSet> principal;
  for (Element x = 0; x < n; ++x) {
    principal.push_back(LeftIdeal::generated_by(m, {x}).members());
  }
  std::set<ElementSet> seen{m->empty_set()};
  std::vector<ElementSet> frontier{m->empty_set()};
  while (!frontier.empty()) {
    std::vector<ElementSet> next;
    for (const ElementSet& s : frontier) {
      for (const ElementSet& p : principal) {
        ElementSet u = s | p;
        if (seen.insert(u).second) {
          if (seen.size() > max_ideals) {
            throw CapacityError("more than " + std::to_string(max_ideals) +
                                " left ideals");
          }
          next.push_back(std::move(u));
        }
      }
    }
    frontier = std::move(next);
  }
  for (const ElementSet& s : seen) out.push_back(trusted_ideal(m, s));
  return out;
}

bool HeytingReport::all_hold() const {
  for (const auto& law : laws) {
    if (!law.holds()) return false;
  }
  return true;
}

std::string to_string(const LeftIdeal& ideal) {
  std::string s = "{";
  bool first = true;
  for (Element e : ideal.elements()) {
    if (!first) s += ",";
    s += ideal.monoid()->name(e);
    first = false;
  }
  return s + "}";
}

namespace {

class LawChecker {
 public:
  explicit LawChecker(std::string name) { result_.law = std::move(name); }

  void check(bool ok, const std::function<std::string()>& describe) {
    ++result_.cases;
    if (!ok) {
      if (result_.failures == 0) result_.first_counterexample = describe();
      ++result_.failures;
    }
  }
  LawResult done() { return std::move(result_); }

 private:
  LawResult result_;
};

}  // namespace

HeytingReport verify_heyting_algebra(const MonoidPtr& m) {
  HeytingReport report;
  report.monoid_size = m->size();
  const auto ideals = enumerate_left_ideals(m);
  report.ideal_count = ideals.size();
  const LeftIdeal zero = LeftIdeal::empty(m);
  const LeftIdeal one = LeftIdeal::full(m);
  const std::size_t k = ideals.size();

  auto name = [&](std::initializer_list<std::size_t> idx) {
    std::string s;
    for (auto i : idx) s += (s.empty() ? "" : " ") + to_string(ideals[i]);
    return s;
  };

  LawChecker closed("operations yield left ideals");
  LawChecker comm("commutativity of meet and join");
  LawChecker idem("idempotence of meet and join");
  LawChecker absorb("absorption");
  LawChecker bounds("bounds 0 and 1");
  LawChecker assoc("associativity of meet and join");
  LawChecker distrib("distributivity");
  LawChecker residuation("residuation K∧I ≤ J ⟺ K ≤ (I⇒J)");
  LawChecker negation("¬I = I⇒0 and I∧¬I = 0");
  LawChecker action_unit("ℓ_1(I) = I, ℓ_m(1) = 1, ℓ_m(0) = 0");
  LawChecker action_comp("ℓ_m(ℓ_n(I)) = ℓ_{mn}(I)");

  for (std::size_t i = 0; i < k; ++i) {
    const auto& a = ideals[i];
    const auto na = heyting_not(a);
    const auto imp0 = heyting_implies(a, zero);
    closed.check(is_left_ideal(*m, na.members()), [&] { return name({i}); });
    idem.check(heyting_meet(a, a) == a && heyting_join(a, a) == a,
               [&] { return name({i}); });
    bounds.check(heyting_join(a, zero) == a && heyting_meet(a, one) == a &&
                     heyting_meet(a, zero) == zero &&
                     heyting_join(a, one) == one,
                 [&] { return name({i}); });
    negation.check(na == imp0 && heyting_meet(a, na) == zero,
                   [&] { return name({i}); });
    if (!report.excluded_middle_witness && !(heyting_join(a, na) == one)) {
      report.excluded_middle_witness = a;
    }
    action_unit.check(ideal_action(m->identity(), a) == a,
                      [&] { return name({i}); });
    for (Element x = 0; x < m->size(); ++x) {
      action_unit.check(ideal_action(x, one) == one &&
                            ideal_action(x, zero) == zero,
                        [&] { return m->name(x); });
      const auto lx = ideal_action(x, a);
      closed.check(is_left_ideal(*m, lx.members()), [&] { return name({i}); });
      for (Element y = 0; y < m->size(); ++y) {
        action_comp.check(ideal_action(x, ideal_action(y, a)) ==
                              ideal_action((*m)(x, y), a),
                          [&] {
                            return "m=" + m->name(x) + " n=" + m->name(y) +
                                   " I=" + name({i});
                          });
      }
    }
    for (std::size_t j = 0; j < k; ++j) {
      const auto& b = ideals[j];
      const auto meet = heyting_meet(a, b);
      const auto join = heyting_join(a, b);
      const auto imp = heyting_implies(a, b);
      closed.check(is_left_ideal(*m, meet.members()) &&
                       is_left_ideal(*m, join.members()) &&
                       is_left_ideal(*m, imp.members()),
                   [&] { return name({i, j}); });
      comm.check(meet == heyting_meet(b, a) && join == heyting_join(b, a),
                 [&] { return name({i, j}); });
      absorb.check(heyting_meet(a, join) == a && heyting_join(a, meet) == a,
                   [&] { return name({i, j}); });
      for (std::size_t l = 0; l < k; ++l) {
        const auto& c = ideals[l];
        assoc.check(heyting_meet(meet, c) == heyting_meet(a, heyting_meet(b, c)) &&
                        heyting_join(join, c) ==
                            heyting_join(a, heyting_join(b, c)),
                    [&] { return name({i, j, l}); });
        distrib.check(
            heyting_meet(a, heyting_join(b, c)) ==
                    heyting_join(meet, heyting_meet(a, c)) &&
                heyting_join(a, heyting_meet(b, c)) ==
                    heyting_meet(join, heyting_join(a, c)),
            [&] { return name({i, j, l}); });
        // c plays K, a plays I, b plays J.
        const bool lhs = heyting_meet(c, a).subset_of(b);
        const bool rhs = c.subset_of(imp);
        residuation.check(lhs == rhs, [&] {
          return "K=" + to_string(c) + " I=" + to_string(a) +
                 " J=" + to_string(b);
        });
      }
    }
  }

  for (auto* checker : {&closed, &comm, &idem, &absorb, &bounds, &assoc,
                        &distrib, &residuation, &negation, &action_unit,
                        &action_comp}) {
    report.laws.push_back(checker->done());
  }
  return report;
}

}  // namespace mtopos
