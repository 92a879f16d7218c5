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

#include "mtopos/classical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mtopos/error.hpp"

namespace mtopos {

namespace {

constexpr double kValueMatch = 1e-9;

std::size_t full_degree(const std::vector<double>& values) {
  if (values.empty()) throw StructuralError("value set must be non-empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw StructuralError("value set entries must be finite");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(values[i] - values[j]) <= kValueMatch) {
        throw StructuralError("value set has a repeated entry");
      }
    }
  }
  return values.size();
}

std::string format_value(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

FunctionMonoid::FunctionMonoid(std::vector<double> values, std::size_t max_size)
    : values_(std::move(values)),
      maps_(TransformationMonoid::full(full_degree(values_), max_size)) {}

ValueIndex FunctionMonoid::index_of(double x) const {
  for (ValueIndex i = 0; i < values_.size(); ++i) {
    if (std::abs(values_[i] - x) <= kValueMatch) return i;
  }
  throw DomainError("value " + format_value(x) + " is not in the value set");
}

ValueSet FunctionMonoid::subset(const std::vector<double>& xs) const {
  ValueSet s(values_.size());
  for (double x : xs) s.set(index_of(x));
  return s;
}

std::vector<double> FunctionMonoid::members(const ValueSet& s) const {
  std::vector<double> out;
  for (auto i = s.find_first(); i != ValueSet::npos; i = s.find_next(i)) {
    out.push_back(values_[i]);
  }
  return out;
}

std::string FunctionMonoid::describe(Element f) const {
  std::string out = "[";
  for (ValueIndex x = 0; x < values_.size(); ++x) {
    if (x > 0) out += ",";
    out += format_value(values_[apply(f, x)]);
  }
  return out + "]";
}

ClassicalSystem::ClassicalSystem(
    std::vector<std::string> states, std::vector<double> values,
    const std::vector<std::pair<std::string, std::vector<double>>>& quantities)
    : states_(std::move(states)),
      functions_(std::make_shared<const FunctionMonoid>(std::move(values))) {
  if (states_.empty()) throw StructuralError("state space must be non-empty");
  for (const auto& [name, per_state] : quantities) {
    if (per_state.size() != states_.size()) {
      throw StructuralError("quantity '" + name + "' needs " +
                            std::to_string(states_.size()) + " values");
    }
    Quantity q{name, {}};
    for (double v : per_state) q.values.push_back(functions_->index_of(v));
    quantities_.push_back(std::move(q));
  }
}

std::size_t ClassicalSystem::state_index(const std::string& name) const {
  auto it = std::find(states_.begin(), states_.end(), name);
  if (it == states_.end()) throw LookupError("unknown state '" + name + "'");
  return static_cast<std::size_t>(it - states_.begin());
}

std::size_t ClassicalSystem::quantity_index(const std::string& name) const {
  for (std::size_t i = 0; i < quantities_.size(); ++i) {
    if (quantities_[i].name == name) return i;
  }
  throw LookupError("unknown quantity '" + name + "'");
}

ValueIndex ClassicalSystem::value(std::size_t state,
                                  std::size_t quantity) const {
  if (state >= states_.size()) throw LookupError("state index out of range");
  if (quantity >= quantities_.size()) {
    throw LookupError("quantity index out of range");
  }
  return quantities_[quantity].values[state];
}

namespace {

void check_delta(const ClassicalSystem& sys, const ValueSet& delta) {
  if (delta.size() != sys.functions()->value_count()) {
    throw UsageError("value subset does not match the value set");
  }
}

}  // namespace

bool classical_truth(const ClassicalSystem& sys, std::size_t state,
                     std::size_t quantity, const ValueSet& delta) {
  check_delta(sys, delta);
  return delta.test(sys.value(state, quantity));
}

LeftIdeal generalized_classical_valuation(const ClassicalSystem& sys,
                                          std::size_t state,
                                          std::size_t quantity,
                                          const ValueSet& delta) {
  check_delta(sys, delta);
  const auto& fm = *sys.functions();
  const ValueIndex a = sys.value(state, quantity);
  ElementSet out = fm.monoid()->empty_set();
  for (Element f = 0; f < fm.size(); ++f) {
    if (fm.image(f, delta).test(fm.apply(f, a))) out.set(f);
  }
  return LeftIdeal(fm.monoid(), std::move(out));
}

QuantityProduct::QuantityProduct(const ClassicalSystem& sys,
                                 std::size_t max_points)
    : states_(sys.states().size()), values_(sys.functions()->value_count()) {
  const auto& fm = *sys.functions();
  std::size_t maps = 1;
  for (std::size_t s = 0; s < states_; ++s) {
    maps *= values_;
    if (maps > max_points) {
      throw CapacityError("quantity product exceeds the point cap");
    }
  }
  const std::size_t subsets = std::size_t{1} << values_;
  if (values_ >= 20 || maps * subsets > max_points) {
    throw CapacityError("quantity product exceeds the point cap");
  }
  const std::size_t points = maps * subsets;
  std::vector<std::vector<Point>> action(fm.size(),
                                         std::vector<Point>(points));
  for (Element f = 0; f < fm.size(); ++f) {
    for (Point p = 0; p < points; ++p) {
      auto b = map_of(p);
      for (auto& v : b) v = fm.apply(f, v);
      action[f][p] = point(b, fm.image(f, subset_of(p)));
    }
  }
  mset_ = std::make_shared<const MSet>(fm.monoid(), action);
}

Point QuantityProduct::point(const std::vector<ValueIndex>& map,
                             const ValueSet& gamma) const {
  std::size_t code = 0;
  for (std::size_t s = states_; s-- > 0;) code = code * values_ + map[s];
  return static_cast<Point>((code << values_) | gamma.to_ulong());
}

std::vector<ValueIndex> QuantityProduct::map_of(Point p) const {
  std::size_t code = p >> values_;
  std::vector<ValueIndex> out(states_);
  for (std::size_t s = 0; s < states_; ++s) {
    out[s] = static_cast<ValueIndex>(code % values_);
    code /= values_;
  }
  return out;
}

ValueSet QuantityProduct::subset_of(Point p) const {
  return ValueSet(values_, p & ((1UL << values_) - 1));
}

bool E_s_membership(const ClassicalSystem& sys, std::size_t state,
                    const std::vector<ValueIndex>& map, const ValueSet& gamma) {
  check_delta(sys, gamma);
  if (map.size() != sys.states().size() || state >= map.size()) {
    throw UsageError("map must give one value per state");
  }
  return gamma.test(map[state]);
}

PointSet E_s_subset(const ClassicalSystem& sys, const QuantityProduct& product,
                    std::size_t state) {
  const MSet& x = *product.mset();
  PointSet j = x.empty_set();
  for (Point p = 0; p < x.size(); ++p) {
    if (E_s_membership(sys, state, product.map_of(p), product.subset_of(p))) {
      j.set(p);
    }
  }
  return j;
}

LeftIdeal E_s_valuation(const ClassicalSystem& sys, std::size_t state,
                        std::size_t quantity, const ValueSet& delta,
                        const QuantityProduct* product) {
  check_delta(sys, delta);
  std::unique_ptr<QuantityProduct> owned;
  if (product == nullptr) {
    owned = std::make_unique<QuantityProduct>(sys);
    product = owned.get();
  }
  sys.value(state, quantity);  // range checks
  const auto& q = sys.quantities()[quantity];
  return truth_in_invariant(*product->mset(), product->point(q.values, delta),
                            E_s_subset(sys, *product, state));
}

}  // namespace mtopos
