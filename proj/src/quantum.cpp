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

#include "mtopos/quantum.hpp"

#include <algorithm>
#include <cmath>

#include "mtopos/error.hpp"

namespace mtopos {

QuantumSystem::QuantumSystem(
    std::size_t dim, std::vector<double> values,
    const std::vector<std::pair<std::string, ComplexMatrix>>& ops,
    TolerancePolicy tol, std::size_t max_dim)
    : dim_(dim), tol_(tol), values_(std::move(values)) {
  tol_.validate();
  if (dim_ == 0) throw ValidationError("Hilbert space dimension must be positive");
  if (dim_ > max_dim) {
    throw CapacityError("dimension " + std::to_string(dim_) +
                        " exceeds the cap " + std::to_string(max_dim));
  }
  for (const auto& [name, m] : ops) {
    if (m.rows() != dim_ || m.cols() != dim_) {
      throw ValidationError("operator '" + name + "' is not " +
                            std::to_string(dim_) + "x" + std::to_string(dim_));
    }
  }
  if (values_.empty()) {
    for (const auto& [name, m] : ops) {
      for (double v : hermitian_eig(m, tol_).eigenvalues()) {
        // Jacobi leaves ~1e-16 noise; a 1e-12 grid keeps reports readable
        v = std::round(v * 1e12) / 1e12;
        if (v == 0.0) v = 0.0;  // no negative zero
        const bool known = std::any_of(values_.begin(), values_.end(),
                                       [&](double x) {
                                         return std::abs(x - v) <= tol_.eps;
                                       });
        if (!known) values_.push_back(v);
      }
    }
    std::sort(values_.begin(), values_.end());
  }
  for (const auto& [name, m] : ops) {
    auto h = hermitian_eig(m, tol_, &values_);
    for (double v : h.eigenvalues()) {
      if (std::find(values_.begin(), values_.end(), v) == values_.end()) {
        throw ValidationError("operator '" + name + "' has eigenvalue " +
                              std::to_string(v) + " outside the value set");
      }
    }
    ops_.emplace_back(name, std::move(h));
  }
  if (!values_.empty()) {
    try {
      functions_ = std::make_shared<const FunctionMonoid>(values_);
    } catch (const CapacityError&) {
      // left unset; functions() reports the capacity problem on use
    }
  }
}

const FunctionMonoid& QuantumSystem::functions() const {
  return *functions_ptr();
}

const FunctionMonoidPtr& QuantumSystem::functions_ptr() const {
  if (!functions_) {
    throw CapacityError("Map(X,X) is too large for |X| = " +
                        std::to_string(values_.size()));
  }
  return functions_;
}

std::size_t QuantumSystem::operator_index(const std::string& name) const {
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    if (ops_[i].first == name) return i;
  }
  throw LookupError("unknown operator '" + name + "'");
}

HermitianOperator QuantumSystem::apply(Element f,
                                       const HermitianOperator& b) const {
  const auto& fm = functions();
  std::vector<double> image(values_.size());
  for (ValueIndex x = 0; x < values_.size(); ++x) {
    image[x] = values_[fm.apply(f, x)];
  }
  return apply_function(b, values_, image, tol_);
}

namespace {

void check_state(const QuantumSystem& sys, const ComplexVector& psi) {
  if (psi.size() != sys.dim()) {
    throw UsageError("state has the wrong dimension");
  }
  if (norm(psi) <= sys.tolerance().null_threshold) {
    throw PreconditionError("state vector is null");
  }
}

}  // namespace

bool E_psi_membership(const QuantumSystem& sys, const ComplexVector& psi,
                      const HermitianOperator& b, const ValueSet& gamma) {
  check_state(sys, psi);
  std::vector<double> g;
  for (auto i = gamma.find_first(); i != ValueSet::npos; i = gamma.find_next(i)) {
    g.push_back(sys.values().at(i));
  }
  const auto e = spectral_projector(b, g, sys.tolerance());
  return norm(subtract(e.matrix() * psi, psi)) <=
         sys.tolerance().null_threshold * norm(psi);
}

LeftIdeal quantum_function_valuation(const QuantumSystem& sys,
                                     const ComplexVector& psi, std::size_t op,
                                     const ValueSet& delta) {
  check_state(sys, psi);
  const auto& fm = sys.functions();
  if (delta.size() != fm.value_count()) {
    throw UsageError("value subset does not match the value set");
  }
  const auto& a = sys.op(op);
  ElementSet out = fm.monoid()->empty_set();
  for (Element f = 0; f < fm.size(); ++f) {
    if (E_psi_membership(sys, psi, sys.apply(f, a), fm.image(f, delta))) {
      out.set(f);
    }
  }
  return LeftIdeal(fm.monoid(), std::move(out));
}

OperatorOrbit::OperatorOrbit(const QuantumSystem& sys, std::size_t op,
                             const ValueSet& delta) {
  const auto& fm = sys.functions();
  if (delta.size() != fm.value_count()) {
    throw UsageError("value subset does not match the value set");
  }
  const double tol = sys.tolerance().eps;
  auto find = [&](const HermitianOperator& b, const ValueSet& g) -> Point {
    for (Point p = 0; p < points_.size(); ++p) {
      if (points_[p].second == g &&
          max_abs_diff(points_[p].first.matrix(), b.matrix()) <=
              tol * std::max(1.0, b.matrix().max_abs())) {
        return p;
      }
    }
    return static_cast<Point>(points_.size());
  };
  const auto& a = sys.op(op);
  points_.emplace_back(a, delta);
  for (Element f = 0; f < fm.size(); ++f) {
    auto b = sys.apply(f, a);
    auto g = fm.image(f, delta);
    if (find(b, g) == points_.size()) points_.emplace_back(std::move(b), g);
  }
  std::vector<std::vector<Point>> action(fm.size(),
                                         std::vector<Point>(points_.size()));
  for (Element f = 0; f < fm.size(); ++f) {
    for (Point p = 0; p < points_.size(); ++p) {
      const Point q = find(sys.apply(f, points_[p].first),
                           fm.image(f, points_[p].second));
      if (q == points_.size()) {
        throw NumericError("operator orbit is not closed within tolerance");
      }
      action[f][p] = q;
    }
  }
  mset_ = std::make_shared<const MSet>(fm.monoid(), action);
}

PointSet E_psi_subset(const QuantumSystem& sys, const ComplexVector& psi,
                      const OperatorOrbit& orbit) {
  PointSet j = orbit.mset()->empty_set();
  for (Point p = 0; p < orbit.mset()->size(); ++p) {
    if (E_psi_membership(sys, psi, orbit.op(p), orbit.subset(p))) j.set(p);
  }
  return j;
}

LeftIdeal E_psi_valuation_via_arrow(const QuantumSystem& sys,
                                    const ComplexVector& psi, std::size_t op,
                                    const ValueSet& delta) {
  check_state(sys, psi);
  OperatorOrbit orbit(sys, op, delta);
  return truth_in_invariant(*orbit.mset(), 0, E_psi_subset(sys, psi, orbit));
}

}  // namespace mtopos
