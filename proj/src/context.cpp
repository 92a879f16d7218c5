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

#include "mtopos/context.hpp"

#include <algorithm>

#include "mtopos/error.hpp"

namespace mtopos {

namespace {

ComplexVector unit(const ReductionTable& t, const ComplexVector& psi) {
  if (psi.size() != t.alphabet().dim()) {
    throw UsageError("state has the wrong dimension");
  }
  const double n = norm(psi);
  if (n <= t.tolerance().null_threshold) {
    throw PreconditionError("state vector is null");
  }
  return scaled(psi, 1.0 / n);
}

bool survives(const ReductionTable& t, const ProjString& q,
              const ComplexVector& unit_psi) {
  return norm(t.reduce(q) * unit_psi) > t.tolerance().null_threshold;
}

bool contains_ray(const RaySet& xi, const ComplexVector& psi,
                  const TolerancePolicy& tol) {
  return xi.index_of(Ray::of(psi, tol), tol).has_value();
}

void require_projectors(const ReductionTable& t) {
  if (t.alphabet().kind() != AlphabetKind::projector) {
    throw UsageError("contexts need a projector alphabet");
  }
}

}  // namespace

bool in_SP0(const ReductionTable& t, const ProjString& q) {
  return operator_norm(t.reduce(q)) > t.tolerance().null_threshold;
}

StringUniverse::StringUniverse(ReductionTable table, std::size_t max_len)
    : table_(std::move(table)), max_len_(max_len) {
  require_projectors(table_);
  // A factor of a nonzero product is nonzero, so only extensions of
  // surviving strings need testing.
  std::vector<ProjString> layer{ProjString{}};
  members_.push_back(ProjString{});
  const auto letters = static_cast<Letter>(table_.alphabet().size());
  for (std::size_t len = 1; len <= max_len_; ++len) {
    std::vector<ProjString> next;
    for (const auto& q : layer) {
      for (Letter l = 0; l < letters; ++l) {
        auto ext = string_concat(q, ProjString{l});
        if (in_SP0(table_, ext)) next.push_back(std::move(ext));
      }
    }
    std::sort(next.begin(), next.end());
    members_.insert(members_.end(), next.begin(), next.end());
    layer = std::move(next);
    if (members_.size() > (std::size_t{1} << 20)) {
      throw CapacityError("string universe too large");
    }
  }
}

std::optional<std::size_t> StringUniverse::index_of(
    const ProjString& q) const {
  auto it = std::lower_bound(
      members_.begin(), members_.end(), q,
      [](const ProjString& a, const ProjString& b) {
        if (a.length() != b.length()) return a.length() < b.length();
        return a < b;
      });
  if (it == members_.end() || *it != q) return std::nullopt;
  return static_cast<std::size_t>(it - members_.begin());
}

void RaySet::add(const Ray& r, std::string name, const TolerancePolicy& tol) {
  if (!rays_.empty() && rays_.front().dim() != r.dim()) {
    throw UsageError("rays of different dimensions");
  }
  if (index_of(r, tol)) throw UsageError("duplicate ray");
  rays_.push_back(r);
  names_.push_back(std::move(name));
}

std::optional<std::size_t> RaySet::index_of(const Ray& r,
                                            const TolerancePolicy& tol) const {
  for (std::size_t i = 0; i < rays_.size(); ++i) {
    if (rays_[i].dim() == r.dim() && ray_equal(rays_[i], r, tol)) return i;
  }
  return std::nullopt;
}

GaloisContext::GaloisContext(StringUniverse strings, RaySet rays)
    : strings_(std::move(strings)), rays_(std::move(rays)) {
  const auto& t = strings_.table();
  for (const auto& r : rays_.rays()) {
    if (r.dim() != t.alphabet().dim()) {
      throw UsageError("ray has the wrong dimension");
    }
  }
  relation_.resize(strings_.size() * rays_.size());
  for (std::size_t q = 0; q < strings_.size(); ++q) {
    for (std::size_t v = 0; v < rays_.size(); ++v) {
      relation_[q * rays_.size() + v] =
          survives(t, strings_.members()[q], rays_.rays()[v].representative());
    }
  }
}

StringSelection GaloisContext::polar_of_rays(const RaySelection& xi) const {
  if (xi.size() != rays_.size()) throw UsageError("ray selection size");
  StringSelection out(strings_.size());
  for (std::size_t q = 0; q < strings_.size(); ++q) {
    bool all = true;
    for (auto v = xi.find_first(); all && v != RaySelection::npos;
         v = xi.find_next(v)) {
      all = related(q, v);
    }
    out[q] = all;
  }
  return out;
}

RaySelection GaloisContext::polar_of_strings(const StringSelection& j) const {
  if (j.size() != strings_.size()) throw UsageError("string selection size");
  RaySelection out(rays_.size());
  for (std::size_t v = 0; v < rays_.size(); ++v) {
    bool all = true;
    for (auto q = j.find_first(); all && q != StringSelection::npos;
         q = j.find_next(q)) {
      all = related(q, v);
    }
    out[v] = all;
  }
  return out;
}

RaySelection GaloisContext::closure_rays(const RaySelection& xi) const {
  return polar_of_strings(polar_of_rays(xi));
}

RaySelection GaloisContext::select(const RaySet& xi) const {
  RaySelection out(rays_.size());
  const auto& tol = strings_.table().tolerance();
  for (const auto& r : xi.rays()) {
    auto i = rays_.index_of(r, tol);
    if (!i) throw UsageError("ray outside the ray universe");
    out.set(*i);
  }
  return out;
}

std::vector<ProjString> GaloisContext::strings_of(
    const StringSelection& s) const {
  std::vector<ProjString> out;
  for (auto q = s.find_first(); q != StringSelection::npos; q = s.find_next(q)) {
    out.push_back(strings_.members()[q]);
  }
  return out;
}

std::vector<ProjString> polar_of_rays(const RaySet& xi,
                                      const StringUniverse& u) {
  GaloisContext g(u, xi);
  return g.strings_of(g.polar_of_rays(RaySelection(xi.size()).set()));
}

RaySet polar_of_strings(const std::vector<ProjString>& j, const RaySet& v,
                        const ReductionTable& t) {
  RaySet out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& psi = v.rays()[i].representative();
    if (psi.size() != t.alphabet().dim()) {
      throw UsageError("ray has the wrong dimension");
    }
    const bool all = std::all_of(j.begin(), j.end(), [&](const ProjString& q) {
      return survives(t, q, psi);
    });
    if (all) out.add(v.rays()[i], v.names()[i], t.tolerance());
  }
  return out;
}

std::vector<ProjString> context_truth_equal_X(const ComplexVector& psi,
                                              const ComplexVector& phi,
                                              const RaySet& xi,
                                              const StringUniverse& u) {
  const auto& t = u.table();
  const auto a = unit(t, psi);
  const auto b = unit(t, phi);
  if (!contains_ray(xi, a, t.tolerance()) ||
      !contains_ray(xi, b, t.tolerance())) {
    throw PreconditionError("both rays must lie in the context");
  }
  std::vector<ProjString> out;
  for (const auto& q : polar_of_rays(xi, u)) {
    if (ray_equal_member(t, a, b, q)) out.push_back(q);
  }
  return out;
}

std::vector<ProjString> context_valuation_X(const ComplexVector& psi,
                                            const Subspace& k,
                                            const RaySet& xi,
                                            const StringUniverse& u) {
  const auto& t = u.table();
  const auto a = unit(t, psi);
  if (!contains_ray(xi, a, t.tolerance())) {
    throw PreconditionError("the ray must lie in the context");
  }
  std::vector<ProjString> out;
  for (const auto& q : polar_of_rays(xi, u)) {
    if (vector_member(t, a, k, q)) out.push_back(q);
  }
  return out;
}

std::vector<StringArrow> arrows_out(const ReductionTable& t,
                                    const ProjString& q) {
  if (!in_SP0(t, q)) throw PreconditionError("string reduces to zero");
  std::vector<StringArrow> out;
  for (std::size_t k = 0; k <= q.length(); ++k) {
    out.push_back({q, q.head(k), q.tail(k)});
  }
  return out;
}

StringArrow compose(const StringArrow& a, const StringArrow& b) {
  if (a.target != b.source) throw UsageError("arrows do not compose");
  return {a.source, b.target, string_concat(b.tail, a.tail)};
}

std::vector<StringArrow> minimal_chain(const ProjString& q) {
  std::vector<StringArrow> out;
  for (std::size_t k = 0; k < q.length(); ++k) {
    const auto from = q.head(k);
    out.push_back({from, from.head(1), from.tail(1)});
  }
  return out;
}

bool presheaf_at(const ReductionTable& t, const ProjString& q,
                 const ComplexVector& psi) {
  return survives(t, q, unit(t, psi));
}

ComplexVector presheaf_restrict(const ReductionTable& t, const StringArrow& s,
                                const ComplexVector& psi) {
  if (!presheaf_at(t, s.source, psi)) {
    throw PreconditionError("vector is annihilated by the source string");
  }
  return t.reduce(s.tail) * psi;
}

Sieve Sieve::from_flags(ProjString context, const std::vector<bool>& flags) {
  if (flags.size() != context.length() + 1) {
    throw StructuralError("one flag per tail length expected");
  }
  Sieve s;
  s.context_ = std::move(context);
  for (std::size_t k = 0; k < flags.size(); ++k) {
    if (flags[k] && !s.min_tail_) s.min_tail_ = k;
    if (!flags[k] && s.min_tail_) {
      throw StructuralError("sieve is not closed under longer tails");
    }
  }
  return s;
}

bool Sieve::includes(std::size_t tail_length) const {
  return min_tail_ && tail_length >= *min_tail_ &&
         tail_length <= context_.length();
}

std::vector<std::size_t> Sieve::included_tail_lengths() const {
  std::vector<std::size_t> out;
  if (!min_tail_) return out;
  for (std::size_t k = *min_tail_; k <= context_.length(); ++k) {
    out.push_back(k);
  }
  return out;
}

std::vector<ProjString> Sieve::tails() const {
  std::vector<ProjString> out;
  for (auto k : included_tail_lengths()) out.push_back(context_.tail(k));
  return out;
}

Sieve sieve_truth_equal(const ReductionTable& t, const ComplexVector& psi,
                        const ComplexVector& phi, const ProjString& q) {
  require_projectors(t);
  const auto a = unit(t, psi);
  const auto b = unit(t, phi);
  if (!in_SP0(t, q)) throw ContextError("context string reduces to zero");
  if (!survives(t, q, a) || !survives(t, q, b)) {
    throw ContextError("state is annihilated in this context");
  }
  std::vector<bool> flags(q.length() + 1);
  for (std::size_t k = 0; k <= q.length(); ++k) {
    flags[k] = ray_equal_member(t, a, b, q.tail(k));
  }
  return Sieve::from_flags(q, flags);
}

Sieve sieve_valuation(const ReductionTable& t, const ComplexVector& psi,
                      const Subspace& k, const ProjString& q) {
  require_projectors(t);
  const auto a = unit(t, psi);
  if (!in_SP0(t, q)) throw ContextError("context string reduces to zero");
  if (!survives(t, q, a)) {
    throw ContextError("state is annihilated in this context");
  }
  std::vector<bool> flags(q.length() + 1);
  for (std::size_t n = 0; n <= q.length(); ++n) {
    flags[n] = vector_member(t, a, k, q.tail(n));
  }
  return Sieve::from_flags(q, flags);
}

}  // namespace mtopos
