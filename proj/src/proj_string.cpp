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

#include "mtopos/proj_string.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "mtopos/error.hpp"

namespace mtopos {

ProjString ProjString::tail(std::size_t k) const {
  if (k > letters_.size()) {
    throw UsageError("tail longer than the string");
  }
  return ProjString(std::vector<Letter>(letters_.end() - static_cast<std::ptrdiff_t>(k),
                                        letters_.end()));
}

ProjString ProjString::head(std::size_t k) const {
  if (k > letters_.size()) {
    throw UsageError("head longer than the string");
  }
  return ProjString(std::vector<Letter>(
      letters_.begin(), letters_.end() - static_cast<std::ptrdiff_t>(k)));
}

ProjString string_concat(const ProjString& q, const ProjString& r) {
  std::vector<Letter> out = q.letters();
  out.insert(out.end(), r.letters().begin(), r.letters().end());
  return ProjString(std::move(out));
}

std::string to_string(const ProjString& s,
                      const std::vector<std::string>& names) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.length(); ++i) {
    if (i > 0) out += ",";
    out += s[i] < names.size() ? names[s[i]] : std::to_string(s[i]);
  }
  return out + ")";
}

ProjStringMonoid::ProjStringMonoid(std::vector<std::string> alphabet)
    : alphabet_(std::move(alphabet)) {
  if (alphabet_.size() > std::numeric_limits<Letter>::max()) {
    throw CapacityError("alphabet too large");
  }
}

Letter ProjStringMonoid::letter(const std::string& name) const {
  auto it = std::find(alphabet_.begin(), alphabet_.end(), name);
  if (it == alphabet_.end()) {
    throw LookupError("unknown letter '" + name + "'");
  }
  return static_cast<Letter>(it - alphabet_.begin());
}

ProjString ProjStringMonoid::parse(const std::string& text) const {
  auto trim = [](std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
  };
  std::string body = trim(text);
  if (body == "∅" || body == "()") return {};
  if (body.size() < 2 || body.front() != '(' || body.back() != ')') {
    throw UsageError("string literal must look like (A,B,...): " + text);
  }
  body = body.substr(1, body.size() - 2);
  std::vector<Letter> letters;
  std::size_t start = 0;
  while (start <= body.size()) {
    auto comma = body.find(',', start);
    if (comma == std::string::npos) comma = body.size();
    letters.push_back(letter(trim(body.substr(start, comma - start))));
    start = comma + 1;
  }
  return ProjString(std::move(letters));
}

std::size_t count_strings(std::size_t alphabet_size, std::size_t max_len) {
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  std::size_t total = 0;
  std::size_t level = 1;
  for (std::size_t k = 0; k <= max_len; ++k) {
    if (total > kMax - level) return kMax;
    total += level;
    if (k < max_len) {
      if (alphabet_size != 0 && level > kMax / alphabet_size) return kMax;
      level *= alphabet_size;
    }
  }
  return total;
}

std::vector<ProjString> enumerate_strings(std::size_t alphabet_size,
                                          std::size_t max_len,
                                          std::size_t budget) {
  const std::size_t total = count_strings(alphabet_size, max_len);
  if (total > budget) {
    throw CapacityError(std::to_string(total) + " strings exceed the budget " +
                        std::to_string(budget));
  }
  std::vector<ProjString> out;
  out.reserve(total);
  out.emplace_back();
  std::size_t level_begin = 0;
  for (std::size_t k = 1; k <= max_len && alphabet_size > 0; ++k) {
    const std::size_t level_end = out.size();
    for (Letter a = 0; a < alphabet_size; ++a) {
      for (std::size_t i = level_begin; i < level_end; ++i) {
        std::vector<Letter> letters{a};
        const auto& rest = out[i].letters();
        letters.insert(letters.end(), rest.begin(), rest.end());
        out.emplace_back(std::move(letters));
      }
    }
    level_begin = level_end;
  }
  return out;
}

std::size_t string_index(const ProjString& s, std::size_t alphabet_size) {
  const std::size_t p = s.length();
  std::size_t offset = p == 0 ? 0 : count_strings(alphabet_size, p - 1);
  std::size_t rank = 0;
  for (Letter l : s.letters()) rank = rank * alphabet_size + l;
  return offset + rank;
}

BoundedIdeal BoundedIdeal::verify(std::size_t alphabet_size,
                                  Predicate predicate, std::size_t depth) {
  BoundedIdeal ideal;
  ideal.alphabet_size_ = alphabet_size;
  ideal.predicate_ = std::move(predicate);
  ideal.certificate_.depth = depth;
  const auto universe = enumerate_strings(alphabet_size, depth);
  ideal.flags_.reserve(universe.size());
  for (const auto& s : universe) {
    const bool in = ideal.predicate_(s);
    ideal.flags_.push_back(in);
    if (in) ideal.members_.push_back(s);
  }
  for (const auto& q : ideal.members_) {
    if (q.length() >= depth) continue;
    for (Letter p = 0; p < alphabet_size; ++p) {
      ProjString pq = string_concat(ProjString{p}, q);
      if (!ideal.flags_[string_index(pq, alphabet_size)]) {
        ideal.certificate_.violations.push_back({q, std::move(pq)});
      }
    }
  }
  return ideal;
}

}  // namespace mtopos
