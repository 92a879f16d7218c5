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

// The free monoid of projector strings and bounded certificates for its
// (infinite) left ideals.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace mtopos {

using Letter = std::uint16_t;

/// A finite string of letters in display order: (R_p, ..., R_1). The
/// rightmost letter is applied first. The empty string is the unit.
class ProjString {
 public:
  ProjString() = default;
  explicit ProjString(std::vector<Letter> letters)
      : letters_(std::move(letters)) {}
  ProjString(std::initializer_list<Letter> letters) : letters_(letters) {}

  const std::vector<Letter>& letters() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }

  /// The k letters applied first, i.e. the rightmost k.
  ProjString tail(std::size_t k) const;
  /// Everything but the rightmost k letters.
  ProjString head(std::size_t k) const;

  friend auto operator<=>(const ProjString&, const ProjString&) = default;
  friend bool operator==(const ProjString&, const ProjString&) = default;

 private:
  std::vector<Letter> letters_;
};

/// Q⋆R: Q's letters followed by R's, so R acts first.
ProjString string_concat(const ProjString& q, const ProjString& r);

/// Renders "(A,B)" with the given letter names; "()" for the unit.
std::string to_string(const ProjString& s,
                      const std::vector<std::string>& names);

/// The free monoid over a named alphabet.
class ProjStringMonoid {
 public:
  explicit ProjStringMonoid(std::vector<std::string> alphabet);

  std::size_t alphabet_size() const noexcept { return alphabet_.size(); }
  const std::vector<std::string>& alphabet() const noexcept {
    return alphabet_;
  }
  Letter letter(const std::string& name) const;
  /// Parses "(A,B,...)" or "()" / "∅"; throws LookupError for unknown names.
  ProjString parse(const std::string& text) const;
  std::string format(const ProjString& s) const {
    return to_string(s, alphabet_);
  }

 private:
  std::vector<std::string> alphabet_;
};

/// Number of strings of length ≤ max_len, saturating at SIZE_MAX.
std::size_t count_strings(std::size_t alphabet_size, std::size_t max_len);

/// All strings of length ≤ max_len, shortest first and lexicographic in
/// letter index within a length. Throws CapacityError past `budget`.
std::vector<ProjString> enumerate_strings(std::size_t alphabet_size,
                                          std::size_t max_len,
                                          std::size_t budget = 1 << 20);

/// Position of `s` in the order produced by `enumerate_strings`.
std::size_t string_index(const ProjString& s, std::size_t alphabet_size);

/// A left violation of the ideal property: `member` is in the ideal but
/// `extended` = (letter)⋆member is not.
struct IdealViolation {
  ProjString member;
  ProjString extended;
};

struct IdealCertificate {
  std::size_t depth = 0;
  std::vector<IdealViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// A left ideal of the free string monoid, given by a membership
/// predicate, together with every member up to `max_verified_length()` and
/// a certificate that the ideal property holds up to that length.
class BoundedIdeal {
 public:
  using Predicate = std::function<bool(const ProjString&)>;

  /// Evaluates `predicate` on every string of length ≤ depth and checks
  /// P⋆Q ∈ I for each member Q shorter than depth and each letter P.
  static BoundedIdeal verify(std::size_t alphabet_size, Predicate predicate,
                             std::size_t depth);

  bool contains(const ProjString& s) const { return predicate_(s); }
  std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  std::size_t max_verified_length() const noexcept {
    return certificate_.depth;
  }
  const std::vector<ProjString>& witness_cache() const noexcept {
    return members_;
  }
  const IdealCertificate& certificate() const noexcept {
    return certificate_;
  }
  /// Membership flags for the strings of `enumerate_strings(alphabet,
  /// depth)`, in that order.
  const std::vector<bool>& membership() const noexcept { return flags_; }

 private:
  std::size_t alphabet_size_ = 0;
  Predicate predicate_;
  std::vector<ProjString> members_;
  std::vector<bool> flags_;
  IdealCertificate certificate_;
};

}  // namespace mtopos
