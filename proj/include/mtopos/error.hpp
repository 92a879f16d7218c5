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

#pragma once

#include <stdexcept>
#include <string>

namespace mtopos {

/// Base of every exception thrown by the library. `kind()` is the stable
/// machine-readable tag used in CLI diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define MTOPOS_DEFINE_ERROR(Name, tag)                          \
  class Name : public Error {                                   \
   public:                                                      \
    explicit Name(const std::string& what) : Error(tag, what) {} \
  };

// Malformed tables or shapes.
MTOPOS_DEFINE_ERROR(StructuralError, "structural")
// Operands that do not belong together (e.g. ideals of different monoids).
MTOPOS_DEFINE_ERROR(UsageError, "usage")
// An enumeration would exceed its configured budget.
MTOPOS_DEFINE_ERROR(CapacityError, "capacity")
MTOPOS_DEFINE_ERROR(PreconditionError, "precondition")
MTOPOS_DEFINE_ERROR(ValidationError, "validation")
MTOPOS_DEFINE_ERROR(NumericError, "numeric")
MTOPOS_DEFINE_ERROR(DomainError, "domain")
MTOPOS_DEFINE_ERROR(LookupError, "lookup")
// Normalisation of an annihilated vector.
MTOPOS_DEFINE_ERROR(NullReduction, "null-reduction")
MTOPOS_DEFINE_ERROR(ContextError, "context")

#undef MTOPOS_DEFINE_ERROR

}  // namespace mtopos
