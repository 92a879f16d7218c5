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

// The system-definition language: declarations, a recursive-descent parser
// with located diagnostics, a canonical printer, and the model built from a
// parsed spec.

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mtopos/classical.hpp"
#include "mtopos/context.hpp"
#include "mtopos/error.hpp"
#include "mtopos/linalg.hpp"
#include "mtopos/monoid.hpp"
#include "mtopos/mset.hpp"
#include "mtopos/quantum.hpp"
#include "mtopos/reduction.hpp"

namespace mtopos::dsl {

/// 1-based line and column (columns count code points).
struct Location {
  std::size_t line = 0;
  std::size_t column = 0;
  // Locations never take part in structural comparison.
  friend bool operator==(const Location&, const Location&) { return true; }
};

struct Diagnostic {
  Location loc;
  std::string kind;  // lexical, syntax, unresolved, invariant
  std::string message;
};

std::string to_string(const Diagnostic& d);

struct ToleranceDecl {
  std::optional<double> eps;
  std::optional<double> null_threshold;
  Location loc;
  friend bool operator==(const ToleranceDecl&, const ToleranceDecl&) = default;
};

/// Either an explicit table over named elements or the full Map(n,n).
struct MonoidDecl {
  std::string name;
  std::vector<std::string> elements;
  Table table;
  std::optional<std::size_t> maps;
  Location loc;
  friend bool operator==(const MonoidDecl&, const MonoidDecl&) = default;
};

struct MSetDecl {
  std::string name;
  std::string monoid;
  bool regular = false;
  std::vector<std::string> points;
  std::vector<std::vector<Point>> action;  // action[m][x] = mx
  Location loc;
  friend bool operator==(const MSetDecl&, const MSetDecl&) = default;
};

struct ClassicalDecl {
  std::string name;
  std::vector<std::string> states;
  std::vector<double> values;
  std::vector<std::pair<std::string, std::vector<double>>> quantities;
  Location loc;
  friend bool operator==(const ClassicalDecl&, const ClassicalDecl&) = default;
};

enum class ItemKind { op, projector, state, density, rayset };

struct QuantumItem {
  ItemKind kind = ItemKind::op;
  std::string name;
  ComplexMatrix matrix;             // op, projector, density
  ComplexVector vector;             // state
  std::vector<std::string> rays;    // rayset: state names
  Location loc;
  friend bool operator==(const QuantumItem&, const QuantumItem&) = default;
};

struct QuantumDecl {
  std::string name;
  bool implicit = false;  // collects top-level items
  std::optional<std::size_t> dim;
  std::optional<std::vector<double>> values;
  std::vector<QuantumItem> items;
  Location loc;
  friend bool operator==(const QuantumDecl&, const QuantumDecl&) = default;
};

/// A stored command: `command` plus option values as written.
struct QueryDecl {
  std::string name;
  std::vector<std::pair<std::string, std::string>> args;
  Location loc;
  friend bool operator==(const QueryDecl&, const QueryDecl&) = default;
};

struct SystemSpec {
  std::optional<ToleranceDecl> tolerance;
  std::vector<MonoidDecl> monoids;
  std::vector<MSetDecl> msets;
  std::vector<ClassicalDecl> classical;
  std::vector<QuantumDecl> quantum;
  std::vector<QueryDecl> queries;
  friend bool operator==(const SystemSpec&, const SystemSpec&) = default;
};

struct ParseResult {
  std::optional<SystemSpec> spec;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return spec.has_value() && diagnostics.empty(); }
};

/// Never throws; malformed input yields diagnostics. Successful parses are
/// also built into a Model with the declared tolerance so that invariant
/// violations are reported here.
ParseResult parse_spec(std::string_view text, std::size_t max_dim = 16);

/// Canonical text that parses back to an equal spec.
std::string print_spec(const SystemSpec& spec);

/// Shortest text that reads back as the same double.
std::string format_real(double x);
std::string format_complex(Complex z);

/// Literal parsers for option values; throw UsageError when malformed.
std::vector<double> parse_real_set(std::string_view text);        // {1,-1}
std::vector<std::string> parse_name_set(std::string_view text);   // {a,b}
std::vector<std::vector<std::string>> parse_string_set(
    std::string_view text);                                       // {(A,B),()}

/// A quantum declaration built with a given tolerance.
struct QuantumModel {
  const QuantumDecl* decl = nullptr;
  std::size_t dim = 0;
  TolerancePolicy tol;
  /// Operators only; null when none are declared.
  std::shared_ptr<const QuantumSystem> system;
  /// Projectors in declaration order; null when none are declared.
  std::shared_ptr<const Alphabet> alphabet;
  std::map<std::string, ComplexMatrix> matrices;  // operators and projectors
  std::map<std::string, ComplexVector> states;
  std::map<std::string, DensityMatrix> densities;
  std::map<std::string, RaySet> raysets;
};

/// Runtime objects for every declaration. Construction throws ModelError
/// carrying the offending declaration's location.
class Model {
 public:
  Model(const SystemSpec& spec, TolerancePolicy tol, std::size_t max_dim = 16);

  const SystemSpec& spec() const noexcept { return *spec_; }
  const TolerancePolicy& tolerance() const noexcept { return tol_; }

  /// Lookups throw LookupError for unknown names. An empty name selects
  /// the only declaration of that kind.
  const MonoidPtr& monoid(const std::string& name) const;
  const MSetPtr& mset(const std::string& name) const;
  const ClassicalSystem& classical(const std::string& name) const;
  const QuantumModel& quantum(const std::string& name) const;

 private:
  const SystemSpec* spec_;
  TolerancePolicy tol_;
  std::map<std::string, MonoidPtr> monoids_;
  std::map<std::string, MSetPtr> msets_;
  std::map<std::string, std::shared_ptr<const ClassicalSystem>> classical_;
  std::map<std::string, std::shared_ptr<const QuantumModel>> quantum_;
};

class ModelError : public Error {
 public:
  explicit ModelError(Diagnostic d) : Error(d.kind, d.message), diag_(std::move(d)) {}
  const Diagnostic& diagnostic() const noexcept { return diag_; }

 private:
  Diagnostic diag_;
};

/// The tolerance a spec declares, defaults elsewhere.
TolerancePolicy declared_tolerance(const SystemSpec& spec);

}  // namespace mtopos::dsl
