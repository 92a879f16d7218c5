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

#include "mtopos/dsl.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace mtopos::dsl {

namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class Tok { ident, number, imag, punct, string, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  double value = 0.0;
  Location loc;
};

struct Failure {
  Diagnostic diag;
};

[[noreturn]] void fail(Location loc, std::string kind, std::string message) {
  throw Failure{Diagnostic{loc, std::move(kind), std::move(message)}};
}

bool ident_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c >= 0x80;
}

bool ident_char(unsigned char c) {
  return ident_start(c) || std::isdigit(c) || c == '\'';
}

std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead & 0xE0) == 0xC0) return 2;
  if ((lead & 0xF0) == 0xE0) return 3;
  if ((lead & 0xF8) == 0xF0) return 4;
  return 0;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.loc = here();
      if (pos_ >= text_.size()) {
        out.push_back(t);
        return out;
      }
      const auto c = static_cast<unsigned char>(text_[pos_]);
      if (ident_start(c)) {
        t.kind = Tok::ident;
        while (pos_ < text_.size() &&
               ident_char(static_cast<unsigned char>(text_[pos_]))) {
          take_char(t.text);
        }
      } else if (std::isdigit(c) || (c == '.' && pos_ + 1 < text_.size() &&
                                      std::isdigit(static_cast<unsigned char>(
                                          text_[pos_ + 1])))) {
        number(t);
      } else if (c == '"') {
        advance();
        t.kind = Tok::string;
        while (pos_ < text_.size() && text_[pos_] != '"' &&
               text_[pos_] != '\n') {
          take_char(t.text);
        }
        if (pos_ >= text_.size() || text_[pos_] != '"') {
          fail(t.loc, "lexical", "unterminated string");
        }
        advance();
      } else if (std::string_view("{}[](),;+-").find(static_cast<char>(c)) !=
                 std::string_view::npos) {
        t.kind = Tok::punct;
        t.text = std::string(1, static_cast<char>(c));
        advance();
      } else {
        fail(t.loc, "lexical",
             std::string("unexpected character '") + static_cast<char>(c) +
                 "'");
      }
      out.push_back(std::move(t));
    }
  }

 private:
  Location here() const { return {line_, column_}; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else if ((static_cast<unsigned char>(text_[pos_]) & 0xC0) != 0x80) {
      ++column_;
    }
    ++pos_;
  }

  // Copies one code point, validating UTF-8.
  void take_char(std::string& out) {
    const auto lead = static_cast<unsigned char>(text_[pos_]);
    const std::size_t n = utf8_length(lead);
    if (n == 0 || pos_ + n > text_.size()) {
      fail(here(), "lexical", "invalid UTF-8");
    }
    for (std::size_t i = 1; i < n; ++i) {
      if ((static_cast<unsigned char>(text_[pos_ + i]) & 0xC0) != 0x80) {
        fail(here(), "lexical", "invalid UTF-8");
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(text_[pos_]);
      advance();
    }
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#' ||
                 (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/')) {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  void number(Token& t) {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        advance();
      }
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      advance();
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) {
        ++look;
      }
      if (look < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[look]))) {
        while (pos_ < look) advance();
        digits();
      }
    }
    t.text = std::string(text_.substr(start, pos_ - start));
    const auto* first = t.text.data();
    const auto* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, t.value);
    if (ec != std::errc() || ptr != last || !std::isfinite(t.value)) {
      fail(t.loc, "lexical", "malformed number '" + t.text + "'");
    }
    t.kind = Tok::number;
    if (pos_ < text_.size() && text_[pos_] == 'i' &&
        (pos_ + 1 >= text_.size() ||
         !ident_char(static_cast<unsigned char>(text_[pos_ + 1])))) {
      advance();
      t.kind = Tok::imag;
      t.text += "i";
    }
    if (pos_ < text_.size() &&
        ident_char(static_cast<unsigned char>(text_[pos_]))) {
      fail(here(), "lexical", "malformed number");
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  SystemSpec run(std::vector<Diagnostic>& diags) {
    SystemSpec spec;
    while (peek().kind != Tok::end) {
      const std::size_t start = pos_;
      try {
        declaration(spec);
      } catch (const Failure& f) {
        diags.push_back(f.diag);
        recover(start);
      }
    }
    return spec;
  }

  // Entry points for option literals.
  std::vector<double> real_set_only() {
    auto out = real_list("{", "}");
    expect_end();
    return out;
  }
  std::vector<std::string> name_set_only() {
    auto out = name_set();
    expect_end();
    return out;
  }
  std::vector<std::vector<std::string>> string_set_only() {
    std::vector<std::vector<std::string>> out;
    expect("{");
    if (!accept("}")) {
      do {
        out.push_back(string_literal());
      } while (accept(","));
      expect("}");
    }
    expect_end();
    return out;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool is(std::string_view p) const {
    return peek().kind == Tok::punct && peek().text == p;
  }
  bool accept(std::string_view p) {
    if (!is(p)) return false;
    next();
    return true;
  }
  [[noreturn]] void unexpected(const std::string& wanted) const {
    const auto& t = peek();
    const std::string got =
        t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
    fail(t.loc, "syntax", "expected " + wanted + ", found " + got);
  }
  void expect(std::string_view p) {
    if (!accept(p)) unexpected("'" + std::string(p) + "'");
  }
  void expect_end() const {
    if (peek().kind != Tok::end) unexpected("end of input");
  }
  std::string identifier(const std::string& what) {
    if (peek().kind != Tok::ident) unexpected(what);
    return next().text;
  }
  // Element, point and state names may also be plain numbers.
  std::string name(const std::string& what) {
    if (peek().kind != Tok::ident && peek().kind != Tok::number) {
      unexpected(what);
    }
    return next().text;
  }

  // Skips to just past the '}' that closes the failed declaration.
  void recover(std::size_t start) {
    if (pos_ == start) next();
    int depth = 0;
    for (std::size_t i = start; i < pos_; ++i) {
      if (toks_[i].kind != Tok::punct) continue;
      if (toks_[i].text == "{") ++depth;
      if (toks_[i].text == "}") --depth;
    }
    if (depth <= 0 && pos_ > start && toks_[pos_ - 1].text == "}") return;
    while (peek().kind != Tok::end) {
      const Token& t = next();
      if (t.kind != Tok::punct) continue;
      if (t.text == "{") ++depth;
      if (t.text == "}" && --depth <= 0) return;
    }
  }

  std::size_t count(const std::string& what) {
    const Token& t = peek();
    if (t.kind != Tok::number || t.value < 0 || t.value != std::floor(t.value) ||
        t.value > 1e6) {
      unexpected(what);
    }
    next();
    return static_cast<std::size_t>(t.value);
  }

  double real() {
    double sign = 1.0;
    if (accept("-")) {
      sign = -1.0;
    } else {
      accept("+");
    }
    if (peek().kind != Tok::number) unexpected("a real number");
    return sign * next().value;
  }

  bool imag_next() const {
    return peek().kind == Tok::imag ||
           (peek().kind == Tok::ident && peek().text == "i");
  }
  double imag_value() {
    const Token& t = next();
    return t.kind == Tok::imag ? t.value : 1.0;
  }

  Complex complex_literal() {
    double sign = 1.0;
    if (accept("-")) {
      sign = -1.0;
    } else {
      accept("+");
    }
    if (imag_next()) return {0.0, sign * imag_value()};
    if (peek().kind != Tok::number) unexpected("a complex number");
    const double re = sign * next().value;
    if ((is("+") || is("-")) &&
        (peek(1).kind == Tok::imag ||
         (peek(1).kind == Tok::ident && peek(1).text == "i"))) {
      const double s = next().text == "-" ? -1.0 : 1.0;
      return {re, s * imag_value()};
    }
    return {re, 0.0};
  }

  std::vector<double> real_list(std::string_view open,
                                std::string_view close) {
    std::vector<double> out;
    expect(open);
    if (accept(close)) return out;
    do {
      out.push_back(real());
    } while (accept(","));
    expect(close);
    return out;
  }

  std::vector<std::string> name_set() {
    std::vector<std::string> out;
    expect("{");
    if (accept("}")) return out;
    do {
      out.push_back(name("a name"));
    } while (accept(","));
    expect("}");
    return out;
  }

  std::vector<std::string> string_literal() {
    std::vector<std::string> out;
    expect("(");
    if (accept(")")) return out;
    do {
      out.push_back(identifier("a letter name"));
    } while (accept(","));
    expect(")");
    return out;
  }

  ComplexVector complex_vector() {
    ComplexVector out;
    expect("[");
    do {
      out.push_back(complex_literal());
    } while (accept(","));
    expect("]");
    return out;
  }

  ComplexMatrix matrix() {
    const Location loc = peek().loc;
    std::vector<ComplexVector> rows;
    expect("[");
    do {
      rows.push_back(complex_vector());
    } while (accept(","));
    expect("]");
    for (const auto& r : rows) {
      if (r.size() != rows.front().size()) {
        fail(loc, "syntax", "ragged matrix");
      }
    }
    return ComplexMatrix(rows);
  }

  // [[entry,...],...] where entries are indices or names from `names`.
  std::vector<std::vector<std::uint32_t>> index_table(
      const std::vector<std::string>& names) {
    std::vector<std::vector<std::uint32_t>> out;
    expect("[");
    do {
      std::vector<std::uint32_t> row;
      expect("[");
      do {
        const Token& t = peek();
        auto it = std::find(names.begin(), names.end(), t.text);
        if (t.kind == Tok::ident && it != names.end()) {
          row.push_back(static_cast<std::uint32_t>(it - names.begin()));
          next();
        } else if (t.kind == Tok::ident) {
          fail(t.loc, "unresolved", "unknown name '" + t.text + "'");
        } else {
          const std::size_t v = count("an index or a name");
          if (v >= names.size()) {
            fail(t.loc, "invariant", "index " + t.text + " out of range");
          }
          row.push_back(static_cast<std::uint32_t>(v));
        }
      } while (accept(","));
      expect("]");
      out.push_back(std::move(row));
    } while (accept(","));
    expect("]");
    return out;
  }

  // `elements 3` or `elements {a,b,c}`.
  std::vector<std::string> element_names() {
    if (is("{")) return name_set();
    const std::size_t n = count("a count or a name set");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
    return out;
  }

  void declaration(SystemSpec& spec) {
    const Token& head = peek();
    if (head.kind != Tok::ident) unexpected("a declaration");
    const std::string word = head.text;
    if (word == "tolerance") {
      tolerance(spec);
    } else if (word == "monoid") {
      spec.monoids.push_back(monoid());
    } else if (word == "mset") {
      spec.msets.push_back(mset());
    } else if (word == "classical") {
      spec.classical.push_back(classical());
    } else if (word == "quantum") {
      spec.quantum.push_back(quantum());
    } else if (word == "query") {
      spec.queries.push_back(query());
    } else if (item_kind(word)) {
      auto it = std::find_if(spec.quantum.begin(), spec.quantum.end(),
                             [](const QuantumDecl& q) { return q.implicit; });
      if (it == spec.quantum.end()) {
        QuantumDecl q;
        q.name = "default";
        q.implicit = true;
        q.loc = head.loc;
        spec.quantum.push_back(std::move(q));
        it = spec.quantum.end() - 1;
      }
      it->items.push_back(item());
    } else {
      fail(head.loc, "syntax", "unknown declaration '" + word + "'");
    }
  }

  void tolerance(SystemSpec& spec) {
    ToleranceDecl t;
    t.loc = next().loc;
    expect("{");
    while (!accept("}")) {
      const auto key = identifier("'eps' or 'null_threshold'");
      if (key == "eps") {
        t.eps = real();
      } else if (key == "null_threshold") {
        t.null_threshold = real();
      } else {
        fail(toks_[pos_ - 1].loc, "syntax", "unknown tolerance '" + key + "'");
      }
      expect(";");
    }
    if (spec.tolerance) fail(t.loc, "invariant", "tolerance declared twice");
    spec.tolerance = t;
  }

  MonoidDecl monoid() {
    MonoidDecl m;
    m.loc = next().loc;
    m.name = identifier("a monoid name");
    expect("{");
    bool has_table = false;
    while (!accept("}")) {
      const Location loc = peek().loc;
      const auto key = identifier("'elements', 'table' or 'maps'");
      if (key == "elements") {
        m.elements = element_names();
      } else if (key == "table") {
        if (m.elements.empty()) {
          fail(loc, "syntax", "'elements' must precede 'table'");
        }
        m.table = index_table(m.elements);
        has_table = true;
      } else if (key == "maps") {
        m.maps = count("a degree");
      } else {
        fail(loc, "syntax", "unknown monoid field '" + key + "'");
      }
      expect(";");
    }
    if (m.maps && (has_table || !m.elements.empty())) {
      fail(m.loc, "syntax", "'maps' excludes 'elements' and 'table'");
    }
    if (!m.maps && !has_table) {
      fail(m.loc, "syntax", "monoid needs a table or 'maps'");
    }
    return m;
  }

  MSetDecl mset() {
    MSetDecl x;
    x.loc = next().loc;
    x.name = identifier("an M-set name");
    expect("{");
    bool has_action = false;
    while (!accept("}")) {
      const Location loc = peek().loc;
      const auto key = identifier("'monoid', 'points', 'action' or 'regular'");
      if (key == "monoid") {
        x.monoid = identifier("a monoid name");
      } else if (key == "points") {
        x.points = element_names();
      } else if (key == "action") {
        if (x.points.empty()) {
          fail(loc, "syntax", "'points' must precede 'action'");
        }
        x.action = index_table(x.points);
        has_action = true;
      } else if (key == "regular") {
        x.regular = true;
      } else {
        fail(loc, "syntax", "unknown M-set field '" + key + "'");
      }
      expect(";");
    }
    if (x.monoid.empty()) fail(x.loc, "syntax", "M-set needs a monoid");
    if (x.regular == has_action) {
      fail(x.loc, "syntax", "M-set needs exactly one of 'action' or 'regular'");
    }
    return x;
  }

  ClassicalDecl classical() {
    ClassicalDecl c;
    c.loc = next().loc;
    c.name = identifier("a system name");
    expect("{");
    while (!accept("}")) {
      const Location loc = peek().loc;
      const auto key = identifier("'states', 'values' or 'quantity'");
      if (key == "states") {
        c.states = name_set();
      } else if (key == "values") {
        c.values = real_list("{", "}");
      } else if (key == "quantity") {
        auto qname = identifier("a quantity name");
        c.quantities.emplace_back(std::move(qname), real_list("[", "]"));
      } else {
        fail(loc, "syntax", "unknown classical field '" + key + "'");
      }
      expect(";");
    }
    return c;
  }

  static std::optional<ItemKind> item_kind(const std::string& w) {
    if (w == "operator") return ItemKind::op;
    if (w == "projector") return ItemKind::projector;
    if (w == "state") return ItemKind::state;
    if (w == "density") return ItemKind::density;
    if (w == "rayset") return ItemKind::rayset;
    return std::nullopt;
  }

  QuantumItem item() {
    QuantumItem it;
    it.loc = peek().loc;
    it.kind = *item_kind(next().text);
    it.name = identifier("a name");
    expect("{");
    const Location loc = peek().loc;
    const auto key = identifier("a field");
    switch (it.kind) {
      case ItemKind::op:
      case ItemKind::projector:
      case ItemKind::density:
        if (key != "matrix") fail(loc, "syntax", "expected 'matrix'");
        it.matrix = matrix();
        break;
      case ItemKind::state:
        if (key != "vector") fail(loc, "syntax", "expected 'vector'");
        it.vector = complex_vector();
        break;
      case ItemKind::rayset:
        if (key != "rays") fail(loc, "syntax", "expected 'rays'");
        it.rays = name_set();
        break;
    }
    expect(";");
    expect("}");
    return it;
  }

  QuantumDecl quantum() {
    QuantumDecl q;
    q.loc = next().loc;
    q.name = identifier("a system name");
    expect("{");
    while (!accept("}")) {
      const Token& t = peek();
      if (t.kind == Tok::ident && item_kind(t.text)) {
        q.items.push_back(item());
        continue;
      }
      const auto key = identifier("a quantum field");
      if (key == "dim") {
        q.dim = count("a dimension");
      } else if (key == "values") {
        q.values = real_list("{", "}");
      } else {
        fail(t.loc, "syntax", "unknown quantum field '" + key + "'");
      }
      expect(";");
    }
    return q;
  }

  QueryDecl query() {
    QueryDecl q;
    q.loc = next().loc;
    q.name = identifier("a query name");
    expect("{");
    while (!accept("}")) {
      const auto key = identifier("an option name");
      std::string value;
      int braces = 0;
      while (braces > 0 || !is(";")) {
        const Token& t = peek();
        if (t.kind == Tok::end || (braces == 0 && is("}"))) unexpected("';'");
        if (t.kind == Tok::punct && t.text == "{") ++braces;
        if (t.kind == Tok::punct && t.text == "}") --braces;
        value += next().text;
      }
      expect(";");
      q.args.emplace_back(key, value);
    }
    if (std::none_of(q.args.begin(), q.args.end(),
                     [](const auto& kv) { return kv.first == "command"; })) {
      fail(q.loc, "syntax", "query needs a 'command'");
    }
    return q;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

template <typename F>
auto parse_literal(std::string_view text, F f) {
  try {
    Parser p(Lexer(text).run());
    return f(p);
  } catch (const Failure& e) {
    throw UsageError("cannot parse '" + std::string(text) +
                     "': " + e.diag.message);
  } catch (const Error& e) {
    throw UsageError("cannot parse '" + std::string(text) + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

template <typename T, typename F>
std::string join(const std::vector<T>& xs, F f,
                 std::string_view open, std::string_view close) {
  std::string out(open);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += f(xs[i]);
  }
  return out + std::string(close);
}

std::string names(const std::vector<std::string>& xs) {
  return join(xs, [](const std::string& s) { return s; }, "{", "}");
}

std::string reals(const std::vector<double>& xs, std::string_view open,
                  std::string_view close) {
  return join(xs, format_real, open, close);
}

std::string vec(const ComplexVector& v) {
  return join(v, format_complex, "[", "]");
}

std::string mat(const ComplexMatrix& m) {
  return join(m.to_rows(), vec, "[", "]");
}

std::string table_text(const std::vector<std::vector<std::uint32_t>>& t) {
  return join(t, [](const std::vector<std::uint32_t>& row) {
    return join(row, [](std::uint32_t x) { return std::to_string(x); }, "[", "]");
  }, "[", "]");
}

void print_item(std::ostringstream& os, const QuantumItem& it,
                const std::string& indent) {
  static const char* kinds[] = {"operator", "projector", "state", "density",
                                "rayset"};
  os << indent << kinds[static_cast<int>(it.kind)] << " " << it.name << " { ";
  switch (it.kind) {
    case ItemKind::op:
    case ItemKind::projector:
    case ItemKind::density: os << "matrix " << mat(it.matrix); break;
    case ItemKind::state: os << "vector " << vec(it.vector); break;
    case ItemKind::rayset: os << "rays " << names(it.rays); break;
  }
  os << "; }\n";
}

// ---------------------------------------------------------------------------
// Model construction
// ---------------------------------------------------------------------------

[[noreturn]] void model_fail(Location loc, std::string kind,
                             std::string message) {
  throw ModelError(Diagnostic{loc, std::move(kind), std::move(message)});
}

// Runs `f`, turning library errors into invariant diagnostics at `loc`.
template <typename F>
auto at(Location loc, F f) {
  try {
    return f();
  } catch (const ModelError&) {
    throw;
  } catch (const Error& e) {
    model_fail(loc, "invariant", e.what());
  }
}

template <typename Map>
void claim(Map& m, const std::string& name, Location loc, const char* what) {
  if (m.count(name)) {
    model_fail(loc, "invariant", std::string("duplicate ") + what + " '" +
                                     name + "'");
  }
}

template <typename Map>
const auto& lookup(const Map& m, const std::string& name, const char* what) {
  if (name.empty()) {
    if (m.size() != 1) {
      throw LookupError(std::string("name a ") + what + " (" +
                        std::to_string(m.size()) + " declared)");
    }
    return m.begin()->second;
  }
  auto it = m.find(name);
  if (it == m.end()) {
    throw LookupError(std::string("unknown ") + what + " '" + name + "'");
  }
  return it->second;
}

std::shared_ptr<const QuantumModel> build_quantum(const QuantumDecl& d,
                                                  const TolerancePolicy& tol,
                                                  std::size_t max_dim) {
  auto q = std::make_shared<QuantumModel>();
  q->decl = &d;
  q->tol = tol;
  std::optional<std::size_t> dim = d.dim;
  for (const auto& it : d.items) {
    if (dim) break;
    if (it.kind == ItemKind::state) dim = it.vector.size();
    if (it.kind != ItemKind::state && it.kind != ItemKind::rayset) {
      dim = it.matrix.rows();
    }
  }
  if (!dim || *dim == 0) model_fail(d.loc, "invariant", "dimension unknown");
  if (*dim > max_dim) {
    model_fail(d.loc, "invariant",
               "dimension " + std::to_string(*dim) + " exceeds the maximum " +
                   std::to_string(max_dim));
  }
  q->dim = *dim;

  std::set<std::string> taken;
  std::vector<std::pair<std::string, ComplexMatrix>> ops, projectors;
  for (const auto& it : d.items) {
    if (!taken.insert(it.name).second) {
      model_fail(it.loc, "invariant", "duplicate name '" + it.name + "'");
    }
    const bool is_matrix =
        it.kind != ItemKind::state && it.kind != ItemKind::rayset;
    if (is_matrix && (it.matrix.rows() != q->dim || !it.matrix.square())) {
      model_fail(it.loc, "invariant", "'" + it.name + "' is not " +
                                          std::to_string(q->dim) + "x" +
                                          std::to_string(q->dim));
    }
    switch (it.kind) {
      case ItemKind::op:
        if (max_abs_diff(it.matrix, it.matrix.adjoint()) > tol.eps) {
          model_fail(it.loc, "invariant",
                     "operator '" + it.name + "' is not Hermitian");
        }
        ops.emplace_back(it.name, it.matrix);
        q->matrices.emplace(it.name, it.matrix);
        break;
      case ItemKind::projector:
        if (!is_projector(it.matrix, tol)) {
          model_fail(it.loc, "invariant", "projector '" + it.name +
                                              "' is not idempotent Hermitian");
        }
        projectors.emplace_back(it.name, it.matrix);
        q->matrices.emplace(it.name, it.matrix);
        break;
      case ItemKind::state:
        if (it.vector.size() != q->dim) {
          model_fail(it.loc, "invariant",
                     "state '" + it.name + "' has the wrong dimension");
        }
        if (norm(it.vector) <= tol.null_threshold) {
          model_fail(it.loc, "invariant", "state '" + it.name + "' is null");
        }
        q->states.emplace(it.name, it.vector);
        break;
      case ItemKind::density:
        q->densities.emplace(
            it.name, at(it.loc, [&] { return DensityMatrix(it.matrix, tol); }));
        break;
      case ItemKind::rayset: {
        RaySet rays;
        for (const auto& r : it.rays) {
          auto s = q->states.find(r);
          if (s == q->states.end()) {
            model_fail(it.loc, "unresolved", "unknown state '" + r + "'");
          }
          at(it.loc, [&] { rays.add(Ray::of(s->second, tol), r, tol); });
        }
        q->raysets.emplace(it.name, std::move(rays));
        break;
      }
    }
  }
  if (!ops.empty() || d.values) {
    q->system = at(d.loc, [&] {
      return std::make_shared<const QuantumSystem>(
          q->dim, d.values.value_or(std::vector<double>{}), ops, tol, max_dim);
    });
  }
  if (!projectors.empty()) {
    q->alphabet = at(d.loc, [&] {
      return std::make_shared<const Alphabet>(projectors,
                                              AlphabetKind::projector, tol);
    });
  }
  return q;
}

}  // namespace

std::string to_string(const Diagnostic& d) {
  return std::to_string(d.loc.line) + ":" + std::to_string(d.loc.column) +
         ": " + d.kind + ": " + d.message;
}

std::string format_real(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return format_real(z.real());
  const std::string im = format_real(std::abs(z.imag())) + "i";
  if (z.real() == 0.0) return (z.imag() < 0 ? "-" : "") + im;
  return format_real(z.real()) + (z.imag() < 0 ? "-" : "+") + im;
}

std::vector<double> parse_real_set(std::string_view text) {
  return parse_literal(text, [](Parser& p) { return p.real_set_only(); });
}

std::vector<std::string> parse_name_set(std::string_view text) {
  return parse_literal(text, [](Parser& p) { return p.name_set_only(); });
}

std::vector<std::vector<std::string>> parse_string_set(std::string_view text) {
  return parse_literal(text, [](Parser& p) { return p.string_set_only(); });
}

TolerancePolicy declared_tolerance(const SystemSpec& spec) {
  TolerancePolicy tol;
  if (spec.tolerance) {
    if (spec.tolerance->eps) tol.eps = *spec.tolerance->eps;
    if (spec.tolerance->null_threshold) {
      tol.null_threshold = *spec.tolerance->null_threshold;
    }
  }
  return tol;
}

ParseResult parse_spec(std::string_view text, std::size_t max_dim) {
  ParseResult out;
  try {
    std::vector<Token> tokens;
    try {
      tokens = Lexer(text).run();
    } catch (const Failure& f) {
      out.diagnostics.push_back(f.diag);
      return out;
    }
    auto spec = Parser(std::move(tokens)).run(out.diagnostics);
    if (!out.diagnostics.empty()) return out;
    try {
      const auto tol = declared_tolerance(spec);
      at(spec.tolerance ? spec.tolerance->loc : Location{1, 1},
         [&] { tol.validate(); });
      Model check(spec, tol, max_dim);
    } catch (const ModelError& e) {
      out.diagnostics.push_back(e.diagnostic());
      return out;
    }
    out.spec = std::move(spec);
  } catch (const std::exception& e) {
    out.diagnostics.push_back({Location{}, "internal", e.what()});
  }
  return out;
}

std::string print_spec(const SystemSpec& spec) {
  std::ostringstream os;
  if (spec.tolerance) {
    os << "tolerance {";
    if (spec.tolerance->eps) os << " eps " << format_real(*spec.tolerance->eps) << ";";
    if (spec.tolerance->null_threshold) {
      os << " null_threshold " << format_real(*spec.tolerance->null_threshold)
         << ";";
    }
    os << " }\n";
  }
  for (const auto& m : spec.monoids) {
    os << "monoid " << m.name << " {";
    if (m.maps) {
      os << " maps " << *m.maps << ";";
    } else {
      os << " elements " << names(m.elements) << "; table "
         << table_text(m.table) << ";";
    }
    os << " }\n";
  }
  for (const auto& x : spec.msets) {
    os << "mset " << x.name << " { monoid " << x.monoid << ";";
    if (x.regular) {
      os << " regular;";
    } else {
      os << " points " << names(x.points) << "; action " << table_text(x.action)
         << ";";
    }
    os << " }\n";
  }
  for (const auto& c : spec.classical) {
    os << "classical " << c.name << " {\n  states " << names(c.states)
       << ";\n  values " << reals(c.values, "{", "}") << ";\n";
    for (const auto& [q, vs] : c.quantities) {
      os << "  quantity " << q << " " << reals(vs, "[", "]") << ";\n";
    }
    os << "}\n";
  }
  for (const auto& q : spec.quantum) {
    if (q.implicit) {
      for (const auto& it : q.items) print_item(os, it, "");
      continue;
    }
    os << "quantum " << q.name << " {\n";
    if (q.dim) os << "  dim " << *q.dim << ";\n";
    if (q.values) os << "  values " << reals(*q.values, "{", "}") << ";\n";
    for (const auto& it : q.items) print_item(os, it, "  ");
    os << "}\n";
  }
  for (const auto& q : spec.queries) {
    os << "query " << q.name << " {";
    for (const auto& [k, v] : q.args) {
      const bool bare =
          !v.empty() && (v.front() == '{' ||
                         v.find_first_of(" \t\"#;{}") == std::string::npos);
      os << " " << k << " " << (bare ? v : "\"" + v + "\"") << ";";
    }
    os << " }\n";
  }
  return os.str();
}

Model::Model(const SystemSpec& spec, TolerancePolicy tol, std::size_t max_dim)
    : spec_(&spec), tol_(tol) {
  tol_.validate();
  for (const auto& d : spec.monoids) {
    claim(monoids_, d.name, d.loc, "monoid");
    monoids_[d.name] = at(d.loc, [&] {
      if (d.maps) {
        auto t = TransformationMonoid::full(*d.maps);
        std::vector<std::string> labels;
        for (const auto& f : t.maps()) {
          labels.push_back(join(f, [](std::uint32_t v) { return std::to_string(v); },
                                "[", "]"));
        }
        return make_monoid(t.monoid()->table(), labels);
      }
      if (d.table.size() != d.elements.size()) {
        throw StructuralError("table has " + std::to_string(d.table.size()) +
                              " rows for " + std::to_string(d.elements.size()) +
                              " elements");
      }
      return make_monoid(d.table, d.elements);
    });
  }
  for (const auto& d : spec.msets) {
    claim(msets_, d.name, d.loc, "M-set");
    auto m = monoids_.find(d.monoid);
    if (m == monoids_.end()) {
      model_fail(d.loc, "unresolved", "unknown monoid '" + d.monoid + "'");
    }
    msets_[d.name] = at(d.loc, [&] {
      if (d.regular) return std::make_shared<const MSet>(MSet::regular(m->second));
      return std::make_shared<const MSet>(m->second, d.action, d.points);
    });
  }
  for (const auto& d : spec.classical) {
    claim(classical_, d.name, d.loc, "classical system");
    classical_[d.name] = at(d.loc, [&] {
      return std::make_shared<const ClassicalSystem>(d.states, d.values,
                                                     d.quantities);
    });
  }
  for (const auto& d : spec.quantum) {
    claim(quantum_, d.name, d.loc, "quantum system");
    quantum_[d.name] = build_quantum(d, tol_, max_dim);
  }
}

const MonoidPtr& Model::monoid(const std::string& name) const {
  return lookup(monoids_, name, "monoid");
}

const MSetPtr& Model::mset(const std::string& name) const {
  return lookup(msets_, name, "M-set");
}

const ClassicalSystem& Model::classical(const std::string& name) const {
  return *lookup(classical_, name, "classical system");
}

const QuantumModel& Model::quantum(const std::string& name) const {
  return *lookup(quantum_, name, "quantum system");
}

}  // namespace mtopos::dsl
