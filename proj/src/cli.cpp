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

#include "mtopos/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mtopos/classical.hpp"
#include "mtopos/context.hpp"
#include "mtopos/ideal.hpp"
#include "mtopos/mset.hpp"
#include "mtopos/quantum.hpp"
#include "mtopos/reduction.hpp"
#include "mtopos/selftest.hpp"

namespace mtopos::cli {

namespace {

struct Context {
  const Request& request;
  const dsl::Model& model;
  const Config& config;
  Json result = Json::object();
  Json universe;  // stays null unless a command enumerates strings
};

std::optional<std::string> opt(const Context& c, const std::string& key) {
  auto it = c.request.args.find(key);
  if (it == c.request.args.end()) return std::nullopt;
  return it->second;
}

std::string need(const Context& c, const std::string& key) {
  auto v = opt(c, key);
  if (!v) throw UsageError("missing --" + key);
  return *v;
}

std::size_t to_size(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty() || text.front() == '-') {
    throw UsageError("--" + key + " expects a non-negative integer");
  }
  return v;
}

std::size_t depth(const Context& c) {
  auto d = opt(c, "depth");
  return d ? to_size("depth", *d) : c.config.depth;
}

Json ideal_json(const LeftIdeal& i) {
  Json out = Json::array();
  for (auto e : i.elements()) out.push_back(i.monoid()->name(e));
  return out;
}

// ---------------------------------------------------------------------------
// Finite monoids and M-sets
// ---------------------------------------------------------------------------

void verify_heyting(Context& c) {
  const auto name = need(c, "monoid");
  const auto& m = c.model.monoid(name);
  const auto report = verify_heyting_algebra(m);
  Json ideals = Json::array();
  for (const auto& i : enumerate_left_ideals(m)) ideals.push_back(ideal_json(i));
  Json laws = Json::array();
  for (const auto& l : report.laws) {
    Json law{{"law", l.law}, {"cases", l.cases}, {"failures", l.failures}};
    if (!l.holds()) law["counterexample"] = l.first_counterexample;
    laws.push_back(law);
  }
  c.result = {{"monoid", name},
              {"size", report.monoid_size},
              {"ideal_count", report.ideal_count},
              {"ideals", ideals},
              {"laws", laws},
              {"all_hold", report.all_hold()},
              {"excluded_middle_counterexample",
               report.excluded_middle_witness
                   ? ideal_json(*report.excluded_middle_witness)
                   : Json()}};
}

void enumerate_ideals(Context& c) {
  const auto name = need(c, "monoid");
  const auto& m = c.model.monoid(name);
  Json ideals = Json::array();
  for (const auto& i : enumerate_left_ideals(m)) ideals.push_back(ideal_json(i));
  c.result = {{"monoid", name}, {"count", ideals.size()}, {"ideals", ideals}};
}

Point point_of(const MSet& x, const std::string& name) {
  for (Point p = 0; p < x.size(); ++p) {
    if (x.name(p) == name) return p;
  }
  throw LookupError("unknown point '" + name + "'");
}

PointSet points_of(const MSet& x, const std::string& text) {
  PointSet s = x.empty_set();
  for (const auto& n : dsl::parse_name_set(text)) s.set(point_of(x, n));
  return s;
}

Json points_json(const MSet& x, const PointSet& s) {
  Json out = Json::array();
  for (auto p : members_of(s)) out.push_back(x.name(p));
  return out;
}

void truth(Context& c) {
  const auto& x = *c.model.mset(opt(c, "mset").value_or(""));
  const auto mode = opt(c, "mode").value_or("in");
  if (mode == "in") {
    const auto p = point_of(x, need(c, "point"));
    const auto k = points_of(x, need(c, "subset"));
    const bool invariant = is_invariant(x, k);
    c.result = {{"mode", mode},
                {"point", x.name(p)},
                {"subset", points_json(x, k)},
                {"in_subset", ideal_json(truth_in_subset(x, p, k))},
                {"invariant", invariant},
                {"in_invariant", invariant
                                     ? ideal_json(truth_in_invariant(x, p, k))
                                     : Json()}};
  } else if (mode == "equal") {
    const auto a = point_of(x, need(c, "point"));
    const auto b = point_of(x, need(c, "other"));
    c.result = {{"mode", mode},
                {"point", x.name(a)},
                {"other", x.name(b)},
                {"equal", ideal_json(truth_equal(x, a, b))}};
  } else if (mode == "leq") {
    const auto k1 = points_of(x, need(c, "subset"));
    const auto k2 = points_of(x, need(c, "superset"));
    c.result = {{"mode", mode},
                {"subset", points_json(x, k1)},
                {"superset", points_json(x, k2)},
                {"leq", ideal_json(truth_subset_leq(x, k1, k2))}};
  } else if (mode == "chi") {
    const auto j = points_of(x, need(c, "subset"));
    const auto chi = characteristic_arrow(x, j);
    Json arrow = Json::array();
    for (Point p = 0; p < x.size(); ++p) {
      arrow.push_back({{"point", x.name(p)}, {"value", ideal_json(chi[p])}});
    }
    const auto back = classified_subset(x, chi);
    c.result = {{"mode", mode},
                {"subset", points_json(x, j)},
                {"arrow", arrow},
                {"equivariant", is_equivariant(x, chi)},
                {"classified", points_json(x, back)},
                {"round_trip", back == j}};
  } else {
    throw UsageError("--mode must be in, equal, leq or chi");
  }
}

// ---------------------------------------------------------------------------
// Classical and quantum valuations over Map(X,X)
// ---------------------------------------------------------------------------

Json maps_json(const FunctionMonoid& f, const LeftIdeal& i) {
  Json out = Json::array();
  for (auto e : i.elements()) out.push_back(f.describe(e));
  return out;
}

Json reals_json(const std::vector<double>& xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(x);
  return out;
}

void valuate_classical(Context& c) {
  const auto& sys = c.model.classical(opt(c, "system").value_or(""));
  const auto& f = *sys.functions();
  const auto s = sys.state_index(need(c, "state"));
  const auto q = sys.quantity_index(need(c, "quantity"));
  const auto delta = f.subset(dsl::parse_real_set(need(c, "range")));
  const auto direct = generalized_classical_valuation(sys, s, q, delta);
  const auto arrow = E_s_valuation(sys, s, q, delta);
  c.result = {{"state", sys.states()[s]},
              {"quantity", sys.quantities()[q].name},
              {"range", reals_json(f.members(delta))},
              {"truth", classical_truth(sys, s, q, delta)},
              {"count", direct.count()},
              {"full", direct.is_full()},
              {"valuation", maps_json(f, direct)},
              {"routes_agree", direct == arrow}};
}

const dsl::QuantumModel& quantum(const Context& c) {
  return c.model.quantum(opt(c, "system").value_or(""));
}

const ComplexVector& state(const dsl::QuantumModel& q, const std::string& n) {
  auto it = q.states.find(n);
  if (it == q.states.end()) throw LookupError("unknown state '" + n + "'");
  return it->second;
}

void valuate_quantum(Context& c) {
  const auto& q = quantum(c);
  if (!q.system) throw UsageError("no operators declared");
  const auto& sys = *q.system;
  const auto& psi = state(q, need(c, "state"));
  const auto op = sys.operator_index(need(c, "op"));
  const auto& f = sys.functions();
  const auto delta = f.subset(dsl::parse_real_set(need(c, "range")));
  const auto direct = quantum_function_valuation(sys, psi, op, delta);
  const auto arrow = E_psi_valuation_via_arrow(sys, psi, op, delta);
  c.result = {{"state", need(c, "state")},
              {"op", sys.operator_name(op)},
              {"values", reals_json(sys.values())},
              {"range", reals_json(f.members(delta))},
              {"eigenvalues", reals_json(sys.op(op).eigenvalues())},
              {"count", direct.count()},
              {"full", direct.is_full()},
              {"valuation", maps_json(f, direct)},
              {"routes_agree", direct == arrow}};
}

// ---------------------------------------------------------------------------
// Projector strings
// ---------------------------------------------------------------------------

ReductionTable table(const dsl::QuantumModel& q) {
  if (!q.alphabet) throw UsageError("no projectors declared");
  return ReductionTable(q.alphabet, q.tol);
}

// K from --subspace P (the image of a projector) or --op A --range Δ.
Subspace subspace(const Context& c, const dsl::QuantumModel& q) {
  if (auto name = opt(c, "subspace")) {
    auto it = q.matrices.find(*name);
    if (it == q.matrices.end()) throw LookupError("unknown projector '" + *name + "'");
    return Subspace::image_of(Projector(it->second, q.tol), q.tol);
  }
  const auto name = need(c, "op");
  const auto delta = dsl::parse_real_set(need(c, "range"));
  if (q.system) {
    for (std::size_t i = 0; i < q.system->operator_count(); ++i) {
      if (q.system->operator_name(i) == name) {
        return Subspace::image_of(
            spectral_projector(q.system->op(i), delta, q.tol), q.tol);
      }
    }
  }
  auto it = q.matrices.find(name);
  if (it == q.matrices.end()) throw LookupError("unknown operator '" + name + "'");
  return Subspace::image_of(
      spectral_projector(hermitian_eig(it->second, q.tol), delta, q.tol), q.tol);
}

Json string_json(const ReductionTable& t, const ProjString& s) {
  return to_string(s, t.alphabet().names());
}

Json strings_json(const ReductionTable& t, const std::vector<ProjString>& ss) {
  Json out = Json::array();
  for (const auto& s : ss) out.push_back(string_json(t, s));
  return out;
}

Json bounded_json(const ReductionTable& t, const BoundedIdeal& b) {
  Json violations = Json::array();
  for (const auto& v : b.certificate().violations) {
    violations.push_back({{"member", string_json(t, v.member)},
                          {"extended", string_json(t, v.extended)}});
  }
  return {{"members", strings_json(t, b.witness_cache())},
          {"count", b.witness_cache().size()},
          {"certificate",
           {{"depth", b.certificate().depth}, {"violations", violations}}}};
}

Json universe_json(const ReductionTable& t, std::size_t depth) {
  Json names = Json::array();
  for (const auto& n : t.alphabet().names()) names.push_back(n);
  return {{"alphabet", names},
          {"max_length", depth},
          {"strings", count_strings(t.alphabet().size(), depth)}};
}

void valuate(Context& c) {
  const auto& q = quantum(c);
  const auto t = table(q);
  const auto mode = opt(c, "mode").value_or("vector");
  const auto k = subspace(c, q);
  const auto l = depth(c);
  const auto name = need(c, "state");
  BoundedIdeal ideal;
  if (mode == "vector") {
    ideal = valuation_vector(t, state(q, name), k, l);
  } else if (mode == "ray") {
    ideal = valuation_ray(t, state(q, name), k, l);
  } else if (mode == "density") {
    auto d = q.densities.find(name);
    ideal = valuation_density(
        t, d != q.densities.end() ? d->second
                                  : DensityMatrix::pure(state(q, name), q.tol),
        k, l);
  } else {
    throw UsageError("--mode must be vector, ray or density");
  }
  c.result = {{"mode", mode}, {"state", name}, {"subspace_dim", k.dim()}};
  c.result.update(bounded_json(t, ideal));
  c.universe = universe_json(t, l);
}

ProjString string_arg(const ReductionTable& t, const std::string& text) {
  return t.alphabet().strings().parse(text);
}

const RaySet& rayset(const dsl::QuantumModel& q, const std::string& name) {
  auto it = q.raysets.find(name);
  if (it == q.raysets.end()) throw LookupError("unknown rayset '" + name + "'");
  return it->second;
}

Json sieve_json(const ReductionTable& t, const Sieve& s) {
  Json lengths = Json::array();
  for (auto k : s.included_tail_lengths()) lengths.push_back(k);
  return {{"context", string_json(t, s.context())},
          {"includedTailLengths", lengths},
          {"tails", strings_json(t, s.tails())}};
}

Json context_universe(const StringUniverse& u, const RaySet& xi) {
  Json names = Json::array();
  for (const auto& n : u.table().alphabet().names()) names.push_back(n);
  Json rays = Json::array();
  for (const auto& n : xi.names()) rays.push_back(n);
  return {{"alphabet", names},
          {"max_length", u.max_len()},
          {"strings", u.size()},
          {"rays", rays}};
}

void equal(Context& c) {
  const auto& q = quantum(c);
  const auto t = table(q);
  const auto mode = opt(c, "mode").value_or("sp");
  const auto& psi = state(q, need(c, "state"));
  const auto& phi = state(q, need(c, "other"));
  c.result = {{"mode", mode}, {"state", need(c, "state")}, {"other", need(c, "other")}};
  if (mode == "sp") {
    const auto l = depth(c);
    c.result.update(bounded_json(t, truth_ray_equal_SP(t, psi, phi, l)));
    c.universe = universe_json(t, l);
  } else if (mode == "context") {
    const auto& xi = rayset(q, need(c, "rays"));
    const StringUniverse u(t, depth(c));
    const auto members = context_truth_equal_X(psi, phi, xi, u);
    c.result["members"] = strings_json(t, members);
    c.result["count"] = members.size();
    c.universe = context_universe(u, xi);
  } else if (mode == "sieve") {
    const auto s =
        sieve_truth_equal(t, psi, phi, string_arg(t, need(c, "context")));
    c.result.update(sieve_json(t, s));
  } else {
    throw UsageError("--mode must be sp, context or sieve");
  }
}

Json ray_names(const RaySet& v, const RaySelection& s) {
  Json out = Json::array();
  for (auto i = s.find_first(); i != RaySelection::npos; i = s.find_next(i)) {
    out.push_back(v.names()[i]);
  }
  return out;
}

void polar(Context& c) {
  const auto& q = quantum(c);
  const auto t = table(q);
  if (auto rays = opt(c, "rays")) {
    const auto& xi = rayset(q, *rays);
    const StringUniverse u(t, depth(c));
    const auto p = polar_of_rays(xi, u);
    c.result = {{"of", "rays"}, {"rays", *rays}, {"polar", strings_json(t, p)},
                {"count", p.size()}};
    c.universe = context_universe(u, xi);
    return;
  }
  const auto& v = rayset(q, need(c, "universe"));
  std::vector<ProjString> j;
  for (const auto& letters : dsl::parse_string_set(need(c, "strings"))) {
    std::vector<Letter> ls;
    for (const auto& l : letters) ls.push_back(t.alphabet().strings().letter(l));
    j.emplace_back(std::move(ls));
  }
  const auto p = polar_of_strings(j, v, t);
  Json names = Json::array();
  for (const auto& n : p.names()) names.push_back(n);
  c.result = {{"of", "strings"}, {"strings", strings_json(t, j)},
              {"polar", names}, {"count", p.size()}};
  c.universe = {{"rays", need(c, "universe")}, {"size", v.size()}};
}

void closure(Context& c) {
  const auto& q = quantum(c);
  const auto t = table(q);
  const auto& v = rayset(q, need(c, "universe"));
  const GaloisContext g(StringUniverse(t, depth(c)), v);
  const auto xi = g.select(rayset(q, need(c, "rays")));
  const auto closed = g.closure_rays(xi);
  c.result = {{"rays", ray_names(v, xi)},
              {"polar", strings_json(t, g.strings_of(g.polar_of_rays(xi)))},
              {"closure", ray_names(v, closed)},
              {"full", closed == xi}};
  c.universe = context_universe(g.strings(), v);
}

void sieve(Context& c) {
  const auto& q = quantum(c);
  const auto t = table(q);
  const auto s = sieve_valuation(t, state(q, need(c, "state")), subspace(c, q),
                                 string_arg(t, need(c, "context")));
  c.result = sieve_json(t, s);
  c.result["state"] = need(c, "state");
}

// ---------------------------------------------------------------------------
// Whole-spec commands
// ---------------------------------------------------------------------------

void parse_summary(Context& c) {
  const auto& spec = c.model.spec();
  Json monoids = Json::array(), msets = Json::array(),
       classical = Json::array(), quantum = Json::array(),
       queries = Json::array();
  for (const auto& m : spec.monoids) {
    monoids.push_back({{"name", m.name}, {"size", c.model.monoid(m.name)->size()}});
  }
  for (const auto& x : spec.msets) {
    msets.push_back({{"name", x.name}, {"monoid", x.monoid},
                     {"points", c.model.mset(x.name)->size()}});
  }
  for (const auto& s : spec.classical) {
    Json qs = Json::array();
    for (const auto& qd : s.quantities) qs.push_back(qd.first);
    classical.push_back({{"name", s.name}, {"states", s.states.size()},
                         {"values", reals_json(s.values)}, {"quantities", qs}});
  }
  for (const auto& d : spec.quantum) {
    const auto& qm = c.model.quantum(d.name);
    Json kinds[5] = {Json::array(), Json::array(), Json::array(),
                     Json::array(), Json::array()};
    for (const auto& it : d.items) {
      kinds[static_cast<int>(it.kind)].push_back(it.name);
    }
    quantum.push_back({{"name", d.name},
                       {"dim", qm.dim},
                       {"values", qm.system ? reals_json(qm.system->values())
                                            : Json::array()},
                       {"operators", kinds[0]},
                       {"projectors", kinds[1]},
                       {"states", kinds[2]},
                       {"densities", kinds[3]},
                       {"raysets", kinds[4]}});
  }
  for (const auto& q : spec.queries) queries.push_back(q.name);
  c.result = {{"monoids", monoids},   {"msets", msets},
              {"classical", classical}, {"quantum", quantum},
              {"queries", queries},   {"canonical", dsl::print_spec(spec)}};
}

using Handler = void (*)(Context&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h{
      {"parse", parse_summary},
      {"verify-heyting", verify_heyting},
      {"enumerate-ideals", enumerate_ideals},
      {"truth", truth},
      {"valuate-classical", valuate_classical},
      {"valuate-quantum", valuate_quantum},
      {"valuate", valuate},
      {"equal", equal},
      {"polar", polar},
      {"closure", closure},
      {"sieve", sieve},
  };
  return h;
}

TolerancePolicy effective_tolerance(const dsl::SystemSpec* spec,
                                    const Config& config) {
  auto tol = spec ? dsl::declared_tolerance(*spec) : TolerancePolicy{};
  if (config.eps) tol.eps = *config.eps;
  if (config.null_threshold) tol.null_threshold = *config.null_threshold;
  return tol;
}

Json header(const Request& r) {
  Json args = Json::object();
  for (const auto& [k, v] : r.args) args[k] = v;
  return {{"schema", 1}, {"command", r.command}, {"args", args}};
}

Json diagnostic_json(const dsl::Diagnostic& d) {
  return {{"line", d.loc.line}, {"column", d.loc.column},
          {"kind", d.kind}, {"message", d.message}};
}

Outcome failure(const Request& r, std::vector<dsl::Diagnostic> diags) {
  Outcome out{diagnostics, header(r)};
  Json list = Json::array();
  for (const auto& d : diags) list.push_back(diagnostic_json(d));
  out.report["diagnostics"] = list;
  return out;
}

Outcome selftest(const Request& r, const Config& config) {
  const auto seed = r.args.count("seed")
                        ? to_size("seed", r.args.at("seed"))
                        : config.seed;
  Json checks = Json::array();
  bool all = true;
  for (const auto& c : run_selftest(seed)) {
    checks.push_back({{"check", c.name}, {"cases", c.cases},
                      {"failures", c.failures}, {"passed", c.passed()}});
    all = all && c.passed();
  }
  Outcome out{all ? ok : diagnostics, header(r)};
  out.report["result"] = {{"seed", seed}, {"checks", checks}, {"all_pass", all}};
  return out;
}

Outcome run_queries(const Request& r, const dsl::SystemSpec& spec,
                    const Config& config) {
  Outcome out{ok, header(r)};
  Json reports = Json::array();
  for (const auto& q : spec.queries) {
    Request sub;
    for (const auto& [k, v] : q.args) {
      if (k == "command") {
        sub.command = v;
      } else {
        sub.args[k] = v;
      }
    }
    Outcome o;
    if (sub.command == "run") {
      o = failure(sub, {{q.loc, "usage", "queries cannot run queries"}});
    } else {
      o = execute(sub, &spec, config);
    }
    if (o.report.contains("diagnostics")) {
      for (auto& d : o.report["diagnostics"]) {
        if (d["line"] == 0) {
          d["line"] = q.loc.line;
          d["column"] = q.loc.column;
        }
      }
    }
    o.report["query"] = q.name;
    out.exit_code = std::max(out.exit_code, o.exit_code);
    reports.push_back(std::move(o.report));
  }
  out.report["result"] = {{"reports", reports}};
  return out;
}

void render_pretty(std::ostringstream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  auto scalar = [](const Json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
  };
  auto flat = [](const Json& v) {
    return std::all_of(v.begin(), v.end(),
                       [](const Json& e) { return e.is_primitive(); });
  };
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& v = it.value();
    os << pad << it.key() << ":";
    if (v.is_string() && scalar(v).find('\n') != std::string::npos) {
      std::istringstream lines(scalar(v));
      os << "\n";
      for (std::string line; std::getline(lines, line);) {
        os << pad << "  " << line << "\n";
      }
    } else if (v.is_primitive()) {
      os << " " << scalar(v) << "\n";
    } else if (v.empty()) {
      os << (v.is_array() ? " []\n" : " {}\n");
    } else if (v.is_array() && flat(v)) {
      os << " ";
      for (std::size_t i = 0; i < v.size(); ++i) {
        os << (i ? ", " : "") << scalar(v[i]);
      }
      os << "\n";
    } else if (v.is_object()) {
      os << "\n";
      render_pretty(os, v, indent + 2);
    } else {
      os << "\n";
      for (const auto& e : v) {
        if (e.is_object()) {
          std::ostringstream inner;
          render_pretty(inner, e, indent + 4);
          auto text = inner.str();
          text.replace(static_cast<std::size_t>(indent), 4,
                       std::string(2, ' ') + "- ");
          os << text;
        } else {
          os << pad << "  - " << (e.is_primitive() ? scalar(e) : e.dump()) << "\n";
        }
      }
    }
  }
}

}  // namespace

Outcome execute(const Request& request, const dsl::SystemSpec* spec,
                const Config& config) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    if (request.command == "selftest") {
      out = selftest(request, config);
    } else if (!spec) {
      out = failure(request, {{{}, "usage", "missing --spec"}});
    } else if (request.command == "run") {
      out = run_queries(request, *spec, config);
    } else {
      auto h = handlers().find(request.command);
      if (h == handlers().end()) {
        throw UsageError("unknown command '" + request.command + "'");
      }
      const dsl::Model model(*spec, effective_tolerance(spec, config),
                             config.max_dim);
      Context c{request, model, config, Json::object(), Json()};
      h->second(c);
      out.report = header(request);
      out.report["result"] = std::move(c.result);
      if (!c.universe.is_null()) out.report["universe"] = std::move(c.universe);
    }
  } catch (const dsl::ModelError& e) {
    out = failure(request, {e.diagnostic()});
  } catch (const Error& e) {
    out = failure(request, {{{}, e.kind(), e.what()}});
  } catch (const std::exception& e) {
    out = Outcome{internal, header(request)};
    out.report["error"] = e.what();
  }
  const auto tol = effective_tolerance(spec, config);
  out.report["tolerance"] = {{"eps", tol.eps},
                             {"null_threshold", tol.null_threshold}};
  if (config.timing) {
    out.report["timing_ms"] =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - start)
            .count();
  }
  return out;
}

Outcome execute_text(const Request& request, const std::string& text,
                     const Config& config) {
  auto parsed = dsl::parse_spec(text, config.max_dim);
  if (!parsed.ok()) return failure(request, parsed.diagnostics);
  return execute(request, &*parsed.spec, config);
}

Outcome execute_file(const Request& request, const std::string& path,
                     const Config& config) {
  Request echoed = request;
  echoed.args["spec"] = path;
  std::ifstream in(path, std::ios::binary);
  if (!in) return failure(echoed, {{{}, "usage", "cannot read '" + path + "'"}});
  std::stringstream buf;
  buf << in.rdbuf();
  auto parsed = dsl::parse_spec(buf.str(), config.max_dim);
  if (!parsed.ok()) return failure(echoed, parsed.diagnostics);
  auto out = execute(request, &*parsed.spec, config);
  auto args = out.report["args"];
  args["spec"] = path;
  out.report["args"] = args;
  return out;
}

std::string render(const Json& report, bool pretty) {
  if (!pretty) return report.dump();
  std::ostringstream os;
  render_pretty(os, report, 0);
  return os.str();
}

int main(int argc, char** argv) {
  CLI::App app{"Truth values in monoid and string toposes"};
  app.require_subcommand(1);
  app.fallthrough();
  Config config;
  double eps = 0, null_threshold = 0;
  bool pretty = false;
  auto* eps_opt = app.add_option("--tol", eps, "equality tolerance");
  auto* null_opt =
      app.add_option("--null-threshold", null_threshold, "zero-vector threshold");
  app.add_option("--depth", config.depth, "maximum string length")
      ->capture_default_str();
  app.add_option("--max-dim", config.max_dim, "maximum Hilbert space dimension")
      ->capture_default_str();
  app.add_option("--seed", config.seed, "seed for randomised suites")
      ->capture_default_str();
  app.add_flag("--pretty", pretty, "plain-text output");
  app.add_flag("--timing", config.timing, "add wall-clock time to reports");

  struct Sub {
    const char* name;
    const char* help;
    std::vector<const char*> options;
    const char* positional;
  };
  const std::vector<Sub> subs{
      {"parse", "check a spec and print it canonically", {}, "spec"},
      {"verify-heyting", "check the Heyting laws on a monoid's ideals", {}, "monoid"},
      {"enumerate-ideals", "list a monoid's left ideals", {}, "monoid"},
      {"truth", "truth values in an M-set",
       {"mset", "mode", "point", "other", "subset", "superset"}, nullptr},
      {"valuate-classical", "generalised valuation of a classical quantity",
       {"system", "state", "quantity", "range"}, nullptr},
      {"valuate-quantum", "valuation of A in a range over Map(X,X)",
       {"system", "state", "op", "range"}, nullptr},
      {"valuate", "valuation as an ideal of projector strings",
       {"system", "state", "op", "range", "subspace", "mode"}, nullptr},
      {"equal", "truth of [psi] = [phi]",
       {"system", "state", "other", "mode", "rays", "context"}, nullptr},
      {"polar", "polar of a ray set or of a set of strings",
       {"system", "rays", "strings", "universe"}, nullptr},
      {"closure", "double polar of a ray set",
       {"system", "rays", "universe"}, nullptr},
      {"sieve", "sieve-valued truth in a string context",
       {"system", "context", "state", "op", "range", "subspace"}, nullptr},
      {"selftest", "seeded run of the algebraic laws", {}, nullptr},
      {"run", "execute the queries in a spec", {}, "spec"},
  };
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::string> spec_paths;
  std::vector<std::pair<CLI::App*, std::string>> commands;
  for (const auto& s : subs) {
    auto* sc = app.add_subcommand(s.name, s.help);
    commands.emplace_back(sc, s.name);
    auto& store = values[s.name];
    for (const char* o : s.options) {
      sc->add_option(std::string("--") + o, store[o]);
    }
    if (std::string(s.name) != "selftest") {
      if (s.positional && std::string(s.positional) == "spec") {
        sc->add_option("spec,--spec", spec_paths[s.name], "spec file");
      } else {
        sc->add_option("--spec", spec_paths[s.name], "spec file");
      }
    }
    if (s.positional && std::string(s.positional) != "spec") {
      sc->add_option(s.positional, store[s.positional])->required();
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : diagnostics;
  }
  if (eps_opt->count()) config.eps = eps;
  if (null_opt->count()) config.null_threshold = null_threshold;

  for (const auto& [sc, name] : commands) {
    if (!sc->parsed()) continue;
    Request request{name, {}};
    for (auto* o : sc->get_options()) {
      const auto key = o->get_single_name();
      if (o->count() == 0 || key == "help" || key == "spec") continue;
      request.args[key] = values[name][key];
    }
    Outcome out;
    if (name == "selftest") {
      out = execute(request, nullptr, config);
    } else if (spec_paths[name].empty()) {
      out = execute(request, nullptr, config);
    } else {
      out = execute_file(request, spec_paths[name], config);
    }
    std::cout << render(out.report, pretty);
    if (!pretty) std::cout << "\n";
    return out.exit_code;
  }
  return diagnostics;
}

}  // namespace mtopos::cli
