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

#include <pybind11/complex.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mtopos/classical.hpp"
#include "mtopos/cli.hpp"
#include "mtopos/context.hpp"
#include "mtopos/ideal.hpp"
#include "mtopos/monoid.hpp"
#include "mtopos/mset.hpp"
#include "mtopos/quantum.hpp"
#include "mtopos/reduction.hpp"
#include "mtopos/selftest.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace mtopos;

namespace {

using Rows = std::vector<std::vector<Complex>>;

// Handles keep the shared, immutable library objects alive.
struct Monoid {
  MonoidPtr ptr;
};

struct PyMSet {
  MSetPtr ptr;
};

struct Strings {
  ReductionTable table;
};

TolerancePolicy policy(std::optional<double> eps, std::optional<double> null) {
  TolerancePolicy tol;
  if (eps) tol.eps = *eps;
  if (null) tol.null_threshold = *null;
  tol.validate();
  return tol;
}

PointSet points(const MSet& x, const std::vector<Point>& members) {
  for (Point p : members) {
    if (p >= x.size()) throw UsageError("point out of range");
  }
  return set_of(x.size(), members);
}

std::vector<Point> members(const PointSet& s) { return members_of(s); }

std::vector<std::pair<std::string, ComplexMatrix>> named_matrices(const py::dict& d) {
  std::vector<std::pair<std::string, ComplexMatrix>> out;
  for (auto [k, v] : d) out.emplace_back(k.cast<std::string>(), ComplexMatrix(v.cast<Rows>()));
  return out;
}

Subspace subspace(const std::vector<ComplexVector>& vectors, std::size_t n,
                  const TolerancePolicy& tol) {
  for (const auto& v : vectors) {
    if (v.size() != n) throw UsageError("subspace vector has the wrong dimension");
  }
  return Subspace::span(vectors, n, tol);
}

py::dict ideal_dict(const Strings& s, const BoundedIdeal& ideal) {
  const auto& strings = s.table.alphabet().strings();
  py::list out;
  for (const auto& q : ideal.witness_cache()) out.append(strings.format(q));
  return py::dict("members"_a = out, "depth"_a = ideal.max_verified_length(),
                  "certified"_a = ideal.certificate().ok());
}

std::vector<std::string> formatted(const Strings& s, const std::vector<ProjString>& qs) {
  std::vector<std::string> out;
  for (const auto& q : qs) out.push_back(s.table.alphabet().strings().format(q));
  return out;
}

RaySet ray_set(const std::vector<ComplexVector>& vectors, const TolerancePolicy& tol) {
  RaySet out;
  for (const auto& v : vectors) {
    const auto r = Ray::of(v, tol);
    if (!out.index_of(r, tol)) out.add(r, {}, tol);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_mtopos, m) {
  m.doc() = "Truth values in monoid and string toposes.";

  static py::exception<Error> error(m, "MtoposError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), (e.kind() + ": " + e.what()).c_str());
    }
  });

  py::class_<LeftIdeal>(m, "LeftIdeal")
      .def("elements", &LeftIdeal::elements)
      .def("contains", &LeftIdeal::contains)
      .def("__contains__", &LeftIdeal::contains)
      .def("__len__", &LeftIdeal::count)
      .def_property_readonly("is_empty", &LeftIdeal::is_empty)
      .def_property_readonly("is_full", &LeftIdeal::is_full)
      .def("subset_of", &LeftIdeal::subset_of)
      .def("act", [](const LeftIdeal& i, Element e) { return ideal_action(e, i); })
      .def("__and__", &heyting_meet)
      .def("__or__", &heyting_join)
      .def("__rshift__", &heyting_implies)
      .def("__invert__", &heyting_not)
      .def(py::self == py::self)
      .def("__str__", [](const LeftIdeal& i) { return to_string(i); })
      .def("__repr__", [](const LeftIdeal& i) { return "LeftIdeal(" + to_string(i) + ")"; });

  py::class_<Monoid>(m, "Monoid")
      .def(py::init([](Table table, std::vector<std::string> names) {
             return Monoid{make_monoid(std::move(table), std::move(names))};
           }),
           "table"_a, "names"_a = std::vector<std::string>{})
      .def_static("maps", [](std::size_t n) { return Monoid{TransformationMonoid::full(n).monoid()}; },
                  "Map(X,X) on n points, element index Σ f(x) n^x.")
      .def_property_readonly("size", [](const Monoid& h) { return h.ptr->size(); })
      .def("product", [](const Monoid& h, Element a, Element b) {
        if (a >= h.ptr->size() || b >= h.ptr->size()) throw UsageError("element out of range");
        return h.ptr->product(a, b);
      })
      .def("name", [](const Monoid& h, Element a) { return h.ptr->name(a); })
      .def("table", [](const Monoid& h) { return h.ptr->table(); })
      .def("ideal", [](const Monoid& h, const std::vector<Element>& gens) {
        return LeftIdeal::generated_by(h.ptr, gens);
      }, "generators"_a)
      .def("left_ideals", [](const Monoid& h) { return enumerate_left_ideals(h.ptr); })
      .def("verify_heyting", [](const Monoid& h) {
        const auto r = verify_heyting_algebra(h.ptr);
        py::dict laws;
        for (const auto& l : r.laws) laws[py::str(l.law)] = l.failures;
        py::object witness = py::none();
        if (r.excluded_middle_witness) witness = py::cast(*r.excluded_middle_witness);
        return py::dict("ideals"_a = r.ideal_count, "laws"_a = laws,
                        "all_hold"_a = r.all_hold(), "witness"_a = witness);
      });

  py::class_<PyMSet>(m, "MSet")
      .def(py::init([](const Monoid& h, const std::vector<std::vector<Point>>& action) {
             return PyMSet{std::make_shared<const MSet>(h.ptr, action)};
           }),
           "monoid"_a, "action"_a)
      .def_static("regular", [](const Monoid& h) {
        return PyMSet{std::make_shared<const MSet>(MSet::regular(h.ptr))};
      })
      .def_static("truth_object", [](const Monoid& h) {
        return PyMSet{std::make_shared<const MSet>(MSet::truth_object(h.ptr))};
      })
      .def_property_readonly("size", [](const PyMSet& x) { return x.ptr->size(); })
      .def("act", [](const PyMSet& x, Element e, Point p) {
        if (e >= x.ptr->monoid()->size() || p >= x.ptr->size()) throw UsageError("out of range");
        return x.ptr->act(e, p);
      })
      .def("invariant_subsets", [](const PyMSet& x) {
        std::vector<std::vector<Point>> out;
        for (const auto& j : enumerate_invariant_subsets(*x.ptr)) out.push_back(members(j));
        return out;
      })
      .def("characteristic_arrow", [](const PyMSet& x, const std::vector<Point>& j) {
        return characteristic_arrow(*x.ptr, points(*x.ptr, j));
      }, "subset"_a)
      .def("classified_subset", [](const PyMSet& x, const std::vector<LeftIdeal>& chi) {
        return members(classified_subset(*x.ptr, chi));
      }, "arrow"_a)
      .def("equivariant_maps", [](const PyMSet& x) { return enumerate_equivariant_maps(*x.ptr); })
      .def("truth_in", [](const PyMSet& x, Point p, const std::vector<Point>& j) {
        return truth_in_invariant(*x.ptr, p, points(*x.ptr, j));
      }, "point"_a, "subset"_a)
      .def("truth_equal", [](const PyMSet& x, Point a, Point b) {
        return truth_equal(*x.ptr, a, b);
      });

  py::class_<ClassicalSystem>(m, "ClassicalSystem")
      .def(py::init([](std::vector<std::string> states, std::vector<double> values,
                       const std::map<std::string, std::vector<double>>& quantities) {
             return ClassicalSystem(std::move(states), std::move(values),
                                    {quantities.begin(), quantities.end()});
           }),
           "states"_a, "values"_a, "quantities"_a)
      .def("valuation", [](const ClassicalSystem& sys, const std::string& state,
                           const std::string& quantity, const std::vector<double>& delta,
                           const std::string& route) {
        const auto s = sys.state_index(state);
        const auto q = sys.quantity_index(quantity);
        const auto d = sys.functions()->subset(delta);
        if (route == "direct") return generalized_classical_valuation(sys, s, q, d);
        if (route == "arrow") return E_s_valuation(sys, s, q, d);
        throw UsageError("route must be 'direct' or 'arrow'");
      }, "state"_a, "quantity"_a, "delta"_a, "route"_a = "direct")
      .def("truth", [](const ClassicalSystem& sys, const std::string& state,
                       const std::string& quantity, const std::vector<double>& delta) {
        return classical_truth(sys, sys.state_index(state), sys.quantity_index(quantity),
                               sys.functions()->subset(delta));
      });

  py::class_<QuantumSystem>(m, "QuantumSystem")
      .def(py::init([](const py::dict& operators, std::vector<double> values,
                       std::optional<double> eps, std::optional<double> null) {
             auto ops = named_matrices(operators);
             if (ops.empty()) throw UsageError("at least one operator is required");
             return QuantumSystem(ops.front().second.rows(), std::move(values), ops,
                                  policy(eps, null));
           }),
           "operators"_a, "values"_a = std::vector<double>{}, "eps"_a = py::none(),
           "null_threshold"_a = py::none())
      .def_property_readonly("dim", &QuantumSystem::dim)
      .def_property_readonly("values", &QuantumSystem::values)
      .def("valuation", [](const QuantumSystem& sys, const ComplexVector& psi,
                           const std::string& op, const std::vector<double>& delta,
                           const std::string& route) {
        const auto i = sys.operator_index(op);
        const auto d = sys.functions().subset(delta);
        if (route == "direct") return quantum_function_valuation(sys, psi, i, d);
        if (route == "arrow") return E_psi_valuation_via_arrow(sys, psi, i, d);
        throw UsageError("route must be 'direct' or 'arrow'");
      }, "psi"_a, "op"_a, "delta"_a, "route"_a = "direct");

  py::class_<Strings>(m, "ProjectorStrings")
      .def(py::init([](const py::dict& projectors, std::optional<double> eps,
                       std::optional<double> null) {
             const auto tol = policy(eps, null);
             return Strings{ReductionTable(
                 std::make_shared<const Alphabet>(named_matrices(projectors),
                                                  AlphabetKind::projector, tol),
                 tol)};
           }),
           "projectors"_a, "eps"_a = py::none(), "null_threshold"_a = py::none())
      .def_property_readonly("dim", [](const Strings& s) { return s.table.alphabet().dim(); })
      .def("valuation", [](const Strings& s, const ComplexVector& psi,
                           const std::vector<ComplexVector>& k, const std::string& mode,
                           std::size_t depth) {
        const auto sub = subspace(k, s.table.alphabet().dim(), s.table.tolerance());
        if (mode == "vector") return ideal_dict(s, valuation_vector(s.table, psi, sub, depth));
        if (mode == "ray") return ideal_dict(s, valuation_ray(s.table, psi, sub, depth));
        throw UsageError("mode must be 'vector' or 'ray'");
      }, "psi"_a, "subspace"_a, "mode"_a = "vector", "depth"_a = 4)
      .def("density_valuation", [](const Strings& s, const Rows& rho,
                                   const std::vector<ComplexVector>& k, std::size_t depth) {
        const auto& tol = s.table.tolerance();
        const DensityMatrix d(ComplexMatrix(rho), tol);
        return ideal_dict(s, valuation_density(s.table, d,
                                               subspace(k, s.table.alphabet().dim(), tol), depth));
      }, "rho"_a, "subspace"_a, "depth"_a = 4)
      .def("equal", [](const Strings& s, const ComplexVector& psi, const ComplexVector& phi,
                       std::size_t depth) {
        return ideal_dict(s, truth_ray_equal_SP(s.table, psi, phi, depth));
      }, "psi"_a, "phi"_a, "depth"_a = 4)
      .def("universe", [](const Strings& s, std::size_t max_len) {
        return formatted(s, StringUniverse(s.table, max_len).members());
      }, "max_len"_a)
      .def("polar", [](const Strings& s, const std::vector<ComplexVector>& rays,
                       std::size_t max_len) {
        return formatted(s, polar_of_rays(ray_set(rays, s.table.tolerance()),
                                          StringUniverse(s.table, max_len)));
      }, "rays"_a, "max_len"_a = 4)
      .def("sieve", [](const Strings& s, const std::string& context, const ComplexVector& psi,
                       const ComplexVector& phi) {
        const auto q = s.table.alphabet().strings().parse(context);
        return sieve_truth_equal(s.table, psi, phi, q).included_tail_lengths();
      }, "context"_a, "psi"_a, "phi"_a,
         "Tail lengths k with [Q_k ψ] = [Q_k φ], Q_k the last k letters.");

  m.def("selftest", [](std::uint64_t seed, std::size_t depth) {
    py::dict out;
    for (const auto& c : run_selftest(seed, depth)) {
      out[py::str(c.name)] = py::dict("cases"_a = c.cases, "failures"_a = c.failures);
    }
    return out;
  }, "seed"_a = 1, "depth"_a = 3);

  m.def("execute", [](const std::string& command, const std::map<std::string, std::string>& args,
                      std::optional<std::string> spec, std::optional<std::string> spec_file,
                      std::optional<double> eps, std::optional<double> null,
                      std::size_t depth, std::uint64_t seed) {
    cli::Config config;
    config.eps = eps;
    config.null_threshold = null;
    config.depth = depth;
    config.seed = seed;
    const cli::Request request{command, args};
    cli::Outcome out;
    {
      py::gil_scoped_release release;
      if (spec_file) out = cli::execute_file(request, *spec_file, config);
      else if (spec) out = cli::execute_text(request, *spec, config);
      else out = cli::execute(request, nullptr, config);
    }
    return py::make_tuple(out.exit_code, cli::render(out.report, false));
  }, "command"_a, "args"_a = std::map<std::string, std::string>{}, "spec"_a = py::none(),
     "spec_file"_a = py::none(), "eps"_a = py::none(), "null_threshold"_a = py::none(),
     "depth"_a = 4, "seed"_a = 1);
}
