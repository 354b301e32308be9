// Python bindings. Reports cross the boundary as JSON text and are decoded
// by the package's __init__.py, so the schema stays defined in one place.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cpb/classify.hpp"
#include "cpb/errors.hpp"
#include "cpb/report.hpp"
#include "cpb/runner.hpp"
#include "cpb/spec.hpp"

namespace py = pybind11;

namespace {

cpb::RunOptions make_options(std::optional<unsigned> bound_n, std::optional<unsigned> bound_d,
                             std::optional<unsigned> window, std::size_t order_cap, std::size_t brute_limit,
                             std::uint64_t seed, std::optional<std::string> cache_dir) {
  cpb::RunOptions o;
  o.bound_n = bound_n;
  o.bound_d = bound_d;
  o.window = window;
  o.order_cap = order_cap;
  o.brute_limit = brute_limit;
  o.seed = seed;
  o.cache_dir = std::move(cache_dir);
  return o;
}

// A built ring with its tables, for poking at elements from Python.
class PyRing {
 public:
  PyRing(const std::string& spec, std::size_t order_cap)
      : built_(cpb::build_spec(cpb::parse_spec(spec), order_cap)) {}

  std::size_t order() const { return ring().order(); }
  cpb::Elem zero() const { return ring().zero(); }
  cpb::Elem one() const { return ring().one(); }
  cpb::Elem add(cpb::Elem a, cpb::Elem b) const { return ring().add(check(a), check(b)); }
  cpb::Elem mul(cpb::Elem a, cpb::Elem b) const { return ring().mul(check(a), check(b)); }
  cpb::Elem neg(cpb::Elem a) const { return ring().neg(check(a)); }
  std::string label(cpb::Elem a) const { return ring().label(check(a)); }
  std::string spec() const { return cpb::serialize(built_.spec); }

  std::vector<cpb::Elem> idempotents() const { return cpb::idempotents(ring()).members(); }

  std::vector<cpb::Elem> right_annihilator(const std::vector<cpb::Elem>& s) const {
    for (auto a : s) check(a);
    return cpb::right_annihilator(ring(), cpb::ElementSet(ring(), s)).members();
  }

  std::vector<cpb::Elem> right_ideal(const std::vector<cpb::Elem>& s) const {
    for (auto a : s) check(a);
    return cpb::right_ideal(ring(), cpb::ElementSet(ring(), s)).members();
  }

  std::string classify_json() const { return cpb::property_report_to_json(cpb::classify(ring())); }

 private:
  const cpb::FiniteRing& ring() const { return *built_.ring; }
  cpb::Elem check(cpb::Elem a) const {
    if (a >= ring().order()) throw py::index_error("element id " + std::to_string(a) + " out of range");
    return a;
  }

  cpb::BuiltSpec built_;
};

}  // namespace

PYBIND11_MODULE(_cpbaer, m) {
  m.doc() = "Finite-ring classifier and bounded verification suites";

  auto spec_error = py::register_exception<cpb::SpecError>(m, "SpecError", PyExc_ValueError);
  py::register_exception<cpb::InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<cpb::CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);
  py::register_exception<cpb::PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  (void)spec_error;

  m.def("version", &cpb::tool_version);
  m.def("suite_names", &cpb::suite_names);
  m.def("flag_names", &cpb::flag_names);
  m.def("canonical_suite", &cpb::canonical_suite, py::arg("name"));
  m.def("canonical_spec", [](const std::string& text) { return cpb::serialize(cpb::parse_spec(text)); },
        py::arg("text"), "Parse a spec and return its canonical serialization.");
  m.def("explain", &cpb::explain, py::arg("name"));

  m.def(
      "run_json",
      [](const std::string& suite, const std::string& spec, std::optional<unsigned> bound_n,
         std::optional<unsigned> bound_d, std::optional<unsigned> window, std::size_t order_cap,
         std::size_t brute_limit, std::uint64_t seed, std::optional<std::string> cache_dir) {
        auto o = make_options(bound_n, bound_d, window, order_cap, brute_limit, seed, std::move(cache_dir));
        py::gil_scoped_release release;
        return cpb::report_to_json(cpb::run_suite(suite, spec, o));
      },
      py::arg("suite"), py::arg("spec") = "", py::arg("bound_n") = py::none(), py::arg("bound_d") = py::none(),
      py::arg("window") = py::none(), py::arg("order_cap") = 1024, py::arg("brute_limit") = 1 << 16,
      py::arg("seed") = 0, py::arg("cache_dir") = py::none());

  m.def(
      "mine_json",
      [](const std::string& family, const std::string& predicate, std::size_t max_order, std::size_t order_cap,
         std::optional<std::string> cache_dir) {
        auto o = make_options(std::nullopt, std::nullopt, std::nullopt, order_cap, 1 << 16, 0, std::move(cache_dir));
        py::gil_scoped_release release;
        return cpb::report_to_json(cpb::run_mine(family, predicate, max_order, o));
      },
      py::arg("family"), py::arg("predicate"), py::arg("max_order") = 64, py::arg("order_cap") = 1024,
      py::arg("cache_dir") = py::none());

  py::class_<PyRing>(m, "Ring")
      .def(py::init<const std::string&, std::size_t>(), py::arg("spec"), py::arg("order_cap") = 4096)
      .def_property_readonly("order", &PyRing::order)
      .def_property_readonly("zero", &PyRing::zero)
      .def_property_readonly("one", &PyRing::one)
      .def_property_readonly("spec", &PyRing::spec)
      .def("add", &PyRing::add)
      .def("mul", &PyRing::mul)
      .def("neg", &PyRing::neg)
      .def("label", &PyRing::label)
      .def("idempotents", &PyRing::idempotents)
      .def("right_annihilator", &PyRing::right_annihilator, py::arg("elements"))
      .def("right_ideal", &PyRing::right_ideal, py::arg("generators"))
      .def("classify_json", &PyRing::classify_json)
      .def("__len__", &PyRing::order)
      .def("__repr__", [](const PyRing& r) { return "Ring(" + r.spec() + ")"; });
}
