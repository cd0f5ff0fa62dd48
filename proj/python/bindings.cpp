#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sumcheck/arith.hpp"
#include "sumcheck/characters.hpp"
#include "sumcheck/charsum.hpp"
#include "sumcheck/delta.hpp"
#include "sumcheck/expsums.hpp"
#include "sumcheck/oscillatory.hpp"
#include "sumcheck/special.hpp"
#include "sumcheck/suites.hpp"
#include "sumcheck/weights.hpp"

namespace py = pybind11;
using namespace sumcheck;

namespace {

py::int_ to_pyint(__int128 v) { return py::int_(py::str(int128_to_string(v))); }

CharSumInstance make_instance(i64 m1, i64 m2, i64 chi1, i64 chi2, i64 q, i64 r, i64 n1, i64 n2, i64 m, int sign_n2,
                              int sign_m) {
  CharSumInstance s;
  s.M = FactoredModulus(m1, m2);
  s.chi1 = DirichletCharacter::from_prime(m1, chi1);
  s.chi2 = DirichletCharacter::from_prime(m2, chi2);
  s.q = q;
  s.r = r;
  s.n1 = n1;
  s.n2 = n2;
  s.m = m;
  s.sign_n2 = sign_n2;
  s.sign_m = sign_m;
  s.validate();
  return s;
}

py::dict summary(const VerificationReport& r) {
  py::dict d;
  d["suite"] = r.suite;
  d["cases"] = r.total;
  d["passed"] = r.passed;
  d["failed"] = r.failed;
  d["monitored"] = r.monitored;
  d["monitored_flagged"] = r.monitored_flagged;
  d["errors"] = r.errors;
  d["exit_status"] = r.exit_status();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "brute-force and factored evaluation of character sums, the delta symbol and oscillatory transforms";

  static py::exception<Error> exc(m, "SumcheckError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::handle(exc.ptr())(e.what());
      inst.attr("code") = error_name(e.code());
      PyErr_SetObject(exc.ptr(), inst.ptr());
    }
  });

  // arithmetic
  m.def("is_prime", &is_prime);
  m.def("euler_phi", &euler_phi);
  m.def("moebius", &moebius);
  m.def("divisors", &divisors);
  m.def("mod_inverse", &mod_inverse, py::arg("a"), py::arg("q"));

  py::class_<DirichletCharacter>(m, "DirichletCharacter")
      .def_static("from_prime", &DirichletCharacter::from_prime, py::arg("p"), py::arg("index"))
      .def_property_readonly("modulus", &DirichletCharacter::modulus)
      .def_property_readonly("order", &DirichletCharacter::order)
      .def_property_readonly("is_primitive", &DirichletCharacter::is_primitive)
      .def("__call__", &DirichletCharacter::operator())
      .def("conj", &DirichletCharacter::conj)
      .def("label", &DirichletCharacter::label)
      .def("__repr__", [](const DirichletCharacter& c) { return "<DirichletCharacter " + c.label() + ">"; });
  m.def("primitive_characters", &primitive_characters, py::arg("p"));
  m.def("primitive_root", &primitive_root, py::arg("p"));
  m.def("gauss_sum", [](const DirichletCharacter& c) { return gauss_sum(c).value; });

  // exponential sums
  m.def("kloosterman", &kloosterman, py::arg("m"), py::arg("n"), py::arg("c"));
  m.def("kl2_normalized", &kl2_normalized, py::arg("n"), py::arg("p"));
  m.def("ramanujan_sum", &ramanujan_sum, py::arg("q"), py::arg("b"));

  // character sums c1, c2: characters given by their index mod each prime
  const auto inst_args = [](auto f) {
    return [f](i64 m1, i64 m2, i64 chi1, i64 chi2, i64 q, i64 r, i64 n1, i64 n2, i64 mm, int sign_n2, int sign_m) {
      return f(make_instance(m1, m2, chi1, chi2, q, r, n1, n2, mm, sign_n2, sign_m));
    };
  };
#define SUMCHECK_CHARSUM(name)                                                                                           \
  m.def(#name, inst_args(&name), py::arg("M1"), py::arg("M2"), py::arg("chi1"), py::arg("chi2"), py::arg("q"),         \
        py::arg("r"), py::arg("n1"), py::arg("n2"), py::arg("m"), py::arg("sign_n2") = 1, py::arg("sign_m") = 1)
  SUMCHECK_CHARSUM(c1_bruteforce);
  SUMCHECK_CHARSUM(c1_factored);
  SUMCHECK_CHARSUM(c2_bruteforce);
  SUMCHECK_CHARSUM(c2_factored);
#undef SUMCHECK_CHARSUM

  // delta symbol
  py::class_<DfiWeight>(m, "DfiWeight")
      .def(py::init([](double Q) { return new DfiWeight(DeltaParams{Q}); }), py::arg("Q"))
      .def_property_readonly("Q", &DfiWeight::Q)
      .def("omega", &DfiWeight::omega, py::arg("q"), py::arg("zeta"))
      .def("support", &DfiWeight::support, py::arg("q"))
      .def("delta", py::overload_cast<i64>(&DfiWeight::delta, py::const_), py::arg("n"),
           py::call_guard<py::gil_scoped_release>())
      .def("delta", py::overload_cast<const std::vector<i64>&>(&DfiWeight::delta, py::const_), py::arg("ns"),
           py::call_guard<py::gil_scoped_release>());

  // special functions and transforms
  m.def("bessel_j", py::overload_cast<int, double>(&bessel_j), py::arg("n"), py::arg("x"));
  m.def("bessel_j_complex", py::overload_cast<cplx, double>(&bessel_j), py::arg("nu"), py::arg("x"));
  m.def("gamma_complex", &gamma_complex, py::arg("z"));
  m.def(
      "gamma_pm",
      [](int sign, cplx s, int k) { return gamma_pm(sign, s, SpectralParams::holomorphic(k)); }, py::arg("sign"),
      py::arg("s"), py::arg("k") = 12);
  m.def(
      "tau_coefficients",
      [](i64 count) {
        auto t = tau_coefficients(count);
        py::list out;
        for (auto v : t) out.append(to_pyint(v));
        return out;
      },
      py::arg("count"));
  m.def(
      "gl2_voronoi",
      [](i64 a, i64 c, double N, i64 budget) {
        VoronoiResult r;
        {
          py::gil_scoped_release nogil;
          r = gl2_voronoi_check(a, c, SmoothWeight::plateau(1, 1.25, 1.75, 2), N, budget);
        }
        return py::make_tuple(r.lhs, r.rhs);
      },
      py::arg("a"), py::arg("c"), py::arg("N"), py::arg("budget") = 20000);

  // suites
  m.attr("suite_names") = suite_names();
  m.def(
      "run_suite",
      [](const std::string& name, const std::string& config, int jobs) {
        GridConfig cfg = config.empty() ? GridConfig{} : load_config(config);
        if (jobs > 0) cfg.jobs = jobs;
        VerificationReport r;
        {
          py::gil_scoped_release nogil;
          r = run_suite(name, cfg);
        }
        return py::make_tuple(summary(r), render_report(r, ReportFormat::Json));
      },
      py::arg("name"), py::arg("config") = "", py::arg("jobs") = 0,
      "run a suite; returns (summary dict, JSON report text)");
}
