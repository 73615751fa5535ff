#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <vector>

#include "ztr/entropy.hpp"
#include "ztr/jets.hpp"
#include "ztr/laurent.hpp"
#include "ztr/qcomplex.hpp"
#include "ztr/report.hpp"
#include "ztr/suites.hpp"
#include "ztr/theta.hpp"
#include "ztr/version.hpp"

namespace py = pybind11;

namespace {

// Rationals cross the boundary as "p/q" strings so nothing gets rounded.
ztr::Rational rat(const std::string& s) { return ztr::parse_rational(s); }

std::string run_suite_json(const std::string& suite, const py::dict& params, uint64_t seed) {
  ztr::SuiteConfig cfg;
  cfg.suite = suite;
  cfg.seed = seed;
  // accept ints, strings, whatever str()s to the config grammar
  for (auto item : params)
    cfg.params[py::str(item.first).cast<std::string>()] =
        py::str(item.second).cast<std::string>();
  return ztr::emit_json(ztr::run_suite(cfg));
}

std::string theta_exact(const std::string& series, const std::string& x) {
  auto f = ztr::JetLaurent::from_exact(ztr::parse_series(series));
  auto iv = ztr::theta_eval(f, ztr::RealPoint(rat(x)), ztr::Rational(0));
  return ztr::to_string(iv.lo);
}

py::dict generator(const std::string& x, const std::string& r, long order) {
  auto cert = ztr::construct_generator(rat(x), ztr::Rational(0), ztr::Radius(rat(r)), order);
  py::dict out;
  out["series"] = ztr::to_json(cert.f);
  out["n_vanish"] = cert.n_vanish;
  out["coeff_bound"] = ztr::to_string(cert.coeff_bound);
  out["residual_bound"] = ztr::to_string(cert.residual_bound);
  return out;
}

std::vector<std::string> homology_divisors(const std::vector<long>& factors, int i) {
  auto h = ztr::q_homology(ztr::FinAbGroup(factors), i);
  std::vector<std::string> out;
  for (const auto& d : h.divisor_list()) out.push_back(ztr::to_string(d));
  return out;
}

}  // namespace

PYBIND11_MODULE(_ztr, m) {
  m.doc() = "exact checks for weighted Laurent series, lp jets, and normed complexes";
  m.attr("__version__") = ztr::kVersion;

  py::register_exception<ztr::parse_error>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ztr::budget_exceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

  m.def("suite_names", &ztr::suite_names, "names accepted by run_suite");
  m.def("run_suite", &run_suite_json, py::arg("suite"), py::arg("params") = py::dict(),
        py::arg("seed") = 1, "run a named suite; returns the JSON report as a string");

  m.def("theta", &theta_exact, py::arg("series"), py::arg("x"),
        "exact rational theta_x of a finitely supported series");
  m.def("expand_real",
        [](const std::string& y, const std::string& x, long N, int terms) {
          return ztr::to_text(ztr::real_digit_expand(rat(y), rat(x), N, terms));
        },
        py::arg("y"), py::arg("x"), py::arg("N"), py::arg("terms") = 32);
  m.def("expand_bounded",
        [](const std::string& z, const std::string& x, int terms) {
          return ztr::to_text(ztr::bounded_digit_expand(rat(z), rat(x), terms));
        },
        py::arg("z"), py::arg("x"), py::arg("terms") = 32);
  m.def("expand_padic",
        [](long y, long p, long x, long K) {
          ztr::PadicPoint pt(ztr::Integer(p), ztr::Integer(x), K);
          return ztr::to_text(ztr::padic_digit_expand(ztr::Integer(y), pt));
        },
        py::arg("y"), py::arg("p"), py::arg("x"), py::arg("K"));
  m.def("generator", &generator, py::arg("x"), py::arg("r"), py::arg("order") = 200,
        "integer series with theta_x = 0; bounds as exact rational strings");

  m.def("weighted_norm",
        [](const std::string& series, const std::string& r) {
          return ztr::to_string(
              ztr::weighted_norm(ztr::parse_series(series), ztr::Radius(rat(r))));
        },
        py::arg("series"), py::arg("r"));
  m.def("ball_count",
        [](const std::string& r, const std::string& c, int64_t m, size_t cap) {
          return ztr::enumerate_ball(ztr::Radius(rat(r)), rat(c), m, cap).size();
        },
        py::arg("r"), py::arg("c"), py::arg("m"), py::arg("cap") = 2'000'000);

  m.def("entropy_H", &ztr::entropy_H, py::arg("x"));
  m.def("entropy_defect", &ztr::entropy_defect, py::arg("s"), py::arg("t"));
  m.def("collapse_ratio_uniform", &ztr::collapse_ratio_uniform, py::arg("k"));
  m.def("q_homology", &homology_divisors, py::arg("factors"), py::arg("degree"),
        "divisor list of the complex's homology, '0' entries for free rank");
}
