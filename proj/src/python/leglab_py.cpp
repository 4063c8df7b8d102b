// Python bindings. Rationals cross the boundary as fractions.Fraction,
// integers as Python ints, and structured results as plain dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "leglab/alpha.hpp"
#include "leglab/cf.hpp"
#include "leglab/criteria.hpp"
#include "leglab/report.hpp"
#include "leglab/verifier.hpp"

namespace py = pybind11;
using namespace leglab;

namespace {

py::object to_py_int(const BigInt& v) { return py::int_(py::str(v.str())); }

py::object to_fraction(const Rational& r) {
  return py::module_::import("fractions").attr("Fraction")(to_py_int(r.num()), to_py_int(r.den()));
}

py::object to_py(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

BigInt to_bigint(const py::handle& h) { return parse_bigint(py::str(h).cast<std::string>()); }

/// Accepts a Fraction, an int or a "p/q" string.
Rational to_rational(const py::handle& h) {
  if (py::isinstance<py::int_>(h)) return Rational(to_bigint(h));
  if (py::hasattr(h, "numerator") && py::hasattr(h, "denominator") && !py::isinstance<py::str>(h)) {
    return Rational(to_bigint(h.attr("numerator")), to_bigint(h.attr("denominator")));
  }
  return Rational::parse(h.cast<std::string>());
}

/// A source literal ("cf:[1;(2)]", "rat:5/8", "series:ex1:A=2"), a bare "[..]", or a rational.
AlphaSource to_alpha(const py::handle& h) {
  if (py::isinstance<py::str>(h)) {
    const std::string s = h.cast<std::string>();
    if (s.starts_with("rat:") || s.starts_with("cf:") || s.starts_with("series:")) return AlphaSource::parse(s);
    if (s.starts_with("[")) return AlphaSource::parse("cf:" + s);
  }
  return AlphaSource::rational(to_rational(h));
}

TheoremId to_theorem(const std::string& name) {
  if (auto id = parse_theorem(name)) return *id;
  throw py::value_error("unknown theorem '" + name + "'");
}

SeriesFamily to_series(const std::string& name) {
  if (name == "ex1") return SeriesFamily::Example1;
  if (name == "ex4") return SeriesFamily::Example4;
  throw py::value_error("series family must be 'ex1' or 'ex4'");
}

py::list int_list(const std::vector<BigInt>& xs) {
  py::list out;
  for (const auto& x : xs) out.append(to_py_int(x));
  return out;
}

Universe make_universe(const py::handle& max_q, const std::string& alpha, const py::handle& window) {
  Universe u;
  u.max_q = to_bigint(max_q);
  u.family = parse_family(alpha);
  u.window = to_rational(window);
  u.validate();
  return u;
}

}  // namespace

PYBIND11_MODULE(leglab, m) {
  m.doc() = "Exact continued fractions and the Legendre-type approximation criteria";

  py::register_exception<BudgetExhausted>(m, "BudgetExhausted", PyExc_RuntimeError);
  py::register_exception<InapplicableError>(m, "InapplicableError", PyExc_ValueError);

  m.def(
      "expand",
      [](const py::object& value, std::size_t terms) {
        const AlphaSource a = to_alpha(value);
        return int_list(a.is_finite() ? a.terms(*a.length()) : a.terms(terms));
      },
      py::arg("value"), py::arg("terms") = 20,
      "Partial quotients of a rational (all of them) or a source literal (the first `terms`).");

  m.def(
      "evaluate",
      [](const py::list& terms) {
        std::vector<BigInt> t;
        for (const auto& x : terms) t.push_back(to_bigint(x));
        return to_fraction(evaluate_terms(t));
      },
      py::arg("terms"), "Value of [a0; a1, ...] as a Fraction; non-canonical input is accepted.");

  m.def(
      "convergents",
      [](const py::object& alpha, std::size_t count) {
        const AlphaSource a = to_alpha(alpha);
        const auto t = a.terms(count);
        const ConvergentTable table(t);
        py::list out;
        for (std::size_t n = 0; n < table.size(); ++n) out.append(to_fraction(table.value(n)));
        return out;
      },
      py::arg("alpha"), py::arg("count") = 10);

  m.def(
      "mediants",
      [](const py::object& alpha, std::size_t n) {
        const auto t = to_alpha(alpha).terms(n + 2);
        py::list out;
        for (const auto& med : mediants_at(t, n)) {
          py::dict d;
          d["b"] = to_py_int(med.b);
          d["value"] = to_fraction(med.value);
          d["nearest"] = med.nearest();
          d["first"] = med.first();
          out.append(d);
        }
        return out;
      },
      py::arg("alpha"), py::arg("n"));

  m.def(
      "classify",
      [](const py::object& pq, const py::object& alpha) {
        return to_py(to_json(classify(to_rational(pq), to_alpha(alpha))));
      },
      py::arg("pq"), py::arg("alpha"));

  m.def(
      "check",
      [](const std::string& theorem, const py::object& pq, const py::object& alpha) {
        return to_py(to_json(check(to_theorem(theorem), to_rational(pq), to_alpha(alpha))));
      },
      py::arg("theorem"), py::arg("pq"), py::arg("alpha"));

  m.def(
      "bound",
      [](const std::string& theorem, const py::object& q, const std::optional<py::object>& q_prev) {
        std::optional<BigInt> prev;
        if (q_prev) prev = to_bigint(*q_prev);
        return to_fraction(bound(to_theorem(theorem), to_bigint(q), prev));
      },
      py::arg("theorem"), py::arg("q"), py::arg("q_prev") = py::none());

  m.def(
      "partial_sum",
      [](const std::string& family, const py::object& A, std::size_t N) {
        return to_fraction(partial_sum(to_series(family), to_bigint(A), N));
      },
      py::arg("family"), py::arg("A"), py::arg("N"));

  m.def(
      "audit",
      [](const std::string& theorem, const py::object& max_q, const std::string& alpha, const py::object& window,
         unsigned jobs) {
        const Universe u = make_universe(max_q, alpha, window);
        const TheoremId id = to_theorem(theorem);
        VerificationReport r;
        {
          py::gil_scoped_release release;
          r = audit(id, u, jobs);
        }
        return to_py(to_json(r));
      },
      py::arg("theorem"), py::arg("max_q") = 50, py::arg("alpha") = "rationals:100", py::arg("window") = 1,
      py::arg("jobs") = 1, "Exhaustive audit; returns the JSON report as a dict.");

  m.def(
      "sharpness_scan",
      [](const std::string& theorem, const py::object& max_q, const std::string& alpha) {
        const Universe u = make_universe(max_q, alpha, py::int_(1));
        return to_py(to_json(sharpness_scan(to_theorem(theorem), u)));
      },
      py::arg("theorem"), py::arg("max_q"), py::arg("alpha"));

  m.def(
      "cross_order_check", [](std::uint64_t q_max) { return to_py(to_json(cross_order_check(q_max))); },
      py::arg("q_max"));

  m.attr("THEOREMS") = [] {
    py::list names;
    for (TheoremId id : kAllTheorems) names.append(std::string(to_string(id)));
    return names;
  }();
}
