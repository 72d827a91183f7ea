#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jterw/combinatorics.hpp"
#include "jterw/johnson.hpp"
#include "jterw/report.hpp"
#include "jterw/suites.hpp"
#include "jterw/terwilliger.hpp"

namespace py = pybind11;
using namespace jterw;

namespace {

py::object fraction(const Rational& q) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(to_string(q));
}

// Dense list of rows of Fractions.
py::list to_rows(const RationalMatrix& m) {
  py::object zero = fraction(Rational(0));
  py::list rows;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    py::list row;
    for (std::size_t c = 0; c < m.cols(); ++c) row.append(zero);
    const auto cs = m.row_cols(r);
    const auto vs = m.row_values(r);
    for (std::size_t k = 0; k < cs.size(); ++k) row[cs[k]] = fraction(vs[k]);
    rows.append(row);
  }
  return rows;
}

BasePointContext context(int n, int d, std::optional<std::vector<int>> base_point) {
  SchemeSpec spec(n, d);
  if (!base_point) return BasePointContext(spec);
  return BasePointContext(spec, KSubset(n, *base_point));
}

}  // namespace

PYBIND11_MODULE(jterw, m) {
  m.doc() = "Exact Terwilliger algebras of Johnson schemes";

  m.def("binomial", [](std::int64_t v, std::int64_t k) { return binomial(v, k); });
  m.def("eigenvalue_p1", [](int v, int k, int j) { return fraction(eigenvalue_p1(v, k, j)); });
  m.def("intersection_matrix", [](int v, int i, int j, int r) { return to_rows(intersection_matrix(v, i, j, r)); });
  m.def("adjacency_matrix", [](int v, int k, int m) { return to_rows(adjacency_matrix(v, k, m)); });
  m.def("primitive_idempotent", [](int v, int k, int j) { return to_rows(idempotent_or_zero(v, k, j)); });

  m.def(
      "terwilliger_dimension",
      [](int n, int d, std::optional<std::vector<int>> base_point) {
        return terwilliger_algebra(context(n, d, std::move(base_point))).dimension();
      },
      py::arg("n"), py::arg("d"), py::arg("base_point") = py::none());

  m.def(
      "decompose",
      [](int n, int d, std::optional<std::vector<int>> base_point) {
        const auto dec = decompose(context(n, d, std::move(base_point)));
        py::list blocks;
        for (const auto& b : dec.blocks) {
          py::dict block;
          block["r"] = b.r;
          block["s"] = b.s;
          block["e"] = b.e;
          block["block_size"] = b.block_size();
          blocks.append(block);
        }
        py::dict out;
        out["n"] = dec.n;
        out["d"] = dec.d;
        out["regime"] = std::string(regime_name(dec.regime));
        out["blocks"] = blocks;
        out["dim_T_formula"] = dec.dim_formula;
        out["dim_T_closure"] = dec.dim_closure;
        out["match"] = dec.match;
        return out;
      },
      py::arg("n"), py::arg("d"), py::arg("base_point") = py::none());

  m.def("suite_names", [] {
    std::vector<std::string> out;
    for (const auto& info : suite_registry()) out.emplace_back(info.name);
    return out;
  });

  // Returns the report as a JSON string; json.loads gives "p/q" strings for rationals.
  m.def(
      "run_suite",
      [](const std::string& name, std::optional<int> v_max, std::optional<std::pair<int, int>> scheme,
         std::optional<std::vector<int>> base_point) {
        Sweep sweep;
        sweep.v_max = v_max;
        if (scheme) sweep.schemes.push_back({scheme->first, scheme->second});
        sweep.base_point = std::move(base_point);
        SuiteReport report;
        {
          py::gil_scoped_release release;
          report = run_suite(name, sweep);
        }
        return report_to_json(report);
      },
      py::arg("name"), py::arg("v_max") = py::none(), py::arg("scheme") = py::none(),
      py::arg("base_point") = py::none());

  py::register_exception<UnknownSuiteError>(m, "UnknownSuiteError", PyExc_ValueError);
  py::register_exception<InfeasibleSweepError>(m, "InfeasibleSweepError", PyExc_ValueError);
}
