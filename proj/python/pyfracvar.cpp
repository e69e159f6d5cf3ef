#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "fracvar/cases.hpp"
#include "fracvar/cdsolve.hpp"
#include "fracvar/frac1d.hpp"
#include "fracvar/lemmas.hpp"

namespace py = pybind11;
using namespace fracvar;

namespace {

Direction parse_dir(const std::string& s) {
    if (s == "forward") return Direction::Forward;
    if (s == "backward") return Direction::Backward;
    throw std::invalid_argument("direction must be 'forward' or 'backward'");
}

CaputoScheme parse_scheme(const std::string& s) {
    if (s == "L1") return CaputoScheme::L1;
    if (s == "GL") return CaputoScheme::GL;
    throw std::invalid_argument("scheme must be 'L1' or 'GL'");
}

py::dict solve_case(const std::string& id, int nt, int nx, const std::string& solver,
                    double alpha, double theta) {
    const auto mc = get_case(id);
    const TimeGrid tg(mc.default_tgrid.a, mc.default_tgrid.b, nt);
    const BoxDomain dom(mc.default_domain.lo, mc.default_domain.hi,
                        std::vector<int>(mc.default_domain.dim, nx));
    if (solver != "variational" && solver != "reference")
        throw std::invalid_argument("solver must be 'variational' or 'reference'");
    const SolveResult sr = solver == "variational"
                               ? variational_solve(mc.coeffs, tg, dom, FracOrder(alpha))
                               : reference_solve(mc.coeffs, tg, dom, theta);

    py::dict out;
    out["values"] = sr.u.values;  // time-major, last axis fastest
    out["nt"] = tg.n;
    out["nx"] = dom.n;
    out["scheme"] = sr.scheme;
    out["final_linear_residual"] = sr.final_linear_residual;
    if (mc.exact) {
        out["err_l2"] = error_l2(sr.u, mc.exact);
        out["err_linf"] = error_linf(sr.u, mc.exact);
    }
    return out;
}

py::dict lemma_dict(const LemmaSuiteResult& r) {
    py::list checks;
    for (const auto& c : r.checks) {
        py::dict d;
        d["name"] = c.name;
        d["pass"] = c.pass;
        d["metrics"] = c.metrics;
        checks.append(d);
    }
    py::dict out;
    out["pass"] = r.pass;
    out["checks"] = checks;
    return out;
}

}  // namespace

PYBIND11_MODULE(pyfracvar, m) {
    m.doc() = "asymmetric fractional variational calculus: core operations";

    m.def("gamma", &gamma_fn, py::arg("x"));

    m.def(
        "gl_weights",
        [](double alpha, int n) { return gl_weights(FracOrder(alpha), n).w; },
        py::arg("alpha"), py::arg("n"));

    m.def(
        "caputo_deriv",
        [](const std::vector<double>& values, double a, double b, double alpha,
           const std::string& direction, const std::string& scheme) {
            const Samples1D f(TimeGrid(a, b, static_cast<int>(values.size()) - 1), values);
            return caputo_deriv(f, FracOrder(alpha), parse_dir(direction),
                                parse_scheme(scheme))
                .values;
        },
        py::arg("values"), py::arg("a"), py::arg("b"), py::arg("alpha"),
        py::arg("direction") = "forward", py::arg("scheme") = "L1");

    m.def(
        "rl_deriv",
        [](const std::vector<double>& values, double a, double b, double alpha,
           const std::string& direction, const std::string& scheme) {
            const RLScheme s =
                parse_scheme(scheme) == CaputoScheme::GL ? RLScheme::GL
                                                         : RLScheme::L1PlusBoundary;
            const Samples1D f(TimeGrid(a, b, static_cast<int>(values.size()) - 1), values);
            return rl_deriv(f, FracOrder(alpha), parse_dir(direction), s).values;
        },
        py::arg("values"), py::arg("a"), py::arg("b"), py::arg("alpha"),
        py::arg("direction") = "forward", py::arg("scheme") = "GL");

    m.def("case_ids", &case_ids);

    m.def("solve", &solve_case, py::arg("case_id"), py::arg("nt"), py::arg("nx"),
          py::arg("solver") = "variational", py::arg("alpha") = 0.5,
          py::arg("theta") = 1.0);

    m.def(
        "run_lemmas",
        [](double alpha, int n, int dim) {
            return lemma_dict(run_lemma_suite(FracOrder(alpha), n, dim));
        },
        py::arg("alpha") = 0.5, py::arg("n") = 256, py::arg("dim") = 1);
}
