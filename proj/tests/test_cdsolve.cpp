#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>

#include "fracvar/cases.hpp"
#include "fracvar/cdsolve.hpp"
#include "fracvar/varcalc.hpp"

using namespace fracvar;

namespace {
BoxDomain unit_box(int d, int n) {
    return BoxDomain(std::vector<double>(d, 0.0), std::vector<double>(d, 1.0),
                     std::vector<int>(d, n));
}

double interior_sup(const SpaceTimeField& r) {
    double m = 0.0;
    for (int j = 1; j <= r.tgrid.n; ++j)
        for (int p = 0; p < r.nspace(); ++p)
            if (!r.domain.is_boundary(r.domain.multi_index(p)))
                m = std::max(m, std::abs(r.at(j, p)));
    return m;
}
}  // namespace

TEST_CASE("coefficient validation") {
    CDCoefficients c = get_case("manu-cd-1d").coeffs;
    CHECK_NOTHROW(c.validate(1));
    c.beta = -1.0;
    CHECK_THROWS_AS(c.validate(1), std::invalid_argument);
    c.beta = 0.0;
    c.K = {{-0.1}};
    CHECK_THROWS_AS(c.validate(1), std::invalid_argument);

    CDCoefficients c2 = c;
    c2.gamma = {1.0, 0.0};
    c2.K = {{0.1, 0.05}, {0.01, 0.1}};  // not symmetric
    CHECK_THROWS_AS(c2.validate(2), std::invalid_argument);
    c2.K = {{0.1, 0.02}, {0.02, 0.1}};
    CHECK_NOTHROW(c2.validate(2));
    c2.K = {{0.0, 0.0}, {0.0, 0.0}};  // degenerate pure-time form is accepted
    CHECK_NOTHROW(c2.validate(2));
}

TEST_CASE("solve-back: the march is the zero set of the EL residual") {
    const auto mc = get_case("manu-cd-1d");
    const TimeGrid tg(0.0, 1.0, 32);
    const BoxDomain dom = unit_box(1, 32);
    const auto sr = variational_solve(mc.coeffs, tg, dom);
    double scale = 0.0;
    for (double v : sr.u.values) scale = std::max(scale, std::abs(v));
    const Lagrangian L = cd_lagrangian(mc.coeffs, 1);
    const auto r = restricted_el_residual(L, sr.u, FracOrder(0.5), CaputoScheme::GL);
    CHECK(interior_sup(r) <= 1e-10 * std::max(1.0, scale));
    CHECK(sr.factorizations == 1);
    CHECK(sr.final_linear_residual <= 1e-12);
}

TEST_CASE("pure-time reduction equals backward Euler at every node") {
    const auto mc = get_case("pure-time");
    const TimeGrid tg(0.0, 1.0, 64);
    const BoxDomain dom = unit_box(1, 8);
    const auto var = variational_solve(mc.coeffs, tg, dom);
    const auto ref = reference_solve(mc.coeffs, tg, dom, 1.0);
    for (size_t i = 0; i < var.u.values.size(); ++i)
        CHECK(std::abs(var.u.values[i] - ref.u.values[i]) <= 1e-12);
    // and converges to the ODE solution
    CHECK(error_linf(var.u, mc.exact) <= 0.02);
}

TEST_CASE("upwind emergence: pure convection matches the reference upwind scheme") {
    CDCoefficients c;
    c.gamma = {1.0};
    c.K = {{0.0}};
    c.beta = 0.0;
    c.source = [](double, const std::vector<double>&) { return 0.0; };
    c.u0 = [](const std::vector<double>& x) {
        return x[0] * (1.0 - x[0]);  // exact Dirichlet zeros
    };
    const TimeGrid tg(0.0, 0.5, 32);
    const BoxDomain dom = unit_box(1, 32);
    const auto var = variational_solve(c, tg, dom);
    const auto ref = reference_solve(c, tg, dom, 1.0, ConvectionScheme::Upwind);
    double diff = 0.0;
    for (size_t i = 0; i < var.u.values.size(); ++i)
        diff = std::max(diff, std::abs(var.u.values[i] - ref.u.values[i]));
    CHECK(diff <= 1e-12);
}

TEST_CASE("variational solver rejects the L1 scheme") {
    const auto mc = get_case("sep-sine");
    CHECK_THROWS_AS(variational_solve(mc.coeffs, TimeGrid(0.0, 1.0, 8), unit_box(1, 8),
                                      FracOrder(0.5), CaputoScheme::L1),
                    std::invalid_argument);
}

TEST_CASE("classical residual of the exact solution shrinks") {
    const auto mc = get_case("manu-cd-1d");
    double prev = 0.0;
    for (int n : {16, 32, 64}) {
        const TimeGrid tg(0.0, 1.0, n);
        const BoxDomain dom = unit_box(1, n);
        const auto u = SpaceTimeField::sample(tg, dom, mc.exact);
        const double sup = interior_sup(cd_classical_residual(u, mc.coeffs));
        if (prev > 0.0) CHECK(prev / sup >= 1.3);
        prev = sup;
    }
}

TEST_CASE("equivalence check passes on the manufactured case and zero case") {
    CHECK(equivalence_check(get_case("manu-cd-1d"), {8, 16, 32}).pass);
    CHECK(equivalence_check(get_case("zero"), {8, 16}).pass);
    CHECK_THROWS_AS(equivalence_check(get_case("manu-cd-1d"), {8}),
                    std::invalid_argument);
}

TEST_CASE("convergence study: orders, exactness, zero case") {
    const auto rep =
        convergence_study(get_case("sep-sine"), {16, 32, 64}, SolverChoice::Variational);
    CHECK(rep.pass);
    for (double p : rep.observed_orders) CHECK(p >= 0.8);

    const auto aff = convergence_study(get_case("affine-exact"), {8, 12, 16});
    CHECK(aff.exact_on_grid);
    CHECK(aff.pass);

    const auto zero = convergence_study(get_case("zero"), {8, 16});
    CHECK(zero.exact_on_grid);
    for (const auto& lev : zero.levels) CHECK(lev.err_linf == 0.0);
}

TEST_CASE("maximum-principle smoke test") {
    const auto mc = get_case("sep-sine");  // f = 0, u0 = sin(pi x) >= 0
    const TimeGrid tg(0.0, 1.0, 24);
    const BoxDomain dom = unit_box(1, 24);
    for (const auto& sr :
         {variational_solve(mc.coeffs, tg, dom), reference_solve(mc.coeffs, tg, dom)}) {
        for (double v : sr.u.values) CHECK(v >= -1e-10);
    }
}

TEST_CASE("2D smoke: solvers agree and the residual is small") {
    CDCoefficients c;
    c.gamma = {1.0, 0.5};
    c.K = {{0.1, 0.0}, {0.0, 0.1}};
    c.beta = 0.0;
    c.source = [](double t, const std::vector<double>& x) {
        return std::exp(-t) * std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]);
    };
    c.u0 = [](const std::vector<double>& x) {
        return x[0] * (1.0 - x[0]) * x[1] * (1.0 - x[1]);
    };
    const TimeGrid tg(0.0, 0.5, 12);
    const BoxDomain dom = unit_box(2, 12);
    const auto var = variational_solve(c, tg, dom);
    const auto ref = reference_solve(c, tg, dom, 1.0);
    CHECK(var.u.boundary_class == BoundaryClass::SpaceZero);
    double diff = 0.0;
    for (size_t i = 0; i < var.u.values.size(); ++i)
        diff = std::max(diff, std::abs(var.u.values[i] - ref.u.values[i]));
    // both are first-order upwind/implicit; they differ only through the
    // diffusion rows next to the lo faces
    CHECK(diff <= 0.05);

    const Lagrangian L = cd_lagrangian(c, 2);
    const auto r = restricted_el_residual(L, var.u, FracOrder(0.5), CaputoScheme::GL);
    double scale = 0.0;
    for (double v : var.u.values) scale = std::max(scale, std::abs(v));
    CHECK(interior_sup(r) <= 1e-10 * std::max(1.0, scale));
}

TEST_CASE("theta = 1/2 reference scheme converges at second order in time") {
    const auto mc = get_case("pure-time");
    std::vector<double> errs;
    for (int n : {16, 32, 64}) {
        const auto sr = reference_solve(mc.coeffs, TimeGrid(0.0, 1.0, n),
                                        unit_box(1, 8), 0.5);
        errs.push_back(error_linf(sr.u, mc.exact));
    }
    for (size_t k = 0; k + 1 < errs.size(); ++k)
        CHECK(std::log2(errs[k] / errs[k + 1]) >= 1.8);
}

TEST_CASE("parallel solves match the serial reference exactly") {
    const auto mc = get_case("manu-cd-1d");
    const TimeGrid tg(0.0, 1.0, 24);
    const BoxDomain dom = unit_box(1, 24);
    unsetenv("FRACVAR_THREADS");
    const auto serial = variational_solve(mc.coeffs, tg, dom);
    setenv("FRACVAR_THREADS", "4", 1);
    const auto parallel = variational_solve(mc.coeffs, tg, dom);
    unsetenv("FRACVAR_THREADS");
    for (size_t i = 0; i < serial.u.values.size(); ++i)
        CHECK(serial.u.values[i] == parallel.u.values[i]);
}
