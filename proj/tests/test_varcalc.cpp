#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "fracvar/cases.hpp"
#include "fracvar/varcalc.hpp"

using namespace fracvar;

namespace {

BoxDomain unit_box(int d, int n) {
    return BoxDomain(std::vector<double>(d, 0.0), std::vector<double>(d, 1.0),
                     std::vector<int>(d, n));
}

SpaceTimeField smooth_state(const TimeGrid& tg, const BoxDomain& d, double phase) {
    return SpaceTimeField::sample(tg, d, [phase](double t, const std::vector<double>& x) {
        double v = std::exp(-t + phase);
        for (double c : x) v *= std::sin(M_PI * c) + 0.2 * c;
        return v;
    });
}

SpaceTimeField random_direction(const TimeGrid& tg, const BoxDomain& d, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    SpaceTimeField h = SpaceTimeField::zeros(tg, d);
    for (int j = 1; j < tg.n; ++j)
        for (int p = 0; p < d.total_nodes(); ++p) {
            const double val = uni(rng);
            if (!d.is_boundary(d.multi_index(p))) h.at(j, p) = val;
        }
    h.boundary_class = BoundaryClass::SpacetimeZero;
    return h;
}

}  // namespace

TEST_CASE("CD Lagrangian partials agree with finite differences") {
    for (int dim : {1, 2}) {
        const auto mc = get_case("manu-cd-1d");
        CDCoefficients c = mc.coeffs;
        if (dim == 2) {
            c.gamma = {1.0, 0.5};
            c.K = {{0.1, 0.02}, {0.02, 0.2}};
            c.source = [](double t, const std::vector<double>& x) {
                return std::cos(t) + x[0] - x[1];
            };
        }
        const Lagrangian L = cd_lagrangian(c, dim);
        CHECK(verify_lagrangian_partials(L, dim, 25, 99u) <= 1e-7);
    }
}

TEST_CASE("action of L = y reduces to the quadrature of y") {
    const TimeGrid tg(0.0, 1.0, 16);
    const BoxDomain d = unit_box(1, 12);
    Lagrangian L;
    L.eval = [](const Lagrangian::Args& a) { return a.y; };
    L.dy = [](const Lagrangian::Args&) { return 1.0; };
    L.dv = [](const Lagrangian::Args&) { return 0.0; };
    L.dw = [](const Lagrangian::Args& a) {
        return std::vector<double>(a.w->size(), 0.0);
    };
    L.dz = L.dw;
    const auto u = smooth_state(tg, d, 0.0);
    const AsymmetricState U(u, SpaceTimeField::zeros(tg, d));
    const double got = action(L, U, FracOrder(0.5), CaputoScheme::GL);
    const double want =
        integrate(u, QuadRule::RightRectangle, QuadRule::LeftRectangle);
    CHECK(got == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("EL residuals are the exact adjoint of the action derivative") {
    const TimeGrid tg(0.0, 1.0, 12);
    const BoxDomain d = unit_box(1, 10);
    const auto mc = get_case("manu-cd-1d");
    const Lagrangian L = cd_lagrangian(mc.coeffs, 1);
    const AsymmetricState U(smooth_state(tg, d, 0.0), smooth_state(tg, d, 0.4));

    for (auto scheme : {CaputoScheme::GL, CaputoScheme::L1}) {
        const QuadRule rule = rule_for(scheme);
        const auto [rp, rm] = el_residual_pair(L, U, FracOrder(0.5), scheme);
        const AsymmetricState H(random_direction(tg, d, 5), random_direction(tg, d, 6));
        const double lhs =
            weighted_inner(rp, H.u_plus, rule) + weighted_inner(rm, H.u_minus, rule);
        const double rhs = action_derivative(L, U, H, FracOrder(0.5), scheme);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
    }
}

TEST_CASE("gradient check certifies quadratic exactness") {
    const TimeGrid tg(0.0, 1.0, 24);
    const BoxDomain d = unit_box(1, 20);
    const auto mc = get_case("manu-cd-1d");
    const Lagrangian L = cd_lagrangian(mc.coeffs, 1);
    const AsymmetricState U(smooth_state(tg, d, 0.0), smooth_state(tg, d, -0.3));
    for (auto scheme : {CaputoScheme::GL, CaputoScheme::L1}) {
        const auto rep = gradient_check(L, U, FracOrder(0.5), scheme, 8, 42u);
        CHECK(rep.metric("max_rel_err") <= 1e-9);
    }
    CHECK_THROWS_AS(gradient_check(L, U, FracOrder(0.5), CaputoScheme::GL, 0, 1u),
                    std::invalid_argument);
}

TEST_CASE("gradient check is reproducible for a fixed seed") {
    const TimeGrid tg(0.0, 1.0, 10);
    const BoxDomain d = unit_box(1, 8);
    const Lagrangian L = cd_lagrangian(get_case("sep-sine").coeffs, 1);
    const AsymmetricState U(smooth_state(tg, d, 0.1), smooth_state(tg, d, 0.2));
    const auto a = gradient_check(L, U, FracOrder(0.5), CaputoScheme::GL, 3, 7u);
    const auto b = gradient_check(L, U, FracOrder(0.5), CaputoScheme::GL, 3, 7u);
    CHECK(a.metric("max_rel_err") == b.metric("max_rel_err"));
    CHECK(a.metric("max_abs_err") == b.metric("max_abs_err"));
}

TEST_CASE("residual fields vanish at t=a and on the space boundary") {
    const TimeGrid tg(0.0, 1.0, 8);
    const BoxDomain d = unit_box(2, 6);
    CDCoefficients c = get_case("sep-sine").coeffs;
    c.gamma = {0.3, 0.0};
    c.K = {{0.1, 0.0}, {0.0, 0.1}};
    const Lagrangian L = cd_lagrangian(c, 2);
    const auto r = restricted_el_residual(L, smooth_state(tg, d, 0.0), FracOrder(0.5),
                                          CaputoScheme::GL);
    for (int p = 0; p < d.total_nodes(); ++p) CHECK(r.at(0, p) == 0.0);
    for (int j = 0; j <= tg.n; ++j)
        for (int p = 0; p < d.total_nodes(); ++p)
            if (d.is_boundary(d.multi_index(p))) CHECK(r.at(j, p) == 0.0);
}

TEST_CASE("action derivative rejects non-compact directions") {
    const TimeGrid tg(0.0, 1.0, 8);
    const BoxDomain d = unit_box(1, 6);
    const Lagrangian L = cd_lagrangian(get_case("sep-sine").coeffs, 1);
    const AsymmetricState U(smooth_state(tg, d, 0.0), SpaceTimeField::zeros(tg, d));
    const AsymmetricState H(smooth_state(tg, d, 0.0), smooth_state(tg, d, 0.0));
    CHECK_THROWS_AS(action_derivative(L, U, H, FracOrder(0.5), CaputoScheme::GL),
                    std::invalid_argument);
}

TEST_CASE("trapezoid-rule action converges under refinement") {
    // refinement oracle: successive differences of the L1/trapezoid action of
    // the same continuous data shrink (Cauchy in n)
    const auto mc = get_case("manu-cd-1d");
    const Lagrangian L = cd_lagrangian(mc.coeffs, 1);
    auto act = [&](int n) {
        const TimeGrid tg(0.0, 1.0, n);
        const BoxDomain d = unit_box(1, n);
        const auto u = SpaceTimeField::sample(tg, d, mc.exact);
        const AsymmetricState U(u, SpaceTimeField::zeros(tg, d));
        return action(L, U, FracOrder(0.5), CaputoScheme::L1, QuadRule::Trapezoid);
    };
    const double a0 = act(64), a1 = act(128), a2 = act(256);
    const double d01 = std::abs(a0 - a1), d12 = std::abs(a1 - a2);
    CHECK(d12 <= 5e-3);
    CHECK(d01 / d12 >= 1.5);
}
