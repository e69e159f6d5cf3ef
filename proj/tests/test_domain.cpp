#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>

#include "fracvar/domain.hpp"

using namespace fracvar;

TEST_CASE("box indexing round trip, last axis fastest") {
    const BoxDomain d({0.0, -1.0}, {1.0, 1.0}, {4, 8});
    CHECK(d.total_nodes() == 5 * 9);
    CHECK(d.stride(0) == 9);
    CHECK(d.stride(1) == 1);
    CHECK(d.flat_index({0, 0}) == 0);
    CHECK(d.flat_index({1, 0}) == 9);
    CHECK(d.flat_index({1, 2}) == 11);
    for (int p = 0; p < d.total_nodes(); ++p)
        CHECK(d.flat_index(d.multi_index(p)) == p);
    CHECK(d.is_boundary({0, 3}));
    CHECK(d.is_boundary({2, 8}));
    CHECK(!d.is_boundary({2, 3}));
    CHECK_THROWS_AS(BoxDomain({0.0}, {1.0}, {2}), std::invalid_argument);
    CHECK_THROWS_AS(BoxDomain({1.0}, {0.0}, {4}), std::invalid_argument);
}

TEST_CASE("quadrature weights and exactness on affine data") {
    const auto qt = quad_weights(4, 0.25, QuadRule::Trapezoid);
    CHECK(qt[0] == 0.125);
    CHECK(qt[2] == 0.25);
    CHECK(qt[4] == 0.125);
    const auto ql = quad_weights(4, 0.25, QuadRule::LeftRectangle);
    CHECK(ql[0] == 0.25);
    CHECK(ql[4] == 0.0);
    const auto qr = quad_weights(4, 0.25, QuadRule::RightRectangle);
    CHECK(qr[0] == 0.0);
    CHECK(qr[4] == 0.25);

    // trapezoid integrates affine functions exactly
    const BoxDomain d({0.0, 0.0}, {2.0, 1.0}, {8, 6});
    const auto f = SpatialField::sample(
        d, [](const std::vector<double>& x) { return 1.0 + 2.0 * x[0] - x[1]; });
    // int over [0,2]x[0,1] of 1 + 2x - y = 2 + 4 - 1 = 5
    CHECK(integrate(f) == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("space-time integration with split rules") {
    const BoxDomain d({0.0}, {1.0}, {8});
    const TimeGrid tg(0.0, 1.0, 10);
    const auto f = SpaceTimeField::sample(
        tg, d, [](double, const std::vector<double>&) { return 1.0; });
    CHECK(integrate(f, QuadRule::Trapezoid) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(integrate(f, QuadRule::RightRectangle) ==
          doctest::Approx(1.0).epsilon(1e-14));
    // rectangle rules drop one endpoint slice but keep total weight
    CHECK(integrate(f, QuadRule::RightRectangle, QuadRule::LeftRectangle) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("boundary class validation") {
    const BoxDomain d({0.0}, {1.0}, {4});
    const TimeGrid tg(0.0, 1.0, 4);
    std::vector<double> v(static_cast<size_t>(5) * 5, 0.0);
    CHECK_NOTHROW(SpaceTimeField(tg, d, v, BoundaryClass::SpacetimeZero));
    v[2] = 1.0;  // interior of slice 0: violates time-zero but not space-zero
    CHECK_NOTHROW(SpaceTimeField(tg, d, v, BoundaryClass::SpaceZero));
    CHECK_THROWS_AS(SpaceTimeField(tg, d, v, BoundaryClass::SpacetimeZero),
                    std::invalid_argument);
    v[0] = 1.0;  // space boundary node
    CHECK_THROWS_AS(SpaceTimeField(tg, d, v, BoundaryClass::SpaceZero),
                    std::invalid_argument);
    CHECK_THROWS_AS(SpatialField::sample(
                        d, [](const std::vector<double>&) { return 1.0; }, true),
                    std::invalid_argument);
}

TEST_CASE("line extract/insert round trip") {
    const BoxDomain d({0.0, 0.0}, {1.0, 1.0}, {4, 5});
    const auto f = SpatialField::sample(d, [](const std::vector<double>& x) {
        return std::sin(x[0]) + 3.0 * x[1];
    });
    const auto line = line_extract(f, 1, {2, 0});
    CHECK(line.grid.n == 5);
    CHECK(line.values[3] == f.values[d.flat_index({2, 3})]);
    const auto g = line_insert(f, 1, {2, 0}, line);
    for (int p = 0; p < d.total_nodes(); ++p) CHECK(g.values[p] == f.values[p]);
}

TEST_CASE("FRACVAR_THREADS controls parallelism and stays deterministic") {
    unsetenv("FRACVAR_THREADS");
    CHECK(max_threads() == 1);
    setenv("FRACVAR_THREADS", "0", 1);
    CHECK_THROWS_AS(max_threads(), std::invalid_argument);
    setenv("FRACVAR_THREADS", "4", 1);
    CHECK(max_threads() == 4);

    std::vector<double> serial(1000), parallel(1000);
    unsetenv("FRACVAR_THREADS");
    parallel_for(1000, [&](int i) { serial[i] = std::sin(0.1 * i) * i; });
    setenv("FRACVAR_THREADS", "4", 1);
    parallel_for(1000, [&](int i) { parallel[i] = std::sin(0.1 * i) * i; });
    unsetenv("FRACVAR_THREADS");
    for (int i = 0; i < 1000; ++i) CHECK(serial[i] == parallel[i]);
}
