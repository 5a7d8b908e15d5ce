#include <stdexcept>

#include "doctest.h"
#include "ibcs/grid.hpp"

using namespace ibcs;

TEST_CASE("make_grid validates inputs") {
    CHECK_THROWS_AS(make_grid(2, 2, 0.1, 0.1, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(8, 3, 0.1, 0.1, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(8, 8, -0.1, 0.1, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(8, 8, 0.1, 0.0, {0, 0}), std::invalid_argument);
    CHECK_NOTHROW(make_grid(4, 4, 0.5, 0.25, {1, 2}));
}

TEST_CASE("grid covers the expected box") {
    const double dx = 4.0 / 24.0;
    const GridSpec g = make_grid(24, 24, dx, dx, {-2.0 + 0.5 * dx, -2.0 + 0.5 * dx});
    CHECK(g.cell_x(0) == doctest::Approx(-2.0 + 0.5 * dx));
    CHECK(g.cell_x(23) == doctest::Approx(2.0 - 0.5 * dx));
    CHECK(g.cell_y(23) + 0.5 * dx == doctest::Approx(2.0));
}

TEST_CASE("staggering offsets") {
    const GridSpec g = make_grid(6, 5, 0.25, 0.5, {0.0, 1.0});
    for (int i = 0; i < g.nx - 1; ++i) CHECK(g.face_x_x(i) - g.cell_x(i) == doctest::Approx(0.5 * g.dx));
    for (int j = 0; j < g.ny - 1; ++j) CHECK(g.face_y_y(j) - g.cell_y(j) == doctest::Approx(0.5 * g.dy));
    CHECK(g.node_x(2) - g.cell_x(2) == doctest::Approx(0.5 * g.dx));
    CHECK(g.node_y(2) - g.cell_y(2) == doctest::Approx(0.5 * g.dy));
}

TEST_CASE("elementwise arithmetic") {
    const GridSpec g = make_grid(5, 4, 0.1, 0.1, {0, 0});
    CellField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) f(i, j) = i + 10.0 * j;
    const CellField ones(g, 1.0);

    SUBCASE("mul by ones is identity") {
        const CellField r = mul(f, ones);
        for (std::size_t k = 0; k < r.a.v.size(); ++k) CHECK(r.a.v[k] == f.a.v[k]);
    }
    SUBCASE("complementary indicators multiply to zero") {
        CellField hp(g);
        for (std::size_t k = 0; k < hp.a.v.size(); ++k) hp.a.v[k] = (k % 3 == 0) ? 1.0 : 0.0;
        const CellField hm = sub(ones, hp);
        CHECK(max_abs(mul(hp, hm)) == 0.0);
    }
    SUBCASE("scale cancellation") {
        CHECK(max_abs(add(scale(f, 2.0), scale(f, -2.0))) == 0.0);
    }
    SUBCASE("shape mismatch throws") {
        const GridSpec g2 = make_grid(6, 4, 0.1, 0.1, {0, 0});
        CHECK_THROWS_AS(add(f, CellField(g2)), std::invalid_argument);
    }
    SUBCASE("mul commutes") {
        CellField other(g);
        for (std::size_t k = 0; k < other.a.v.size(); ++k) other.a.v[k] = 0.5 * k - 3.0;
        CHECK(max_abs(sub(mul(f, other), mul(other, f))) == 0.0);
    }
}

TEST_CASE("tensor transpose swaps off-diagonal components") {
    const GridSpec g = make_grid(4, 4, 1.0, 1.0, {0, 0});
    TensorField t(g);
    t.xy(0, 0) = 3.0;
    t.yx(1, 1) = -2.0;
    const TensorField tt = transpose(t);
    CHECK(tt.yx(0, 0) == 3.0);
    CHECK(tt.xy(1, 1) == -2.0);
    CHECK(max_abs(sub(transpose(tt), t)) == 0.0);
}
