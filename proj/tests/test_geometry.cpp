#include "doctest.h"

#include "support.hpp"
#include "uqr/errors.hpp"
#include "uqr/geometry.hpp"

using namespace uqr;
using uqr::test::Gen;

TEST_CASE("chordal distance matches the stereographic oracle") {
    Gen g(11);
    for (int k = 0; k < 2000; ++k) {
        const Index n = g.integer(2, 3);
        const ExtendedPoint a(g.shell(n, 1e-3, 1e3));
        const ExtendedPoint b(g.shell(n, 1e-3, 1e3));
        CHECK(chordal_distance(a, b) == doctest::Approx(test::chordal_oracle(a, b)).epsilon(1e-9));
        const ExtendedPoint inf = ExtendedPoint::infinity(n);
        CHECK(chordal_distance(a, inf) == doctest::Approx(test::chordal_oracle(a, inf)).epsilon(1e-12));
    }
}

TEST_CASE("chordal distance is a metric bounded by 2") {
    Gen g(12);
    for (int k = 0; k < 2000; ++k) {
        const ExtendedPoint a(g.shell(3, 1e-4, 1e4));
        const ExtendedPoint b(g.shell(3, 1e-4, 1e4));
        const ExtendedPoint c = k % 7 == 0 ? ExtendedPoint::infinity(3) : ExtendedPoint(g.shell(3, 1e-4, 1e4));
        const double ab = chordal_distance(a, b);
        CHECK(ab == chordal_distance(b, a));
        CHECK(ab <= 2.0);
        CHECK(ab <= chordal_distance(a, c) + chordal_distance(c, b) + 1e-15);
    }
    const ExtendedPoint zero(make_point({0.0, 0.0}));
    CHECK(chordal_distance(zero, ExtendedPoint::infinity(2)) == doctest::Approx(2.0));
}

TEST_CASE("chordal distance stays finite across the whole double range") {
    const ExtendedPoint big(make_point({1e300, -1e300, 1e299}));
    const ExtendedPoint tiny(make_point({1e-300, 0.0, 0.0}));
    const double d_inf = chordal_distance(big, ExtendedPoint::infinity(3));
    CHECK(d_inf > 0.0);
    CHECK(d_inf < 1e-299);
    CHECK(chordal_distance(big, tiny) == doctest::Approx(2.0));
    CHECK(chordal_distance(tiny, ExtendedPoint(make_point({0.0, 0.0, 0.0}))) == doctest::Approx(2e-300));
}

TEST_CASE("extended points reject non-finite coordinates and guard infinity") {
    CHECK_THROWS_AS(ExtendedPoint(make_point({std::nan(""), 0.0})), ArgumentError);
    CHECK_THROWS_AS(ExtendedPoint::infinity(2).point(), ArgumentError);
    CHECK(ExtendedPoint::infinity(3) == ExtendedPoint::infinity(3));
}

TEST_CASE("isometries compose and invert") {
    Gen g(13);
    for (int k = 0; k < 300; ++k) {
        const Isometry a(axis_rotation(g.direction(3), g.uniform(-3, 3)), g.box(3, -5, 5));
        const Isometry b(axis_rotation(g.direction(3), g.uniform(-3, 3)), g.box(3, -5, 5));
        const Point x = g.box(3, -10, 10);
        CHECK((compose(a, b)(x) - a(b(x))).norm() < 1e-12);
        CHECK((inverse(a)(a(x)) - x).norm() < 1e-12);
        CHECK(isometry_distance(compose(a, inverse(a)), Isometry::identity(3)) < 1e-13);
        // Distances are preserved.
        const Point y = g.box(3, -10, 10);
        CHECK((a(x) - a(y)).norm() == doctest::Approx((x - y).norm()).epsilon(1e-13));
    }
}

TEST_CASE("isometry construction validates the rotation") {
    Matrix m = Matrix::Identity(2, 2);
    m(0, 0) = -1.0;
    CHECK_THROWS_AS(Isometry(m, make_point({0.0, 0.0})), ArgumentError);
    Matrix s = Matrix::Identity(2, 2) * 1.1;
    CHECK_THROWS_AS(Isometry(s, make_point({0.0, 0.0})), ArgumentError);
    const Isometry h = Isometry::half_turn(make_point({1.0, 2.0}));
    CHECK((h(make_point({0.0, 0.0})) - make_point({2.0, 4.0})).norm() == 0.0);
    const Isometry e = h.extended(3);
    CHECK((e(make_point({0.0, 0.0, 5.0})) - make_point({2.0, 4.0, 5.0})).norm() == 0.0);
}

TEST_CASE("ball automorphisms preserve the ball and the hyperbolic distance") {
    Gen g(14);
    auto hyp = [](const Point& x, const Point& y) {
        return std::acosh(1.0 + 2.0 * (x - y).squaredNorm() / ((1.0 - x.squaredNorm()) * (1.0 - y.squaredNorm())));
    };
    for (int k = 0; k < 500; ++k) {
        const BallMobius t(g.ball(3, 0.9), axis_rotation(g.direction(3), g.uniform(-3, 3)));
        const Point x = g.ball(3, 0.95);
        const Point y = g.ball(3, 0.95);
        CHECK(t(x).norm() < 1.0);
        CHECK((t.inverse(t(x)) - x).norm() < 1e-10);
        CHECK(hyp(t(x), t(y)) == doctest::Approx(hyp(x, y)).epsilon(1e-8));
    }
    CHECK_THROWS_AS(BallMobius(make_point({1.0, 0.0}), Matrix::Identity(2, 2)), DomainError);
    CHECK_THROWS_AS(BallMobius::identity(2)(make_point({1.5, 0.0})), DomainError);
}

TEST_CASE("elliptic automorphisms fix their centre and compose consistently") {
    Gen g(15);
    for (int k = 0; k < 100; ++k) {
        const Point p = g.ball(3, 0.8);
        const BallMobius e = BallMobius::elliptic(p, axis_rotation(g.direction(3), g.uniform(-3, 3)));
        CHECK((e(p) - p).norm() < 1e-12);
        const BallMobius a(g.ball(3, 0.7), axis_rotation(g.direction(3), 0.3));
        const BallMobius c = compose(a, e);
        const Point x = g.ball(3, 0.9);
        CHECK((c(x) - a(e(x))).norm() < 1e-10);
    }
    // Rotation by 2 pi / 5 about a point off the origin returns after five steps.
    const BallMobius r = BallMobius::elliptic(make_point({0.3, 0.0}), plane_rotation(0.4 * std::numbers::pi));
    Point x = make_point({-0.2, 0.5});
    const Point x0 = x;
    for (int k = 0; k < 5; ++k) x = r(x);
    CHECK((x - x0).norm() < 1e-12);
}
