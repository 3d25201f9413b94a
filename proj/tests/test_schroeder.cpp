#include "doctest.h"

#include <cmath>

#include "support.hpp"
#include "uqr/errors.hpp"
#include "uqr/schroeder.hpp"

using namespace uqr;
using uqr::test::as_complex;
using uqr::test::cd;
using uqr::test::from_complex;
using uqr::test::Gen;

namespace {

ExtendedPoint ep(const Point& p) { return ExtendedPoint(p); }

} // namespace

TEST_CASE("n = 2 power and Chebyshev maps match the complex oracles") {
    Gen g(41);
    for (int d = 2; d <= 4; ++d) {
        const SchroederMap p = power_map(CrystGroup::zorich2(), d);
        const SchroederMap c = cheb_map(CrystGroup::sine2(), d);
        CHECK(p.kind() == SchroederKind::PowerType);
        CHECK(c.kind() == SchroederKind::ChebyshevType);
        CHECK(p.integer_degree() == d);
        for (int k = 0; k < 3000; ++k) {
            const Point y = g.shell(2, 0.1, 10.0);
            CHECK(chordal_distance(p(ep(y)), from_complex(std::pow(as_complex(y), d))) < 1e-12);
            const Point w = g.box(2, -3.0, 3.0);
            CHECK(chordal_distance(c(ep(w)), from_complex(test::chebyshev_t(d, as_complex(w)))) < 1e-10);
        }
    }
}

TEST_CASE("omitted values are fixed") {
    for (int d = 2; d <= 3; ++d) {
        const SchroederMap p = power_map(CrystGroup::p2(), d);
        const ExtendedPoint zero(Point::Zero(3));
        const ExtendedPoint inf = ExtendedPoint::infinity(3);
        CHECK(p(zero) == zero);
        CHECK(p(inf) == inf);
        CHECK(cheb_map(CrystGroup::p2_sine(), d)(inf) == inf);
    }
}

TEST_CASE("n = 3 power map: |f(y)| = |y|^d") {
    Gen g(42);
    for (int d = 2; d <= 3; ++d) {
        const SchroederMap p = power_map(CrystGroup::p2(), d);
        for (int k = 0; k < 2000; ++k) {
            const Point y = g.shell(3, 0.1, 10.0);
            CHECK(p(ep(y)).point().norm() == doctest::Approx(std::pow(y.norm(), d)).epsilon(1e-12));
        }
    }
}

TEST_CASE("non-admissible A raises a precondition error") {
    const CrystGroup p2 = CrystGroup::p2();
    CHECK_THROWS_AS(SchroederMap(AutomorphicMap::zorich(p2), ConformalAutomorphism::dilation(1.5, 3)),
                    PreconditionError);
    CHECK_THROWS_AS(power_map(p2, 1), ArgumentError);
}

TEST_CASE("involution oracles: 1/y in the plane, inversion-reflection in space") {
    Gen g(43);
    const Joukowsky j2(2);
    const Joukowsky j3(3);
    for (int k = 0; k < 3000; ++k) {
        const Point y = g.shell(2, 0.05, 20.0);
        CHECK(chordal_distance(j2.involution(ep(y)), from_complex(1.0 / as_complex(y))) < 1e-12);
        const Point v = g.shell(3, 0.05, 20.0);
        const Point expect = make_point({v(0), v(1), -v(2)}) / v.squaredNorm();
        CHECK(chordal_distance(j3.involution(ep(v)), ep(expect)) < 1e-10);
    }
}

TEST_CASE("Joukowsky analogue: oracle in the plane, symmetries in space") {
    Gen g(44);
    for (int d = 1; d <= 3; ++d) {
        const Joukowsky h2(2, d);
        for (int k = 0; k < 2000; ++k) {
            const Point y = g.shell(2, 0.1, 10.0);
            const cd z = std::pow(as_complex(y), d);
            CHECK(chordal_distance(h2(ep(y)), from_complex(0.5 * (z + 1.0 / z))) < 1e-12);
        }
    }
    const Joukowsky h1(3);
    for (int k = 0; k < 2000; ++k) {
        const Point y = g.shell(3, 0.1, 10.0);
        CHECK(chordal_distance(h1(h1.involution(ep(y))), h1(ep(y))) < 1e-9);
    }
}

TEST_CASE("preimage fibers have d^{n-1} points, 2 d^{n-1} for h_d") {
    Gen g(45);
    const SchroederMap p2 = power_map(CrystGroup::p2(), 2);
    const SchroederMap p3 = power_map(CrystGroup::p2(), 3);
    const SchroederMap c2 = cheb_map(CrystGroup::p2_sine(), 2);
    const Joukowsky hd(3, 2);
    const Joukowsky hz(2, 3);
    for (int k = 0; k < 50; ++k) {
        const Point y = g.shell(3, 0.3, 3.0);
        const auto a = preimages(p2, ep(y));
        CHECK(a.size() == 4);
        for (const auto& w : a) CHECK(chordal_distance(p2(w), ep(y)) < 1e-9);
        CHECK(preimages(p3, ep(y)).size() == 9);
        const auto c = preimages(c2, ep(y));
        CHECK(c.size() == 4);
        for (const auto& w : c) CHECK(chordal_distance(c2(w), ep(y)) < 1e-9);
        const auto h = preimages(hd, ep(y));
        CHECK(h.size() == 8);
        for (const auto& w : h) CHECK(chordal_distance(hd(w), ep(y)) < 1e-9);
        CHECK(preimages(hz, ep(g.shell(2, 0.3, 3.0))).size() == 6);
    }
}

TEST_CASE("preimages at a critical value are rejected") {
    // h_1(1) = 1 is a branch value of the planar Joukowsky map.
    const Joukowsky h(2, 1);
    CHECK_THROWS_AS(preimages(h, ExtendedPoint(make_point({1.0, 0.0}))), DegenerateInputError);
}

TEST_CASE("lift through h_1: power map in the plane, semi-conjugacy in space") {
    Gen g(46);
    for (int d = 2; d <= 3; ++d) {
        const LiftedMap p(cheb_map(CrystGroup::sine2(), d));
        for (int k = 0; k < 2000; ++k) {
            const Point y = g.shell(2, 0.1, 10.0);
            CHECK(chordal_distance(p(ep(y)), from_complex(std::pow(as_complex(y), d))) < 1e-9);
        }
    }
    const LiftedMap p3(cheb_map(CrystGroup::p2_sine(), 2));
    const Joukowsky& h1 = p3.joukowsky();
    for (int k = 0; k < 2000; ++k) {
        const Point y = g.shell(3, 0.1, 10.0);
        CHECK(chordal_distance(p3.base()(h1(ep(y))), h1(p3(ep(y)))) < 1e-8);
    }
    // The unit sphere is invariant; on it the value is a one-sided limit.
    const LiftValue v = p3.evaluate(ep(make_point({0.6, 0.0, 0.8})));
    CHECK(v.on_sphere);
    CHECK(std::abs(v.value.point().norm() - 1.0) < 1e-6);
}

TEST_CASE("linearizer: planar exponential at 0") {
    Gen g(47);
    const SchroederMap f = power_map(CrystGroup::zorich2(), 2);
    const Linearizer l = linearize(f, make_point({0.0}));
    CHECK((l.multiplier() - 2.0 * Matrix::Identity(2, 2)).norm() == 0.0);
    for (int k = 0; k < 2000; ++k) {
        const Point v = g.ball(2, 10.0);
        const cd w = std::exp(cd(0, 1) * cd(v(0), -v(1)));
        CHECK(chordal_distance(l(v), from_complex(w)) < 1e-13);
        CHECK(chordal_distance(f(l(v)), l(l.apply_multiplier(v))) < 1e-12);
    }
}

TEST_CASE("linearizer in p2: multiplier is -2 on the base and +2 along the beam") {
    const SchroederMap f = power_map(CrystGroup::p2(), 2);
    const Linearizer l = linearize(f, make_point({2.0 / 3.0, 0.0}));
    Matrix expect = Matrix::Zero(3, 3);
    expect.diagonal() << -2.0, -2.0, 2.0;
    CHECK((l.multiplier() - expect).norm() < 1e-12);
    CHECK_THROWS_AS(linearize(f, make_point({0.0, 0.0})), BranchPointError);
    CHECK_THROWS_AS(linearize(f, make_point({0.3, 0.1})), NotFixedPointError);
}

TEST_CASE("default linearization points are fixed modulo G for every degree") {
    Gen g(48);
    for (const auto& name : CrystGroup::names()) {
        const CrystGroup grp = CrystGroup::by_name(name);
        for (int d = 2; d <= 5; ++d) {
            const SchroederMap f = grp.has_beam_rotation() ? cheb_map(grp, d) : power_map(grp, d);
            const Linearizer l = linearize(f, default_linearization_point(grp, d));
            for (int k = 0; k < 200; ++k) {
                const Point v = g.ball(grp.dim(), 2.0);
                CHECK(chordal_distance(f(l(v)), l(l.apply_multiplier(v))) < 1e-9);
            }
        }
    }
}

TEST_CASE("quasiconformal deformations invert") {
    Gen g(49);
    const std::vector<QcDeformation> defs{QcDeformation::shear(0.5, 3), QcDeformation::twist(0.7, 3),
                                          QcDeformation::radial_power(1.5, 3), QcDeformation::identity(3)};
    for (const auto& q : defs) {
        for (int k = 0; k < 1000; ++k) {
            const Point x = g.ball(3, 5.0);
            CHECK((q.inverse(q.apply(x)) - x).norm() < 1e-12 * std::max(1.0, x.norm()));
        }
        CHECK(q.apply(ExtendedPoint::infinity(3)).is_infinite());
    }
    Matrix s = Matrix::Identity(3, 3);
    s(0, 2) = 0.5;
    CHECK((QcDeformation::shear(0.5, 3).linear_part() - s).norm() == 0.0);
    CHECK(deformation_from_string("radial-power") == DeformationKind::RadialPower);
    CHECK_THROWS_AS(deformation_from_string("bend"), ArgumentError);
}

TEST_CASE("conjugation transports iterates") {
    Gen g(50);
    const SelfMap f = power_map(CrystGroup::p2(), 2).as_self_map();
    const QcDeformation q = QcDeformation::shear(0.5, 3);
    const SelfMap fq = conjugate(f, q);
    for (int k = 0; k < 500; ++k) {
        const Point y = g.shell(3, 0.5, 2.0);
        CHECK(chordal_distance(iterate(fq, ep(y), 3), q.apply(iterate(f, q.inverse(ep(y)), 3))) < 1e-9);
    }
}
