#include "doctest.h"

#include <cmath>

#include "support.hpp"
#include "uqr/automorphic.hpp"
#include "uqr/errors.hpp"

using namespace uqr;
using uqr::test::cd;
using uqr::test::Gen;

namespace {

// z = x1 - i x2, so that e^{iz} = e^{x2} e^{i x1}.
cd z_of(const Point& x) { return {x(0), -x(1)}; }

double ext_dist(const Point& a, const Point& b) { return chordal_distance(ExtendedPoint(a), ExtendedPoint(b)); }

} // namespace

TEST_CASE("n = 2 exact modes equal exp(iz) and cos z") {
    Gen g(31);
    const AutomorphicMap e = AutomorphicMap::zorich(CrystGroup::zorich2());
    const AutomorphicMap c = AutomorphicMap::sine(CrystGroup::sine2());
    CHECK(e.kind() == AutomorphicKind::Exp2);
    CHECK(c.kind() == AutomorphicKind::Cos2);
    for (int k = 0; k < 5000; ++k) {
        const Point x = make_point({g.uniform(-20, 20), g.uniform(-5, 5)});
        const cd w = std::exp(cd(0, 1) * z_of(x));
        CHECK(ext_dist(e.eval(x), make_point({w.real(), w.imag()})) < 1e-13);
        const cd v = std::cos(z_of(x));
        CHECK(ext_dist(c.eval(x), make_point({v.real(), v.imag()})) < 1e-13);
    }
}

TEST_CASE("strong automorphy on generators and random group words") {
    Gen g(32);
    for (const auto& name : CrystGroup::names()) {
        const CrystGroup grp = CrystGroup::by_name(name);
        const Index n = grp.dim();
        const auto h = grp.has_beam_rotation() ? AutomorphicMap::sine(grp) : AutomorphicMap::zorich(grp);
        const auto gens = grp.generators();
        const double tol = n == 2 ? 1e-12 : 1e-9;
        for (int k = 0; k < 2000; ++k) {
            Point x = g.box(n, -4.0, 4.0);
            Isometry word = Isometry::identity(n);
            for (int j = 0; j < 4; ++j) {
                const auto& s = gens[static_cast<std::size_t>(g.integer(0, static_cast<int>(gens.size()) - 1))];
                word = compose(s, word);
            }
            CHECK(ext_dist(h.eval(word(x)), h.eval(x)) < tol);
        }
    }
}

TEST_CASE("Zorich modulus is e^{x_n} and the omitted values are 0 and infinity") {
    Gen g(33);
    const AutomorphicMap z = AutomorphicMap::zorich(CrystGroup::p2());
    for (int k = 0; k < 1000; ++k) {
        const Point x = g.box(3, -5.0, 5.0);
        CHECK(z.eval(x).norm() == doctest::Approx(std::exp(x(2))).epsilon(1e-14));
    }
    const auto om = z.omitted_values();
    REQUIRE(om.size() == 2);
    CHECK(om[0].point().norm() == 0.0);
    CHECK(om[1].is_infinite());
    const auto so = AutomorphicMap::sine(CrystGroup::p2_sine()).omitted_values();
    REQUIRE(so.size() == 1);
    CHECK(so[0].is_infinite());
    CHECK_THROWS_AS(z.invert(ExtendedPoint(make_point({0.0, 0.0, 0.0}))), OmittedValueError);
    CHECK_THROWS_AS(z.eval(make_point({0.0, 0.0, 800.0})), RangeError);
}

TEST_CASE("inverse branches round-trip and land in the fundamental beam") {
    Gen g(34);
    for (const auto& name : CrystGroup::names()) {
        const CrystGroup grp = CrystGroup::by_name(name);
        const Index n = grp.dim();
        std::vector<AutomorphicMap> maps;
        if (grp.has_beam_rotation()) {
            maps.push_back(AutomorphicMap::sine(grp, SineVariant::Cell));
            if (n == 3) maps.push_back(AutomorphicMap::sine(grp, SineVariant::Averaged));
        } else {
            maps.push_back(AutomorphicMap::zorich(grp));
        }
        for (const auto& h : maps) {
            for (int k = 0; k < 2000; ++k) {
                const Point y = g.shell(n, 1e-3, 1e3);
                const BeamPoint b = h.invert(y);
                CHECK(grp.box().contains(b.transverse));
                if (grp.has_beam_rotation()) CHECK(b.height >= 0.0);
                CHECK(ext_dist(h.eval(b.ambient()), y) < 1e-10);
            }
        }
    }
}

TEST_CASE("base embedding is continuous across box faces and folds") {
    Gen g(35);
    const BaseEmbedding u(CrystGroup::p2());
    const double delta = 1e-7;
    double worst = 0.0;
    for (int k = 0; k < 5000; ++k) {
        const double s = g.uniform(-1.0, 1.0);
        const double t = g.uniform(0.0, 1.0);
        // Faces x1 = +-1 (lattice translates of each other) and the folds x2 = 0, x2 = 1.
        worst = std::max(worst, (u.embed(make_point({1.0 - delta, t})) - u.embed(make_point({1.0 + delta, t}))).norm());
        worst = std::max(worst, (u.embed(make_point({-1.0 - delta, t})) - u.embed(make_point({-1.0 + delta, t}))).norm());
        worst = std::max(worst, (u.embed(make_point({s, -delta})) - u.embed(make_point({s, delta}))).norm());
        worst = std::max(worst, (u.embed(make_point({s, 1.0 - delta})) - u.embed(make_point({s, 1.0 + delta}))).norm());
        // The internal seam x1 = 0 between the two hemispheres.
        worst = std::max(worst, (u.embed(make_point({-delta, t})) - u.embed(make_point({delta, t}))).norm());
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("base embedding is onto the sphere and invertible") {
    Gen g(36);
    const BaseEmbedding u(CrystGroup::p2());
    for (int k = 0; k < 3000; ++k) {
        const Point sigma = g.direction(3);
        const Point x = u.invert(sigma);
        CHECK((u.embed(x) - sigma).norm() < 1e-10);
        const Point x0 = g.box(2, -5.0, 5.0);
        CHECK(std::abs(u.embed(x0).norm() - 1.0) < 1e-14);
    }
    CHECK_THROWS_AS(u.invert(make_point({2.0, 0.0, 0.0})), ArgumentError);
}

TEST_CASE("sine-type map is continuous across the cell transition and odd in the beam") {
    Gen g(37);
    const AutomorphicMap s = AutomorphicMap::sine(CrystGroup::p2_sine());
    for (int k = 0; k < 2000; ++k) {
        const Point p = g.box(2, -3.0, 3.0);
        const Point lo = make_point({p(0), p(1), 1.0 - 1e-9});
        const Point hi = make_point({p(0), p(1), 1.0 + 1e-9});
        CHECK((s.eval(lo) - s.eval(hi)).norm() < 1e-7);
        const double t = g.uniform(0.0, 3.0);
        const Point a = s.eval(make_point({p(0), p(1), t}));
        const Point b = s.eval(make_point({p(0), p(1), -t}));
        CHECK(std::abs(a(0) - b(0)) + std::abs(a(1) - b(1)) < 1e-12);
        CHECK(std::abs(a(2) + b(2)) < 1e-12);
    }
    // At the base the image is the unit disk in the plane x3 = 0.
    for (int k = 0; k < 200; ++k) {
        const Point y = s.eval(make_point({g.uniform(-1, 1), g.uniform(0, 1), 0.0}));
        CHECK(std::abs(y(2)) == 0.0);
        CHECK(y.head(2).norm() <= 1.0 + 1e-15);
    }
}

TEST_CASE("names round-trip") {
    CHECK(sine_variant_from_string(to_string(SineVariant::Averaged)) == SineVariant::Averaged);
    CHECK(sine_variant_from_string("cell") == SineVariant::Cell);
    CHECK_THROWS_AS(sine_variant_from_string("mean"), ArgumentError);
}
