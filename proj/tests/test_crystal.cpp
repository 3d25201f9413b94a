#include "doctest.h"

#include <cmath>
#include <set>

#include "support.hpp"
#include "uqr/crystal.hpp"
#include "uqr/errors.hpp"

using namespace uqr;
using uqr::test::Gen;

namespace {

const std::vector<std::string> kGroups{"zorich2", "sine2", "p2", "p2-sine"};

} // namespace

TEST_CASE("registry knows exactly the four groups") {
    CHECK(CrystGroup::names() == kGroups);
    CHECK_THROWS_AS(CrystGroup::by_name("p4"), ArgumentError);
    CHECK(CrystGroup::p2().dim() == 3);
    CHECK(CrystGroup::sine2().dim() == 2);
    CHECK(CrystGroup::p2_sine().has_beam_rotation());
    CHECK_FALSE(CrystGroup::p2().has_beam_rotation());
}

TEST_CASE("transverse reduction lands in the box and recovers x") {
    Gen g(21);
    for (const auto& name : kGroups) {
        const CrystGroup grp = CrystGroup::by_name(name);
        const Index m = grp.transverse_dim();
        for (int k = 0; k < 2000; ++k) {
            const Point x = g.box(m, -20.0, 20.0);
            const Reduction r = reduce(grp, x);
            CHECK(grp.box().contains(r.point));
            CHECK((r.element(r.point) - x).norm() < 1e-12);
            CHECK(contains(grp, r.element.extended(grp.dim())));
            // Reduction is a function of the orbit.
            const Point y = r.point;
            CHECK((reduce_point(grp, y) - y).norm() < 1e-12);
        }
    }
}

TEST_CASE("reduction is constant on orbits") {
    Gen g(22);
    for (const auto& name : kGroups) {
        const CrystGroup grp = CrystGroup::by_name(name);
        const Index m = grp.transverse_dim();
        const auto gens = grp.generators();
        for (int k = 0; k < 1000; ++k) {
            Point x = g.box(grp.dim(), -6.0, 6.0);
            x(m) = 0.0;
            const Point base = reduce_point(grp, Point(x.head(m)));
            for (const auto& gen : gens) {
                if (grp.has_beam_rotation() && gen.rotation()(m, m) < 0) continue;
                const Point y = gen(x);
                CHECK((reduce_point(grp, Point(y.head(m))) - base).norm() < 1e-9);
            }
        }
    }
}

TEST_CASE("beam reduction picks the canonical half-beam for sine groups") {
    Gen g(23);
    for (const std::string name : {"sine2", "p2-sine"}) {
        const CrystGroup grp = CrystGroup::by_name(name);
        const Index m = grp.transverse_dim();
        for (int k = 0; k < 1000; ++k) {
            const Point x = g.box(grp.dim(), -8.0, 8.0);
            const Reduction r = reduce_beam(grp, x);
            CHECK(r.point(m) >= 0.0);
            CHECK((r.element(r.point) - x).norm() < 1e-12);
            CHECK(contains(grp, r.element));
        }
    }
}

TEST_CASE("dilations by integers are admissible, 1.5 is not") {
    for (const auto& name : kGroups) {
        const CrystGroup grp = CrystGroup::by_name(name);
        for (int d = 2; d <= 5; ++d) {
            const auto cert = check_admissible(grp, ConformalAutomorphism::dilation(d, grp.dim()));
            CHECK(cert.admissible);
            CHECK(cert.entries.size() == grp.generators().size());
        }
        const auto bad = check_admissible(grp, ConformalAutomorphism::dilation(1.5, grp.dim()));
        CHECK_FALSE(bad.admissible);
        CHECK_FALSE(bad.reason.empty());
    }
}

TEST_CASE("stabilizers: half-turn centres are branch points, 2/3 is free") {
    const CrystGroup p2 = CrystGroup::p2();
    CHECK(stabilizer(p2, make_point({0.0, 0.0})).size() == 2);
    CHECK(stabilizer(p2, make_point({1.0, 1.0})).size() == 2);
    CHECK(stabilizer(p2, make_point({1.0, 0.0})).size() == 2);
    CHECK(stabilizer(p2, make_point({2.0 / 3.0, 0.0})).size() == 1);
    CHECK(stabilizer(p2, make_point({0.5, 0.5})).size() == 1);
    const CrystGroup zs = CrystGroup::sine2();
    CHECK(stabilizer(zs, make_point({0.0, 0.0})).size() == 2);
    CHECK(stabilizer(zs, make_point({std::numbers::pi, 0.0})).size() == 2);
    CHECK(stabilizer(zs, make_point({2.0 * std::numbers::pi / 3.0, 0.0})).size() == 1);
    CHECK(stabilizer(zs, make_point({0.0, 0.5})).size() == 1);
}

TEST_CASE("orbit points: independent brute-force count for p2") {
    const CrystGroup p2 = CrystGroup::p2();
    const Point x = make_point({0.3, 0.2});
    const double radius = 7.5;
    // Oracle: orbit = {x + 2k} U {-x + 2k} over integer vectors k.
    std::set<std::pair<long, long>> oracle;
    for (int i = -10; i <= 10; ++i)
        for (int j = -10; j <= 10; ++j)
            for (int s : {1, -1}) {
                const double a = s * x(0) + 2 * i;
                const double b = s * x(1) + 2 * j;
                if (std::hypot(a, b) <= radius) oracle.insert({std::lround(a * 1e6), std::lround(b * 1e6)});
            }
    const auto pts = orbit_points(p2, x, radius);
    CHECK(pts.size() == oracle.size());
    for (const auto& p : pts) CHECK(oracle.count({std::lround(p(0) * 1e6), std::lround(p(1) * 1e6)}) == 1);
}

TEST_CASE("dilation coset representatives have d^m elements, doubled by R") {
    for (const auto& name : kGroups) {
        const CrystGroup grp = CrystGroup::by_name(name);
        const auto m = static_cast<int>(grp.transverse_dim());
        for (int d = 1; d <= 4; ++d) {
            const auto plain = dilation_coset_reps(grp, d, false);
            CHECK(plain.size() == static_cast<std::size_t>(std::lround(std::pow(d, m))));
            if (grp.has_beam_rotation())
                CHECK(dilation_coset_reps(grp, d, true).size() == 2 * plain.size());
            for (const auto& t : plain) CHECK(contains(grp, t));
        }
    }
}

TEST_CASE("membership is exact for far translations") {
    const CrystGroup p2 = CrystGroup::p2();
    CHECK(contains(p2, Isometry::translation(make_point({2e6, -4e6, 0.0}))));
    CHECK_FALSE(contains(p2, Isometry::translation(make_point({1.0, 0.0, 0.0}))));
    CHECK(contains(p2, Isometry::half_turn(make_point({1.0, 0.0})).extended(3)));
    CHECK_FALSE(contains(p2, Isometry::half_turn(make_point({0.5, 0.0})).extended(3)));
}
