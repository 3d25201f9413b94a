#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

#include "uqr/geometry.hpp"

namespace uqr::test {

/// SplitMix64; every property test draws from its own fixed seed.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * unit(); }
    int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

    double normal() {
        const double u = 1.0 - unit();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * unit());
    }

    Point box(Index n, double lo, double hi) {
        Point p(n);
        for (Index i = 0; i < n; ++i) p(i) = uniform(lo, hi);
        return p;
    }

    Point direction(Index n) {
        Point p(n);
        do {
            for (Index i = 0; i < n; ++i) p(i) = normal();
        } while (p.norm() < 1e-9);
        return p.normalized();
    }

    /// |y| log-uniform in [lo, hi].
    Point shell(Index n, double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))) * direction(n); }

    Point ball(Index n, double radius) {
        return radius * std::pow(unit(), 1.0 / static_cast<double>(n)) * direction(n);
    }

private:
    std::uint64_t state_;
};

using cd = std::complex<double>;

inline cd as_complex(const Point& p) { return {p(0), p(1)}; }

inline ExtendedPoint from_complex(cd z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return ExtendedPoint::infinity(2);
    return ExtendedPoint(make_point({z.real(), z.imag()}));
}

/// Stereographic image on the unit sphere of R^{n+1}; the chordal oracle is the
/// Euclidean distance between two such images.
inline Eigen::VectorXd sphere_image(const ExtendedPoint& p) {
    const Index n = p.dim();
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n + 1);
    if (p.is_infinite()) {
        s(n) = 1.0;
        return s;
    }
    const Point& x = p.point();
    const double q = x.squaredNorm();
    for (Index i = 0; i < n; ++i) s(i) = 2.0 * x(i) / (1.0 + q);
    s(n) = (q - 1.0) / (q + 1.0);
    return s;
}

inline double chordal_oracle(const ExtendedPoint& a, const ExtendedPoint& b) {
    return (sphere_image(a) - sphere_image(b)).norm();
}

/// T_d by the three-term recurrence.
inline cd chebyshev_t(int d, cd y) {
    cd a = 1.0;
    cd b = y;
    if (d == 0) return a;
    for (int k = 1; k < d; ++k) {
        const cd c = 2.0 * y * b - a;
        a = b;
        b = c;
    }
    return b;
}

} // namespace uqr::test
