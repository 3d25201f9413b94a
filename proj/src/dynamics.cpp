#include "uqr/dynamics.hpp"

#include <algorithm>
#include <exception>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <thread>

namespace uqr {

std::string to_string(OrbitClass c) {
    switch (c) {
    case OrbitClass::ToZero: return "to_zero";
    case OrbitClass::ToInfinity: return "to_infinity";
    case OrbitClass::Bounded: return "bounded";
    case OrbitClass::Undecided: return "undecided";
    }
    return "undecided";
}

namespace {

void check_orbit_options(const OrbitOptions& options) {
    if (options.max_iter < 1) throw ArgumentError("classify_orbit: max_iter must be >= 1");
    if (!(options.r_small > 0.0 && options.r_small < 1.0 && options.r_large > 1.0))
        throw ArgumentError("classify_orbit: thresholds must satisfy 0 < r_small < 1 < r_large");
}

} // namespace

OrbitRecord classify_orbit(const SelfMap& f, const ExtendedPoint& x, const OrbitOptions& options) {
    check_orbit_options(options);
    OrbitRecord rec;
    rec.start = x;
    ExtendedPoint y = x;
    for (int m = 0;; ++m) {
        rec.iterations_used = m;
        if (y.is_infinite() || y.point().norm() > options.r_large) {
            rec.classification = OrbitClass::ToInfinity;
            return rec;
        }
        if (options.detect_zero && y.point().norm() < options.r_small) {
            rec.classification = OrbitClass::ToZero;
            return rec;
        }
        if (m == options.max_iter) {
            rec.classification = OrbitClass::Bounded;
            return rec;
        }
        try {
            y = f(y);
        } catch (const Error&) {
            rec.classification = OrbitClass::Undecided;
            return rec;
        }
        if (options.record_samples) rec.samples.push_back(y);
    }
}

Slice Slice::coordinate_plane(Index dim, Index axis1, Index axis2, double extent) {
    if (axis1 == axis2 || axis1 >= dim || axis2 >= dim) throw ArgumentError("slice: invalid axes");
    Slice s;
    s.origin = Point::Zero(dim);
    s.e1 = Point::Zero(dim);
    s.e2 = Point::Zero(dim);
    s.e1(axis1) = 1.0;
    s.e2(axis2) = 1.0;
    s.extent = extent;
    return s;
}

Point JuliaRaster::cell_center(int i, int j) const {
    const double h = slice.extent / resolution;
    const double s = (i + 0.5) * h - 0.5 * slice.extent;
    const double t = (j + 0.5) * h - 0.5 * slice.extent;
    return slice.origin + s * slice.e1 + t * slice.e2;
}

double JuliaRaster::cell_diagonal() const { return std::sqrt(2.0) * slice.extent / resolution; }

bool JuliaRaster::is_interface(int i, int j) const {
    const OrbitClass c = at(i, j);
    const int di[] = {1, -1, 0, 0};
    const int dj[] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
        const int a = i + di[k];
        const int b = j + dj[k];
        if (a < 0 || b < 0 || a >= resolution || b >= resolution) continue;
        if (at(a, b) != c) return true;
    }
    return false;
}

JuliaRaster julia_raster(const SelfMap& f, const Slice& slice, int resolution, const OrbitOptions& options,
                         int threads) {
    if (resolution < 16 || resolution > 4096) throw ArgumentError("julia_raster: resolution must be in [16, 4096]");
    if (!(slice.extent > 0.0)) throw ArgumentError("julia_raster: extent must be positive");
    if (slice.e1.size() != f.dim || slice.e2.size() != f.dim || slice.origin.size() != f.dim)
        throw ArgumentError("julia_raster: slice dimension mismatch");
    if (std::abs(slice.e1.norm() - 1.0) > 1e-12 || std::abs(slice.e2.norm() - 1.0) > 1e-12 ||
        std::abs(slice.e1.dot(slice.e2)) > 1e-12)
        throw ArgumentError("julia_raster: slice vectors must be orthonormal");
    JuliaRaster r;
    r.slice = slice;
    r.resolution = resolution;
    const auto cells = static_cast<std::size_t>(resolution) * resolution;
    r.classes.assign(cells, OrbitClass::Undecided);
    r.iterations.assign(cells, 0);
    check_orbit_options(options);
    OrbitOptions opts = options;
    opts.record_samples = false;
    const int stride = std::max(threads, 1);
    // One slot per worker; the lowest-index failure is rethrown after the join.
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(stride));
    auto work = [&](int first) {
        try {
            for (int j = first; j < resolution; j += stride) {
                for (int i = 0; i < resolution; ++i) {
                    const OrbitRecord rec = classify_orbit(f, ExtendedPoint(r.cell_center(i, j)), opts);
                    const auto idx = static_cast<std::size_t>(j) * resolution + i;
                    r.classes[idx] = rec.classification;
                    r.iterations[idx] = rec.iterations_used;
                }
            }
        } catch (...) {
            failures[static_cast<std::size_t>(first)] = std::current_exception();
        }
    };
    if (stride == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < stride; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : failures)
        if (e) std::rethrow_exception(e);
    return r;
}

std::vector<InterfaceCell> julia_points(const JuliaRaster& raster) {
    std::vector<InterfaceCell> out;
    for (int j = 0; j < raster.resolution; ++j)
        for (int i = 0; i < raster.resolution; ++i)
            if (raster.is_interface(i, j))
                out.push_back({i, j, raster.cell_center(i, j), raster.at(i, j), raster.iters_at(i, j)});
    return out;
}

std::string to_string(DwVerdict v) {
    switch (v) {
    case DwVerdict::Converged: return "converged";
    case DwVerdict::AutomorphismLike: return "automorphism_like";
    case DwVerdict::Undecided: return "undecided";
    }
    return "undecided";
}

std::vector<Point> sample_net(Index dim, double radius, int count, double phase) {
    require_dimension(dim, 2, 3, "sample_net");
    if (count < 3) throw ArgumentError("sample_net: count must be >= 3");
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    const double shells[] = {0.1, 0.3, 0.5};
    std::vector<Point> out;
    for (int s = 0; s < 3; ++s) {
        const int k = count / 3 + (s < count % 3 ? 1 : 0);
        const double rho = shells[s] * radius;
        for (int i = 0; i < k; ++i) {
            Point p(dim);
            if (dim == 2) {
                const double th = 2.0 * std::numbers::pi * (i + 0.5) / k + phase;
                p << std::cos(th), std::sin(th);
            } else {
                const double z = 1.0 - 2.0 * (i + 0.5) / k;
                const double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
                const double th = golden * i + phase;
                p << rr * std::cos(th), rr * std::sin(th), z;
            }
            out.push_back(rho * p);
        }
    }
    return out;
}

namespace {

double hyperbolic_distance(const Point& x, const Point& y) {
    const double num = 2.0 * (x - y).squaredNorm();
    const double den = (1.0 - x.squaredNorm()) * (1.0 - y.squaredNorm());
    return std::acosh(1.0 + num / den);
}

Point to_ball(const QcDeformation* domain, const Point& y) { return domain ? domain->inverse(y) : y; }

// Cesàro average of the second half of the orbit of the net centroid.
std::optional<Point> centroid_limit(const SelfMap& f, const std::vector<Point>& net, int max_iter) {
    Point c = Point::Zero(net.front().size());
    for (const auto& p : net) c += p;
    c /= static_cast<double>(net.size());
    ExtendedPoint z(c);
    Point sum = Point::Zero(c.size());
    int counted = 0;
    for (int m = 1; m <= max_iter; ++m) {
        z = f(z);
        if (z.is_infinite()) return std::nullopt;
        if (m > max_iter / 2) {
            sum += z.point();
            ++counted;
        }
    }
    return Point(sum / counted);
}

} // namespace

ConvergenceReport denjoy_wolff(const SelfMap& f, const DenjoyWolffOptions& options, const QcDeformation* domain) {
    const Index n = f.dim;
    if (!(options.sample_radius > 0.0 && options.sample_radius < 1.0))
        throw ArgumentError("denjoy_wolff: sample_radius must be in (0, 1)");
    if (!(options.tol > 0.0) || options.max_iter < 2) throw ArgumentError("denjoy_wolff: invalid tolerance or max_iter");
    auto transport = [&](std::vector<Point> net) {
        if (domain)
            for (auto& p : net) p = domain->apply(p);
        return net;
    };
    const std::vector<Point> net = transport(sample_net(n, options.sample_radius, options.net_size, 0.0));
    const std::vector<Point> net2 = transport(sample_net(n, options.sample_radius, options.net_size + 17, 0.5));

    ConvergenceReport rep;
    rep.sample_description = std::to_string(net.size()) + " Fibonacci points on shells {0.1, 0.3, 0.5} x " +
                             std::to_string(options.sample_radius) + (domain ? " (deformed ball)" : "");
    for (const auto& p : net) {
        ExtendedPoint y;
        try {
            y = f(ExtendedPoint(p));
        } catch (const Error& e) {
            throw PreconditionError(std::string("denjoy_wolff: map fails on the sample net: ") + e.what());
        }
        if (y.is_infinite() || to_ball(domain, y.point()).norm() > 1.0 + 1e-12)
            throw PreconditionError("denjoy_wolff: map does not preserve the closed unit ball on samples");
    }

    const auto limit = centroid_limit(f, net, options.max_iter);
    if (limit) {
        std::vector<ExtendedPoint> orbit(net.begin(), net.end());
        const ExtendedPoint x0(*limit);
        for (int m = 1; m <= options.max_iter; ++m) {
            double sup = 0.0;
            for (auto& z : orbit) {
                z = f(z);
                sup = std::max(sup, chordal_distance(z, x0));
            }
            rep.sup_trace.push_back(sup);
            if (sup < options.tol) {
                rep.verdict = DwVerdict::Converged;
                rep.limit = *limit;
                rep.iterations = m;
                break;
            }
        }
        if (rep.verdict == DwVerdict::Converged) {
            const auto other = centroid_limit(f, net2, options.max_iter);
            rep.uniqueness_gap = other ? chordal_distance(ExtendedPoint(*other), x0) : 2.0;
            rep.uniqueness_ok = rep.uniqueness_gap < options.tol;
            if (!rep.uniqueness_ok) rep.verdict = DwVerdict::Undecided;
            return rep;
        }
    }

    // Recurrence: every sample returns close to its start, and f preserves hyperbolic distances.
    double worst_return = 0.0;
    for (const auto& p : net) {
        ExtendedPoint z(p);
        double best = std::numeric_limits<double>::infinity();
        for (int m = 1; m <= options.recurrence_window; ++m) {
            z = f(z);
            if (z.is_infinite()) break;
            best = std::min(best, (z.point() - p).norm());
            if (best < options.tol / 10.0) break;
        }
        worst_return = std::max(worst_return, best);
    }
    rep.max_return_distance = worst_return;
    std::vector<Point> ball_pts;
    std::vector<Point> ball_imgs;
    for (const auto& p : net) {
        ball_pts.push_back(to_ball(domain, p));
        ball_imgs.push_back(to_ball(domain, f(ExtendedPoint(p)).point()));
    }
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < net.size(); ++i) {
        for (std::size_t j = i + 1; j < net.size(); ++j) {
            const double d0 = hyperbolic_distance(ball_pts[i], ball_pts[j]);
            const double d1 = hyperbolic_distance(ball_imgs[i], ball_imgs[j]);
            if (d0 > 0.0) worst_ratio = std::max(worst_ratio, std::abs(d1 / d0 - 1.0));
        }
    }
    rep.max_distance_distortion = worst_ratio;
    if (worst_return < options.tol / 10.0 && worst_ratio <= 0.1) rep.verdict = DwVerdict::AutomorphismLike;
    return rep;
}

SelfMap ball_self_map(const BallMobius& t) {
    return {"ball-mobius", t.dim(), [t](const ExtendedPoint& y) {
                if (y.is_infinite()) throw DomainError("ball automorphism: point at infinity");
                return ExtendedPoint(t(y.point()));
            }};
}

std::vector<double> default_distortion_radii() { return {1e-3, 1e-4, 1e-5, 1e-6, 1e-7}; }

namespace {

struct StretchProbe {
    const SelfMap& f;
    Point x;
    Point fx;
    double r;

    // |f(x + r v) - f(x)|, or a negative value when the image is infinite.
    double operator()(const Point& v) const {
        const ExtendedPoint y = f(ExtendedPoint(Point(x + r * v)));
        if (y.is_infinite()) return -1.0;
        return (y.point() - fx).norm();
    }
};

std::vector<Point> directions(Index dim) {
    std::vector<Point> out;
    if (dim == 2) {
        for (int i = 0; i < 64; ++i) {
            const double th = 2.0 * std::numbers::pi * i / 64.0;
            out.push_back(make_point({std::cos(th), std::sin(th)}));
        }
        return out;
    }
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < 512; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / 512.0;
        const double rr = std::sqrt(1.0 - z * z);
        out.push_back(make_point({rr * std::cos(golden * i), rr * std::sin(golden * i), z}));
    }
    return out;
}

// Pattern search on the unit sphere (circle for n = 2) for an extremum of the stretch.
double refine(const StretchProbe& probe, Point v, double value, double step, bool maximize) {
    const Index n = v.size();
    auto better = [&](double a, double b) { return maximize ? a > b : a < b; };
    while (step > 1e-7) {
        bool improved = false;
        Matrix basis(n, n - 1);
        if (n == 2) {
            basis << -v(1), v(0);
        } else {
            Point a = std::abs(v(0)) < 0.9 ? make_point({1.0, 0.0, 0.0}) : make_point({0.0, 1.0, 0.0});
            Point t1 = (a - a.dot(v) * v).normalized();
            Eigen::Vector3d c = Eigen::Vector3d(v(0), v(1), v(2)).cross(Eigen::Vector3d(t1(0), t1(1), t1(2)));
            basis.col(0) = t1;
            basis.col(1) = Point(c);
        }
        for (Index k = 0; k < n - 1 && !improved; ++k) {
            for (double sgn : {1.0, -1.0}) {
                const Point w = (v + sgn * step * basis.col(k)).normalized();
                const double val = probe(w);
                if (val >= 0.0 && better(val, value)) {
                    v = w;
                    value = val;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return value;
}

} // namespace

DistortionReport distortion_estimate(const SelfMap& f, const Point& x, const std::vector<double>& radii) {
    const Index n = f.dim;
    if (x.size() != n) throw ArgumentError("distortion_estimate: dimension mismatch");
    if (radii.empty()) throw ArgumentError("distortion_estimate: no radii");
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (!(radii[k] >= 1e-8)) throw ArgumentError("distortion_estimate: radii must be >= 1e-8");
        if (k > 0 && !(radii[k] < radii[k - 1])) throw ArgumentError("distortion_estimate: radii must decrease");
    }
    const ExtendedPoint fx = f(ExtendedPoint(x));
    if (fx.is_infinite()) throw DomainError("distortion_estimate: f(x) is infinite");
    const std::vector<Point> dirs = directions(n);
    const double spacing = n == 2 ? 2.0 * std::numbers::pi / 64.0 : std::sqrt(4.0 * std::numbers::pi / 512.0);

    DistortionReport rep;
    rep.x = x;
    rep.directions = static_cast<int>(dirs.size());
    for (double r0 : radii) {
        double r = r0;
        double ratio = -1.0;
        for (int attempt = 0; attempt < 6 && ratio < 0.0; ++attempt, r *= 0.1) {
            const StretchProbe probe{f, x, fx.point(), r};
            std::size_t imax = 0;
            std::size_t imin = 0;
            std::vector<double> vals(dirs.size());
            bool hit_infinity = false;
            for (std::size_t k = 0; k < dirs.size(); ++k) {
                vals[k] = probe(dirs[k]);
                if (vals[k] < 0.0) hit_infinity = true;
                if (vals[k] > vals[imax]) imax = k;
                if (vals[k] < vals[imin]) imin = k;
            }
            if (hit_infinity) {
                rep.note = "radius shrunk where f reached infinity";
                continue;
            }
            const double hi = refine(probe, dirs[imax], vals[imax], spacing, true);
            const double lo = refine(probe, dirs[imin], vals[imin], spacing, false);
            if (lo <= 0.0) throw DegenerateInputError("distortion_estimate: f collapses a direction at x");
            ratio = hi / lo;
        }
        if (ratio < 0.0) throw DomainError("distortion_estimate: f reaches infinity at every admissible radius");
        rep.radii.push_back(r0);
        rep.ratios.push_back(ratio);
    }
    rep.estimate = rep.ratios.back();
    for (std::size_t k = rep.ratios.size() - 1; k >= 1; --k) {
        if (std::abs(rep.ratios[k] - rep.ratios[k - 1]) <= 0.01 * rep.ratios[k - 1]) {
            rep.estimate = rep.ratios[k];
            return rep;
        }
    }
    if (rep.note.empty()) rep.note = "no two consecutive radii agree within 1%; smallest radius used";
    return rep;
}

std::vector<DistortionReport> distortion_series(const SelfMap& f, const Point& x, int m_max,
                                                const std::vector<double>& radii) {
    if (m_max < 1) throw ArgumentError("distortion_series: m_max must be >= 1");
    std::vector<DistortionReport> out;
    for (int m = 1; m <= m_max; ++m) {
        const SelfMap fm{f.name + "^" + std::to_string(m), f.dim,
                         [f, m](const ExtendedPoint& y) { return iterate(f, y, m); }};
        out.push_back(distortion_estimate(fm, x, radii));
    }
    return out;
}

} // namespace uqr
