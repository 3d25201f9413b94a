#include "uqr/automorphic.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace uqr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

void check_height(double t) {
    if (!(std::abs(t) <= kMaxHeight)) throw RangeError("beam height " + std::to_string(t) + " exceeds the exponential range");
}

// [0,1]^2 -> closed upper hemisphere; the square boundary goes to the equator.
Point hemisphere(double a, double b) {
    const double q0 = 2.0 * a - 1.0;
    const double q1 = 2.0 * b - 1.0;
    const double r = std::max(std::abs(q0), std::abs(q1));
    const double e = std::hypot(q0, q1);
    if (e == 0.0) return make_point({0.0, 0.0, 1.0});
    const double s = std::sin(0.5 * kPi * r) / e;
    return make_point({s * q0, s * q1, std::cos(0.5 * kPi * r)});
}

// Inverse of hemisphere() applied to (s0, s1, |s2|).
std::pair<double, double> hemisphere_inverse(double s0, double s1, double s2) {
    const double rho = std::hypot(s0, s1);
    if (rho == 0.0) return {0.5, 0.5};
    const double r = (2.0 / kPi) * std::atan2(rho, std::abs(s2));
    const double d0 = s0 / rho;
    const double d1 = s1 / rho;
    const double scale = r / std::max(std::abs(d0), std::abs(d1));
    const double a = std::clamp(0.5 * (scale * d0 + 1.0), 0.0, 1.0);
    const double b = std::clamp(0.5 * (scale * d1 + 1.0), 0.0, 1.0);
    return {a, b};
}

// Cell profile of the sine-type map: (a, b) scale the (u12, u3) parts at height s >= 0.
std::pair<double, double> cell_profile(double s) {
    if (s >= 1.0) {
        const double g = std::exp(s);
        return {g, g};
    }
    return {1.0 + (kE - 1.0) * s, kE * s};
}

// Height s in [0,1] of the cell ellipsoid |p|^2 / a^2 + z^2 / b^2 = 1 through (p, z),
// as the root of P b^2 + Z a^2 - a^2 b^2 on [0, 1]. Requires P + Z < e^2.
double cell_height(double pp, double zz) {
    const double c = kE - 1.0;
    auto value = [&](double s, double& deriv) {
        const double a = 1.0 + c * s;
        const double b = kE * s;
        deriv = 2.0 * pp * b * kE + 2.0 * zz * a * c - 2.0 * a * c * b * b - 2.0 * a * a * b * kE;
        return pp * b * b + zz * a * a - a * a * b * b;
    };
    double lo = 0.0;
    double hi = 1.0;
    double s = std::clamp((std::sqrt(pp + zz) - 1.0) / c, 0.0, 1.0);
    if (s == 0.0) s = 0.5 * std::sqrt(zz) / kE;
    for (int iter = 0; iter < 80; ++iter) {
        double deriv = 0.0;
        const double g = value(s, deriv);
        if (g > 0.0)
            lo = s;
        else if (g < 0.0)
            hi = s;
        else
            return s;
        double next = (deriv != 0.0) ? s - g / deriv : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - s) <= 1e-16 * std::max(1.0, s) || hi - lo <= 1e-300) return next;
        s = next;
    }
    return s;
}

} // namespace

BaseEmbedding::BaseEmbedding(CrystGroup group) : group_(std::move(group)) {
    const std::string& name = group_.name();
    if (name != "zorich2" && name != "sine2" && name != "p2" && name != "p2-sine")
        throw ArgumentError("no base embedding available for group " + name);
}

Point BaseEmbedding::embed(const Point& transverse) const {
    if (transverse.size() != group_.transverse_dim()) throw ArgumentError("base_embed: dimension mismatch");
    if (group_.transverse_dim() == 1) return make_point({std::cos(transverse(0)), std::sin(transverse(0))});
    const Point x = reduce_point(group_, transverse);
    if (x(0) >= 0.0) return hemisphere(x(0), x(1));
    Point s = hemisphere(-x(0), x(1));
    s(2) = -s(2);
    return s;
}

Point BaseEmbedding::invert(const Point& sigma) const {
    if (sigma.size() != group_.dim()) throw ArgumentError("base_invert: dimension mismatch");
    if (!(std::abs(sigma.norm() - 1.0) <= 1e-9)) throw ArgumentError("base_invert: point is not on the unit sphere");
    if (group_.transverse_dim() == 1) {
        double x1 = std::atan2(sigma(1), sigma(0));
        if (x1 < 0.0) x1 += 2.0 * kPi;
        return reduce_point(group_, make_point({x1 == 0.0 ? 0.0 : x1}));
    }
    auto [a, b] = hemisphere_inverse(sigma(0), sigma(1), sigma(2));
    if (sigma(2) < 0.0) a = -a;
    return reduce_point(group_, make_point({a == 0.0 ? 0.0 : a, b}));
}

std::string to_string(AutomorphicKind kind) {
    switch (kind) {
    case AutomorphicKind::Zorich: return "zorich";
    case AutomorphicKind::Sine: return "sine";
    case AutomorphicKind::Exp2: return "exp2";
    case AutomorphicKind::Cos2: return "cos2";
    }
    return "unknown";
}

std::string to_string(SineVariant variant) {
    return variant == SineVariant::Cell ? "cell" : "averaged";
}

SineVariant sine_variant_from_string(const std::string& name) {
    if (name == "cell") return SineVariant::Cell;
    if (name == "averaged") return SineVariant::Averaged;
    throw ArgumentError("unknown sine variant '" + name + "'");
}

AutomorphicMap::AutomorphicMap(AutomorphicKind kind, SineVariant variant, BaseEmbedding base)
    : kind_(kind), variant_(variant), base_(std::move(base)) {}

AutomorphicMap AutomorphicMap::zorich(const CrystGroup& group) {
    if (group.has_beam_rotation())
        throw ArgumentError("Zorich-type map needs a group without beam rotation, got " + group.name());
    const auto kind = group.dim() == 2 ? AutomorphicKind::Exp2 : AutomorphicKind::Zorich;
    return AutomorphicMap(kind, SineVariant::Cell, BaseEmbedding(group));
}

AutomorphicMap AutomorphicMap::sine(const CrystGroup& group, SineVariant variant) {
    if (!group.has_beam_rotation())
        throw ArgumentError("sine-type map needs a group with beam rotation, got " + group.name());
    const auto kind = group.dim() == 2 ? AutomorphicKind::Cos2 : AutomorphicKind::Sine;
    return AutomorphicMap(kind, variant, BaseEmbedding(group));
}

Point AutomorphicMap::eval(const Point& x) const {
    const Index n = dim();
    if (x.size() != n) throw ArgumentError("automorphic map: dimension mismatch");
    if (!x.allFinite()) throw ArgumentError("automorphic map: non-finite input");
    check_height(x(n - 1));
    if (zorich_type()) return std::exp(x(n - 1)) * base_.embed(x.head(n - 1));
    return eval_sine(x);
}

Point AutomorphicMap::eval_sine(const Point& x) const {
    const double t = x(dim() - 1);
    if (kind_ == AutomorphicKind::Cos2)
        return make_point({std::cos(x(0)) * std::cosh(t), std::sin(x(0)) * std::sinh(t)});
    const Point u = base_.embed(x.head(2));
    double a = 0.0;
    double b = 0.0;
    if (variant_ == SineVariant::Averaged) {
        a = std::cosh(t);
        b = std::sinh(t);
    } else {
        std::tie(a, b) = cell_profile(std::abs(t));
        if (t < 0.0) b = -b;
    }
    return make_point({a * u(0), a * u(1), b * u(2)});
}

BeamPoint AutomorphicMap::invert(const ExtendedPoint& y) const {
    if (y.is_infinite()) throw OmittedValueError("infinity is an omitted value of the " + to_string(kind_) + " map");
    return invert(y.point());
}

BeamPoint AutomorphicMap::invert(const Point& y) const {
    if (y.size() != dim()) throw ArgumentError("automorphic inverse: dimension mismatch");
    if (!y.allFinite()) throw OmittedValueError("infinity is an omitted value of the " + to_string(kind_) + " map");
    return zorich_type() ? invert_zorich(y) : invert_sine(y);
}

BeamPoint AutomorphicMap::invert_zorich(const Point& y) const {
    const double r = y.stableNorm();
    if (r == 0.0) throw OmittedValueError("0 is an omitted value of the " + to_string(kind_) + " map");
    // |y| within rounding of 1 keeps the unit sphere invariant under iteration.
    const double t = std::log(r);
    return {base_.invert(y / r), std::abs(t) <= 4.0 * std::numeric_limits<double>::epsilon() ? 0.0 : t};
}

BeamPoint AutomorphicMap::canonical(const Point& x) const {
    const Point c = reduce_beam_point(group(), x);
    return {c.head(dim() - 1), c(dim() - 1)};
}

BeamPoint AutomorphicMap::invert_sine(const Point& y) const {
    if (kind_ == AutomorphicKind::Cos2) {
        std::complex<double> z = std::acos(std::complex<double>(y(0), y(1)));
        if (-z.imag() < 0.0) z = -z;
        return canonical(make_point({z.real(), -z.imag() == 0.0 ? 0.0 : -z.imag()}));
    }
    const Point p = y.head(2);
    const double z = y(2);
    const double rho = p.stableNorm();
    if (variant_ == SineVariant::Averaged) {
        std::complex<double> w = std::acos(std::complex<double>(rho, z));
        if (-w.imag() < 0.0) w = -w;
        const double t = -w.imag();
        const double phi = 0.5 * kPi - w.real();
        const Point dir = rho > 0.0 ? Point(p / rho) : make_point({1.0, 0.0});
        const Point u = make_point({std::sin(phi) * dir(0), std::sin(phi) * dir(1), std::cos(phi)});
        return canonical(BeamPoint{base_.invert(u.normalized()), t == 0.0 ? 0.0 : t}.ambient());
    }
    const double r = y.stableNorm();
    if (r >= kE) return canonical(BeamPoint{base_.invert(y / r), std::log(r)}.ambient());
    Point u(3);
    double t = 0.0;
    if (z == 0.0) {
        if (rho <= 1.0) {
            u << p(0), p(1), std::sqrt(std::max(0.0, 1.0 - rho * rho));
        } else {
            t = (rho - 1.0) / (kE - 1.0);
            u << p(0) / rho, p(1) / rho, 0.0;
        }
    } else {
        t = cell_height(rho * rho, z * z);
        const auto [a, b] = cell_profile(t);
        u << p(0) / a, p(1) / a, z / b;
    }
    return canonical(BeamPoint{base_.invert(u.normalized()), t}.ambient());
}

std::vector<ExtendedPoint> AutomorphicMap::omitted_values() const {
    std::vector<ExtendedPoint> out;
    if (zorich_type()) out.emplace_back(Point(Point::Zero(dim())));
    out.push_back(ExtendedPoint::infinity(dim()));
    return out;
}

Point base_embed(const BaseEmbedding& u, const Point& transverse) { return u.embed(transverse); }

Point base_invert(const BaseEmbedding& u, const Point& sigma) { return u.invert(sigma); }

Point zorich_eval(const AutomorphicMap& h, const Point& x) {
    if (!h.zorich_type()) throw ArgumentError("zorich_eval: map is not of Zorich type");
    return h.eval(x);
}

BeamPoint zorich_invert(const AutomorphicMap& h, const ExtendedPoint& y) {
    if (!h.zorich_type()) throw ArgumentError("zorich_invert: map is not of Zorich type");
    return h.invert(y);
}

Point sine_eval(const AutomorphicMap& h, const Point& x) {
    if (h.zorich_type()) throw ArgumentError("sine_eval: map is not of sine type");
    return h.eval(x);
}

BeamPoint sine_invert(const AutomorphicMap& h, const ExtendedPoint& y) {
    if (h.zorich_type()) throw ArgumentError("sine_invert: map is not of sine type");
    return h.invert(y);
}

std::vector<ExtendedPoint> omitted_values(const AutomorphicMap& h) { return h.omitted_values(); }

} // namespace uqr
