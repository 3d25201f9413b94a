#include "uqr/schroeder.hpp"

#include <cmath>
#include <numbers>

namespace uqr {

namespace {

bool is_zero(const ExtendedPoint& y) {
    return y.is_finite() && y.point().isZero(0.0);
}

ExtendedPoint zero(Index dim) { return ExtendedPoint(Point(Point::Zero(dim))); }

void require_dim(const ExtendedPoint& y, Index dim, const char* what) {
    if (y.dim() != dim) throw ArgumentError(std::string(what) + ": dimension mismatch");
}

void dedupe_or_throw(const std::vector<ExtendedPoint>& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (chordal_distance(pts[i], pts[j]) <= 1e-6)
                throw DegenerateInputError("preimages collapse within 1e-6: target is close to a critical value");
}

void verify_or_throw(const std::vector<ExtendedPoint>& pts, const ExtendedPoint& y,
                     const std::function<ExtendedPoint(const ExtendedPoint&)>& f) {
    for (const auto& w : pts)
        if (chordal_distance(f(w), y) >= 1e-8)
            throw DegenerateInputError("preimage fails forward verification: target is close to a critical value");
}

} // namespace

ExtendedPoint iterate(const SelfMap& f, const ExtendedPoint& y, int m) {
    ExtendedPoint z = y;
    for (int i = 0; i < m; ++i) z = f(z);
    return z;
}

std::string to_string(SchroederKind kind) {
    return kind == SchroederKind::PowerType ? "power-type" : "chebyshev-type";
}

SchroederMap::SchroederMap(AutomorphicMap carrier, ConformalAutomorphism a)
    : carrier_(std::move(carrier)), a_(std::move(a)), certificate_(check_admissible(carrier_.group(), a_)) {
    if (!certificate_.admissible)
        throw PreconditionError("conformal automorphism is not admissible for group " + carrier_.group().name() +
                                ": " + certificate_.reason);
}

SchroederKind SchroederMap::kind() const {
    return carrier_.zorich_type() ? SchroederKind::PowerType : SchroederKind::ChebyshevType;
}

int SchroederMap::integer_degree() const {
    const Index n = dim();
    if ((a_.orthogonal - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-12) return 0;
    const double r = std::round(a_.scale);
    return std::abs(a_.scale - r) <= 1e-12 ? static_cast<int>(r) : 0;
}

ExtendedPoint SchroederMap::operator()(const ExtendedPoint& y) const {
    const Index n = dim();
    require_dim(y, n, "Schroeder map");
    if (y.is_infinite()) return y;
    if (carrier_.zorich_type() && is_zero(y)) return y;
    const Point x = a_(carrier_.invert(y.point()).ambient());
    const double t = x(n - 1);
    if (t > kMaxHeight) return ExtendedPoint::infinity(n);
    if (t < -kMaxHeight) return carrier_.zorich_type() ? zero(n) : ExtendedPoint::infinity(n);
    return carrier_.eval(x);
}

SelfMap SchroederMap::as_self_map() const {
    SchroederMap copy = *this;
    const std::string name = to_string(kind()) + " d=" + std::to_string(integer_degree());
    return {name, dim(), [copy](const ExtendedPoint& y) { return copy(y); }};
}

SchroederMap power_map(const CrystGroup& group, int d) {
    if (d < 2) throw ArgumentError("power map: degree must be >= 2");
    return SchroederMap(AutomorphicMap::zorich(group), ConformalAutomorphism::dilation(d, group.dim()));
}

SchroederMap cheb_map(const CrystGroup& group, int d, SineVariant variant) {
    if (d < 2) throw ArgumentError("Chebyshev map: degree must be >= 2");
    return SchroederMap(AutomorphicMap::sine(group, variant), ConformalAutomorphism::dilation(d, group.dim()));
}

ExtendedPoint power_eval(const SchroederMap& f, const ExtendedPoint& y) {
    if (f.kind() != SchroederKind::PowerType) throw ArgumentError("power_eval: map is not of power type");
    return f(y);
}

ExtendedPoint cheb_eval(const SchroederMap& f, const ExtendedPoint& y) {
    if (f.kind() != SchroederKind::ChebyshevType) throw ArgumentError("cheb_eval: map is not of Chebyshev type");
    return f(y);
}

GroupPair default_group_pair(Index dim) {
    if (dim == 2) return {CrystGroup::zorich2(), CrystGroup::sine2()};
    if (dim == 3) return {CrystGroup::p2(), CrystGroup::p2_sine()};
    throw ArgumentError("no default groups in dimension " + std::to_string(dim));
}

Joukowsky::Joukowsky(Index dim, int d, SineVariant variant) : Joukowsky(default_group_pair(dim), d, variant) {}

Joukowsky::Joukowsky(const GroupPair& groups, int d, SineVariant variant)
    : zorich_(AutomorphicMap::zorich(groups.zorich)), sine_(AutomorphicMap::sine(groups.sine, variant)), d_(d) {
    if (d < 1) throw ArgumentError("h_d: d must be >= 1");
    const CrystGroup& g = groups.zorich;
    const CrystGroup& s = groups.sine;
    bool same = g.dim() == s.dim() && (g.lattice() - s.lattice()).cwiseAbs().maxCoeff() == 0.0 &&
                g.point_reps().size() == s.point_reps().size();
    if (same) {
        for (std::size_t i = 0; i < g.point_reps().size(); ++i)
            same = same && isometry_distance(g.point_reps()[i], s.point_reps()[i]) == 0.0;
    }
    if (!same) throw ArgumentError("h_d: groups " + g.name() + " and " + s.name() + " do not share the planar group");
}

ExtendedPoint Joukowsky::operator()(const ExtendedPoint& y) const {
    const Index n = dim();
    require_dim(y, n, "h_d");
    if (y.is_infinite() || is_zero(y)) return ExtendedPoint::infinity(n);
    const Point x = static_cast<double>(d_) * zorich_.invert(y.point()).ambient();
    if (std::abs(x(n - 1)) > kMaxHeight) return ExtendedPoint::infinity(n);
    return sine_.eval(x);
}

ExtendedPoint Joukowsky::involution(const ExtendedPoint& y) const {
    const Index n = dim();
    require_dim(y, n, "involution");
    if (y.is_infinite()) return zero(n);
    if (is_zero(y)) return ExtendedPoint::infinity(n);
    const Point x = sine_.group().beam_rotation()(zorich_.invert(y.point()).ambient());
    if (x(n - 1) > kMaxHeight) return ExtendedPoint::infinity(n);
    if (x(n - 1) < -kMaxHeight) return zero(n);
    return zorich_.eval(x);
}

SelfMap Joukowsky::as_self_map() const {
    Joukowsky copy = *this;
    return {"h_" + std::to_string(d_), dim(), [copy](const ExtendedPoint& y) { return copy(y); }};
}

SelfMap Joukowsky::involution_map() const {
    Joukowsky copy = *this;
    return {"involution", dim(), [copy](const ExtendedPoint& y) { return copy.involution(y); }};
}

ExtendedPoint joukowsky_eval(const Joukowsky& h1, const ExtendedPoint& y) {
    if (h1.degree_parameter() != 1) throw ArgumentError("joukowsky_eval: expected d = 1");
    return h1(y);
}

ExtendedPoint involution_eval(const Joukowsky& h1, const ExtendedPoint& y) { return h1.involution(y); }

ExtendedPoint h_d_eval(Index dim, int d, const ExtendedPoint& y) { return Joukowsky(dim, d)(y); }

std::vector<ExtendedPoint> preimages(const SchroederMap& f, const ExtendedPoint& y) {
    const Index n = f.dim();
    require_dim(y, n, "preimages");
    const int d = f.integer_degree();
    if (d < 1) throw ArgumentError("preimages: only A = d * identity with integer d is supported");
    if (y.is_infinite() || (f.kind() == SchroederKind::PowerType && is_zero(y))) return {y};
    const AutomorphicMap& h = f.carrier();
    const Point x0 = h.invert(y.point()).ambient();
    std::vector<ExtendedPoint> out;
    for (const auto& g : dilation_coset_reps(h.group(), d, false))
        out.emplace_back(h.eval(f.automorphism().inverse(g(x0))));
    dedupe_or_throw(out);
    verify_or_throw(out, y, [&](const ExtendedPoint& w) { return f(w); });
    return out;
}

std::vector<ExtendedPoint> preimages(const Joukowsky& hd, const ExtendedPoint& y) {
    const Index n = hd.dim();
    require_dim(y, n, "preimages");
    if (y.is_infinite()) return {zero(n), ExtendedPoint::infinity(n)};
    const Point x0 = hd.sine().invert(y.point()).ambient();
    const double d = hd.degree_parameter();
    std::vector<ExtendedPoint> out;
    for (const auto& g : dilation_coset_reps(hd.sine().group(), hd.degree_parameter(), true))
        out.emplace_back(hd.zorich().eval(g(x0) / d));
    dedupe_or_throw(out);
    verify_or_throw(out, y, [&](const ExtendedPoint& w) { return hd(w); });
    return out;
}

LiftedMap::LiftedMap(SchroederMap f) : f_(std::move(f)), h1_(f_.dim(), 1, f_.carrier().variant()) {
    if (f_.kind() != SchroederKind::ChebyshevType) throw ArgumentError("lift_through_h1: expected a Chebyshev-type map");
    if (f_.carrier().group().name() != h1_.sine().group().name())
        throw ArgumentError("lift_through_h1: map is not built over the default sine group");
}

ExtendedPoint LiftedMap::branch(const ExtendedPoint& y, bool inside) const {
    const Index n = dim();
    const ExtendedPoint w = f_(h1_(y));
    if (w.is_infinite()) return inside ? zero(n) : ExtendedPoint::infinity(n);
    const BeamPoint b = h1_.sine().invert(w);
    if (b.height > kMaxHeight) return inside ? zero(n) : ExtendedPoint::infinity(n);
    const ExtendedPoint outside = h1_.zorich().eval(b.ambient());
    return inside ? h1_.involution(outside) : outside;
}

LiftValue LiftedMap::evaluate(const ExtendedPoint& y) const {
    const Index n = dim();
    require_dim(y, n, "lifted map");
    if (y.is_infinite() || is_zero(y)) return {y, false, 0.0};
    const double r = y.point().stableNorm();
    if (r != 1.0) return {branch(y, r < 1.0), false, 0.0};
    // One-sided limits by linear extrapolation from two radii.
    const double e1 = 1e-7;
    const double e2 = 1e-9;
    auto limit = [&](double sign) {
        const Point p1 = branch(ExtendedPoint(Point(y.point() * (1.0 + sign * e1))), sign < 0).point();
        const Point p2 = branch(ExtendedPoint(Point(y.point() * (1.0 + sign * e2))), sign < 0).point();
        return Point(p2 + (p2 - p1) * (e2 / (e1 - e2)));
    };
    const Point in = limit(-1.0);
    const Point out = limit(1.0);
    return {ExtendedPoint(in), true, (in - out).norm()};
}

SelfMap LiftedMap::as_self_map() const {
    LiftedMap copy = *this;
    return {"lifted", dim(), [copy](const ExtendedPoint& y) { return copy(y); }};
}

LiftedMap lift_through_h1(const SchroederMap& f) { return LiftedMap(f); }

Linearizer::Linearizer(AutomorphicMap carrier, Point base_point, Isometry witness, Matrix multiplier)
    : carrier_(std::move(carrier)), base_point_(std::move(base_point)), witness_(std::move(witness)),
      multiplier_(std::move(multiplier)) {}

ExtendedPoint Linearizer::operator()(const Point& v) const {
    if (v.size() != base_point_.size()) throw ArgumentError("linearizer: dimension mismatch");
    return carrier_.eval(base_point_ + v);
}

Linearizer linearize(const SchroederMap& f, const Point& transverse_point) {
    const CrystGroup& group = f.carrier().group();
    const Index n = group.dim();
    if (transverse_point.size() != n - 1) throw ArgumentError("linearize: expected a point of R^" + std::to_string(n - 1));
    Point x = Point::Zero(n);
    x.head(n - 1) = transverse_point;
    if (stabilizer(group, x, 1e-12).size() > 1)
        throw BranchPointError("linearize: base point has a nontrivial stabilizer; the linearizer is not strongly "
                               "automorphic there");
    const Point ax = f.automorphism()(x);
    for (const auto& c : group.coset_reps()) {
        const auto k = lattice_coordinates(group, Point(ax - c(x)), 1e-9);
        if (!k) continue;
        Point t = c.translation();
        t.head(n - 1) += group.lattice() * (*k);
        const Isometry g(c.rotation(), t);
        const Matrix phi = g.rotation().transpose() * f.automorphism().matrix();
        return Linearizer(f.carrier(), x, g, phi);
    }
    throw NotFixedPointError("linearize: A x* is not in the orbit of x*");
}

ExtendedPoint linearizer_eval(const Linearizer& l, const Point& v) { return l(v); }

Point default_linearization_point(const CrystGroup& group, int d) {
    if (d < 2) throw ArgumentError("default_linearization_point: d must be >= 2");
    // c = period / (d + 1) gives d c = period - c, the image of c under a half-turn or
    // reflection; c is off every mirror and rotation centre since 0 < c < period / 2.
    const double c = 1.0 / (d + 1.0);
    const std::string& name = group.name();
    if (name == "zorich2") return make_point({0.0});
    if (name == "sine2") return make_point({2.0 * std::numbers::pi * c});
    if (name == "p2") return make_point({2.0 * c, 0.0});
    if (name == "p2-sine") return make_point({2.0 * c, 2.0 * c});
    throw ArgumentError("no default linearization point for group " + name);
}

std::string to_string(DeformationKind kind) {
    switch (kind) {
    case DeformationKind::Identity: return "identity";
    case DeformationKind::Shear: return "shear";
    case DeformationKind::Twist: return "twist";
    case DeformationKind::RadialPower: return "radial-power";
    }
    return "unknown";
}

DeformationKind deformation_from_string(const std::string& name) {
    if (name == "identity" || name == "none") return DeformationKind::Identity;
    if (name == "shear") return DeformationKind::Shear;
    if (name == "twist") return DeformationKind::Twist;
    if (name == "radial-power") return DeformationKind::RadialPower;
    throw ArgumentError("unknown deformation '" + name + "'");
}

QcDeformation::QcDeformation(DeformationKind kind, double param, Index dim) : kind_(kind), param_(param), dim_(dim) {
    require_dimension(dim, 2, 3, "QcDeformation");
    if (!std::isfinite(param)) throw ArgumentError("QcDeformation: non-finite parameter");
    if (kind == DeformationKind::RadialPower && !(param > 0.0))
        throw ArgumentError("QcDeformation: radial power exponent must be positive");
}

QcDeformation QcDeformation::identity(Index dim) { return {DeformationKind::Identity, 0.0, dim}; }
QcDeformation QcDeformation::shear(double beta, Index dim) { return {DeformationKind::Shear, beta, dim}; }
QcDeformation QcDeformation::twist(double theta_max, Index dim) { return {DeformationKind::Twist, theta_max, dim}; }
QcDeformation QcDeformation::radial_power(double alpha, Index dim) { return {DeformationKind::RadialPower, alpha, dim}; }

namespace {

Point rotate12(const Point& x, double angle) {
    Point y = x;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    y(0) = c * x(0) - s * x(1);
    y(1) = s * x(0) + c * x(1);
    return y;
}

double twist_angle(double theta_max, double r) { return theta_max * std::clamp(2.0 - r, 0.0, 1.0); }

} // namespace

Point QcDeformation::apply(const Point& x) const {
    if (x.size() != dim_) throw ArgumentError("QcDeformation: dimension mismatch");
    switch (kind_) {
    case DeformationKind::Identity: return x;
    case DeformationKind::Shear: {
        Point y = x;
        y(0) += param_ * x(dim_ - 1);
        return y;
    }
    case DeformationKind::Twist: return rotate12(x, twist_angle(param_, x.stableNorm()));
    case DeformationKind::RadialPower: {
        const double r = x.stableNorm();
        return r == 0.0 ? x : Point(std::pow(r, param_ - 1.0) * x);
    }
    }
    return x;
}

Point QcDeformation::inverse(const Point& y) const {
    if (y.size() != dim_) throw ArgumentError("QcDeformation: dimension mismatch");
    switch (kind_) {
    case DeformationKind::Identity: return y;
    case DeformationKind::Shear: {
        Point x = y;
        x(0) -= param_ * y(dim_ - 1);
        return x;
    }
    case DeformationKind::Twist: return rotate12(y, -twist_angle(param_, y.stableNorm()));
    case DeformationKind::RadialPower: {
        const double r = y.stableNorm();
        return r == 0.0 ? y : Point(std::pow(r, 1.0 / param_ - 1.0) * y);
    }
    }
    return y;
}

ExtendedPoint QcDeformation::apply(const ExtendedPoint& x) const {
    return x.is_infinite() ? x : ExtendedPoint(apply(x.point()));
}

ExtendedPoint QcDeformation::inverse(const ExtendedPoint& y) const {
    return y.is_infinite() ? y : ExtendedPoint(inverse(y.point()));
}

Matrix QcDeformation::linear_part() const {
    Matrix m = Matrix::Identity(dim_, dim_);
    if (kind_ == DeformationKind::Shear) m(0, dim_ - 1) = param_;
    else if (kind_ != DeformationKind::Identity) throw ArgumentError("QcDeformation: " + to_string(kind_) + " is not linear");
    return m;
}

SelfMap conjugate(const SelfMap& f, const QcDeformation& g) {
    if (f.dim != g.dim()) throw ArgumentError("conjugate: dimension mismatch");
    return {f.name + " conjugated by " + to_string(g.kind()), f.dim,
            [f, g](const ExtendedPoint& y) { return g.apply(f(g.inverse(y))); }};
}

} // namespace uqr
