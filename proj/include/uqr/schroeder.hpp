#pragma once

#include <functional>
#include <string>
#include <vector>

#include "uqr/automorphic.hpp"

namespace uqr {

/// A self-map of the extended space R^n together with infinity.
struct SelfMap {
    std::string name;
    Index dim = 0;
    std::function<ExtendedPoint(const ExtendedPoint&)> eval;

    ExtendedPoint operator()(const ExtendedPoint& y) const { return eval(y); }
};

/// m-fold iterate f^m(y).
ExtendedPoint iterate(const SelfMap& f, const ExtendedPoint& y, int m);

enum class SchroederKind { PowerType, ChebyshevType };

std::string to_string(SchroederKind kind);

/// The solution f of f o h = h o A, evaluated as h(A(h^{-1}(y))) through the canonical
/// inverse branch. Omitted values of h are fixed by f.
class SchroederMap {
public:
    /// Throws PreconditionError when A is not admissible for the group of h.
    SchroederMap(AutomorphicMap carrier, ConformalAutomorphism a);

    SchroederKind kind() const;
    const AutomorphicMap& carrier() const { return carrier_; }
    const ConformalAutomorphism& automorphism() const { return a_; }
    const AdmissibilityCertificate& certificate() const { return certificate_; }
    Index dim() const { return carrier_.dim(); }
    /// d when A = d * identity with integer d, else 0.
    int integer_degree() const;

    ExtendedPoint operator()(const ExtendedPoint& y) const;
    SelfMap as_self_map() const;

private:
    AutomorphicMap carrier_;
    ConformalAutomorphism a_;
    AdmissibilityCertificate certificate_;
};

/// Power-type map h o (d x) o h^{-1} over a Zorich-type carrier.
SchroederMap power_map(const CrystGroup& group, int d);
/// Chebyshev-type map over a sine-type carrier.
SchroederMap cheb_map(const CrystGroup& group, int d, SineVariant variant = SineVariant::Cell);
ExtendedPoint power_eval(const SchroederMap& f, const ExtendedPoint& y);
ExtendedPoint cheb_eval(const SchroederMap& f, const ExtendedPoint& y);

/// Zorich group (no beam rotation) and sine group (with it) over the same planar group.
struct GroupPair {
    CrystGroup zorich;
    CrystGroup sine;
};

/// zorich2/sine2 for n = 2, p2/p2-sine for n = 3.
GroupPair default_group_pair(Index dim);

/// h_d = S o (d x) o Z^{-1}; h_1 is the Joukowsky analogue. Also carries the involution
/// I = Z o R o Z^{-1}, which fixes h_1.
class Joukowsky {
public:
    explicit Joukowsky(Index dim, int d = 1, SineVariant variant = SineVariant::Cell);
    Joukowsky(const GroupPair& groups, int d, SineVariant variant = SineVariant::Cell);

    Index dim() const { return zorich_.dim(); }
    int degree_parameter() const { return d_; }
    const AutomorphicMap& zorich() const { return zorich_; }
    const AutomorphicMap& sine() const { return sine_; }

    ExtendedPoint operator()(const ExtendedPoint& y) const;
    ExtendedPoint involution(const ExtendedPoint& y) const;
    SelfMap as_self_map() const;
    SelfMap involution_map() const;

private:
    AutomorphicMap zorich_;
    AutomorphicMap sine_;
    int d_;
};

ExtendedPoint joukowsky_eval(const Joukowsky& h1, const ExtendedPoint& y);
ExtendedPoint involution_eval(const Joukowsky& h1, const ExtendedPoint& y);
ExtendedPoint h_d_eval(Index dim, int d, const ExtendedPoint& y);

/// All w with f(w) = y, computed from the fiber of h: w = h(A^{-1} g x0) over coset
/// representatives g. Throws DegenerateInputError when two candidates collapse.
std::vector<ExtendedPoint> preimages(const SchroederMap& f, const ExtendedPoint& y);
std::vector<ExtendedPoint> preimages(const Joukowsky& hd, const ExtendedPoint& y);

struct LiftValue {
    ExtendedPoint value;
    bool on_sphere = false;
    /// Distance between the one-sided limits at the unit sphere (0 off the sphere).
    double ambiguity = 0.0;
};

/// P with f o h_1 = h_1 o P for a Chebyshev-type f: the inverse branch of h_1 lands
/// inside the unit ball for |y| < 1 and outside for |y| > 1. On the sphere P is the
/// limit from inside, extrapolated from two interior radii.
class LiftedMap {
public:
    explicit LiftedMap(SchroederMap f);

    const SchroederMap& base() const { return f_; }
    const Joukowsky& joukowsky() const { return h1_; }
    Index dim() const { return f_.dim(); }

    LiftValue evaluate(const ExtendedPoint& y) const;
    ExtendedPoint operator()(const ExtendedPoint& y) const { return evaluate(y).value; }
    SelfMap as_self_map() const;

    /// Tolerance on the boundary ambiguity above which evaluate() flags the result.
    static constexpr double kAmbiguityTolerance = 1e-5;

private:
    ExtendedPoint branch(const ExtendedPoint& y, bool inside) const;

    SchroederMap f_;
    Joukowsky h1_;
};

LiftedMap lift_through_h1(const SchroederMap& f);

/// L(v) = h(x* + v) with f o L = L o phi, phi = rho_g^{-1} A for the element g with A x* = g(x*).
class Linearizer {
public:
    Linearizer(AutomorphicMap carrier, Point base_point, Isometry witness, Matrix multiplier);

    const Point& base_point() const { return base_point_; }
    const Isometry& witness() const { return witness_; }
    const Matrix& multiplier() const { return multiplier_; }
    const AutomorphicMap& carrier() const { return carrier_; }

    ExtendedPoint operator()(const Point& v) const;
    Point apply_multiplier(const Point& v) const { return multiplier_ * v; }

private:
    AutomorphicMap carrier_;
    Point base_point_;
    Isometry witness_;
    Matrix multiplier_;
};

/// x* is the ambient point (x*, 0) given by its transverse part. Throws BranchPointError
/// for a nontrivial stabilizer and NotFixedPointError when A x* is not in G x*.
Linearizer linearize(const SchroederMap& f, const Point& transverse_point);
ExtendedPoint linearizer_eval(const Linearizer& l, const Point& v);

/// Transverse point with trivial stabilizer fixed by A = d * identity modulo G.
Point default_linearization_point(const CrystGroup& group, int d = 2);

enum class DeformationKind { Identity, Shear, Twist, RadialPower };

std::string to_string(DeformationKind kind);
DeformationKind deformation_from_string(const std::string& name);

/// Closed-form quasiconformal self-homeomorphism of R^n fixing infinity.
/// Shear: x1 += beta * x_n. Twist: rotate (x1, x2) by theta_max * clamp(2 - |x|, 0, 1).
/// RadialPower: |x|^(alpha - 1) x.
class QcDeformation {
public:
    static QcDeformation identity(Index dim);
    static QcDeformation shear(double beta, Index dim);
    static QcDeformation twist(double theta_max, Index dim);
    static QcDeformation radial_power(double alpha, Index dim);

    DeformationKind kind() const { return kind_; }
    double parameter() const { return param_; }
    Index dim() const { return dim_; }

    Point apply(const Point& x) const;
    Point inverse(const Point& y) const;
    ExtendedPoint apply(const ExtendedPoint& x) const;
    ExtendedPoint inverse(const ExtendedPoint& y) const;
    /// Linear part for the affine kinds (Identity, Shear).
    Matrix linear_part() const;

private:
    QcDeformation(DeformationKind kind, double param, Index dim);

    DeformationKind kind_;
    double param_;
    Index dim_;
};

/// f_g = g o f o g^{-1}.
SelfMap conjugate(const SelfMap& f, const QcDeformation& g);

} // namespace uqr
