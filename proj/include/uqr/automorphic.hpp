#pragma once

#include <string>
#include <vector>

#include "uqr/crystal.hpp"

namespace uqr {

/// Beam heights beyond this magnitude raise RangeError.
inline constexpr double kMaxHeight = 700.0;

/// Point of the fundamental beam: canonical transverse part and beam coordinate x_n.
struct BeamPoint {
    Point transverse;
    double height = 0.0;

    Point ambient() const {
        Point x(transverse.size() + 1);
        x.head(transverse.size()) = transverse;
        x(transverse.size()) = height;
        return x;
    }
};

/// G-invariant map u: R^{n-1} -> S^{n-1} descending to a homeomorphism of the orbifold.
/// n = 2: u(x1) = (cos x1, sin x1). n = 3 (p2): the box half [0,1]^2 goes to the upper
/// hemisphere by square -> disk -> sphere stages, the half [-1,0] x [0,1] to the lower
/// hemisphere by u(-x1, x2) = (u1, u2, -u3)(x1, x2). The box boundary lands on the equator.
class BaseEmbedding {
public:
    explicit BaseEmbedding(CrystGroup group);

    const CrystGroup& group() const { return group_; }
    Index dim() const { return group_.dim(); }

    Point embed(const Point& transverse) const;
    /// Canonical transverse point with embed(result) = sigma. Requires |sigma| = 1 within 1e-9.
    Point invert(const Point& sigma) const;

private:
    CrystGroup group_;
};

enum class AutomorphicKind { Zorich, Sine, Exp2, Cos2 };
enum class SineVariant { Cell, Averaged };

std::string to_string(AutomorphicKind kind);
std::string to_string(SineVariant variant);
SineVariant sine_variant_from_string(const std::string& name);

/// Strongly automorphic map of Zorich type (omits 0 and infinity) or sine type
/// (omits infinity). The n = 2 kinds are exact: with z = x1 - i x2,
/// Exp2 is exp(i z) and Cos2 is cos z.
class AutomorphicMap {
public:
    /// Zorich-type map for a group without beam rotation.
    static AutomorphicMap zorich(const CrystGroup& group);
    /// Sine-type map for a group with beam rotation. The variant only matters for n = 3:
    /// Cell interpolates linearly in t between the base disk and the radius-e sphere,
    /// Averaged is (Z + Z o R)/2, whose quasiregularity is not established.
    static AutomorphicMap sine(const CrystGroup& group, SineVariant variant = SineVariant::Cell);

    AutomorphicKind kind() const { return kind_; }
    SineVariant variant() const { return variant_; }
    bool zorich_type() const { return kind_ == AutomorphicKind::Zorich || kind_ == AutomorphicKind::Exp2; }
    const CrystGroup& group() const { return base_.group(); }
    const BaseEmbedding& base() const { return base_; }
    Index dim() const { return base_.dim(); }

    Point eval(const Point& x) const;
    /// Canonical fundamental-domain inverse (half-beam x_n >= 0 for sine type).
    BeamPoint invert(const Point& y) const;
    BeamPoint invert(const ExtendedPoint& y) const;

    std::vector<ExtendedPoint> omitted_values() const;

private:
    AutomorphicMap(AutomorphicKind kind, SineVariant variant, BaseEmbedding base);

    Point eval_sine(const Point& x) const;
    BeamPoint invert_zorich(const Point& y) const;
    BeamPoint invert_sine(const Point& y) const;
    BeamPoint canonical(const Point& x) const;

    AutomorphicKind kind_;
    SineVariant variant_;
    BaseEmbedding base_;
};

Point base_embed(const BaseEmbedding& u, const Point& transverse);
Point base_invert(const BaseEmbedding& u, const Point& sigma);
Point zorich_eval(const AutomorphicMap& h, const Point& x);
BeamPoint zorich_invert(const AutomorphicMap& h, const ExtendedPoint& y);
Point sine_eval(const AutomorphicMap& h, const Point& x);
BeamPoint sine_invert(const AutomorphicMap& h, const ExtendedPoint& y);
std::vector<ExtendedPoint> omitted_values(const AutomorphicMap& h);

} // namespace uqr
