#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "uqr/errors.hpp"

namespace uqr {

/// Column vector of dimension 1..3, stored inline.
template <typename Scalar>
using PointT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;

/// Square matrix of dimension 1..3, stored inline.
template <typename Scalar>
using MatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 3>;

using Point = PointT<double>;
using Matrix = MatrixT<double>;
using Index = Eigen::Index;

inline void require_dimension(Index n, Index lo, Index hi, const char* what) {
    if (n < lo || n > hi) {
        throw ArgumentError(std::string(what) + ": dimension " + std::to_string(n) + " not supported");
    }
}

template <typename Scalar>
PointT<Scalar> make_point(std::initializer_list<Scalar> coords) {
    PointT<Scalar> p(static_cast<Index>(coords.size()));
    Index i = 0;
    for (Scalar c : coords) p(i++) = c;
    return p;
}

inline Point make_point(std::initializer_list<double> coords) { return make_point<double>(coords); }

/// A point of R^n together with the point at infinity.
template <typename Scalar>
class ExtendedPointT {
public:
    ExtendedPointT() = default;

    ExtendedPointT(const PointT<Scalar>& p) : point_(p), infinite_(false) { // NOLINT(google-explicit-constructor): finite points convert implicitly
        require_dimension(p.size(), 1, 3, "ExtendedPoint");
        if (!p.allFinite()) throw ArgumentError("ExtendedPoint: non-finite coordinates");
    }

    static ExtendedPointT infinity(Index dim) {
        ExtendedPointT e;
        e.point_ = PointT<Scalar>::Zero(dim);
        e.infinite_ = true;
        return e;
    }

    bool is_infinite() const { return infinite_; }
    bool is_finite() const { return !infinite_; }
    Index dim() const { return point_.size(); }

    const PointT<Scalar>& point() const {
        if (infinite_) throw ArgumentError("ExtendedPoint: point() called on infinity");
        return point_;
    }

    friend bool operator==(const ExtendedPointT& a, const ExtendedPointT& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_ && a.dim() == b.dim();
        return a.point_ == b.point_;
    }

private:
    PointT<Scalar> point_;
    bool infinite_ = true;
};

using ExtendedPoint = ExtendedPointT<double>;

/// Chordal metric on the one-point compactification, bounded by 2.
template <typename Scalar>
Scalar chordal_distance(const ExtendedPointT<Scalar>& p, const ExtendedPointT<Scalar>& q) {
    using std::hypot;
    // stableNorm and hypot keep |x| up to the double range without squaring overflow.
    if (p.is_infinite() && q.is_infinite()) return Scalar(0);
    if (p.is_infinite()) return Scalar(2) / hypot(Scalar(1), q.point().stableNorm());
    if (q.is_infinite()) return Scalar(2) / hypot(Scalar(1), p.point().stableNorm());
    const auto& x = p.point();
    const auto& y = q.point();
    const Scalar diff = (x - y).stableNorm();
    const Scalar hx = hypot(Scalar(1), x.stableNorm());
    const Scalar hy = hypot(Scalar(1), y.stableNorm());
    // Divide by the larger factor first so the result is symmetric bit for bit.
    return Scalar(2) * (diff / std::max(hx, hy)) / std::min(hx, hy);
}

/// Orientation-preserving rigid motion x -> rotation * x + translation.
template <typename Scalar>
class IsometryT {
public:
    IsometryT() = default;

    IsometryT(const MatrixT<Scalar>& rotation, const PointT<Scalar>& translation)
        : rotation_(rotation), translation_(translation) {
        require_dimension(rotation.rows(), 1, 3, "Isometry");
        if (rotation.rows() != rotation.cols() || translation.size() != rotation.rows())
            throw ArgumentError("Isometry: dimension mismatch");
        const Scalar tol(1e-12);
        const MatrixT<Scalar> eye = MatrixT<Scalar>::Identity(rotation.rows(), rotation.rows());
        if ((rotation.transpose() * rotation - eye).cwiseAbs().maxCoeff() > tol)
            throw ArgumentError("Isometry: rotation is not orthogonal");
        if (std::abs(rotation.determinant() - Scalar(1)) > tol)
            throw ArgumentError("Isometry: rotation has determinant != +1");
    }

    static IsometryT identity(Index dim) {
        return IsometryT(MatrixT<Scalar>::Identity(dim, dim), PointT<Scalar>::Zero(dim));
    }

    static IsometryT translation(const PointT<Scalar>& t) {
        return IsometryT(MatrixT<Scalar>::Identity(t.size(), t.size()), t);
    }

    /// Half-turn x -> 2c - x about c (only orientation-preserving in even dimension).
    static IsometryT half_turn(const PointT<Scalar>& center) {
        return IsometryT(-MatrixT<Scalar>::Identity(center.size(), center.size()), Scalar(2) * center);
    }

    Index dim() const { return translation_.size(); }
    const MatrixT<Scalar>& rotation() const { return rotation_; }
    const PointT<Scalar>& translation() const { return translation_; }

    PointT<Scalar> operator()(const PointT<Scalar>& x) const {
        if (x.size() != dim()) throw ArgumentError("Isometry: dimension mismatch");
        return rotation_ * x + translation_;
    }

    /// Appends trailing coordinates on which the motion acts trivially.
    IsometryT extended(Index dim) const {
        MatrixT<Scalar> r = MatrixT<Scalar>::Identity(dim, dim);
        r.topLeftCorner(this->dim(), this->dim()) = rotation_;
        PointT<Scalar> t = PointT<Scalar>::Zero(dim);
        t.head(this->dim()) = translation_;
        return IsometryT(r, t);
    }

private:
    MatrixT<Scalar> rotation_;
    PointT<Scalar> translation_;
};

using Isometry = IsometryT<double>;

/// (g o h)(x) = g(h(x))
template <typename Scalar>
IsometryT<Scalar> compose(const IsometryT<Scalar>& g, const IsometryT<Scalar>& h) {
    if (g.dim() != h.dim()) throw ArgumentError("compose: dimension mismatch");
    return IsometryT<Scalar>(g.rotation() * h.rotation(), g.rotation() * h.translation() + g.translation());
}

template <typename Scalar>
IsometryT<Scalar> inverse(const IsometryT<Scalar>& g) {
    const MatrixT<Scalar> rt = g.rotation().transpose();
    return IsometryT<Scalar>(rt, -(rt * g.translation()));
}

template <typename Scalar>
Scalar isometry_distance(const IsometryT<Scalar>& g, const IsometryT<Scalar>& h) {
    return std::max((g.rotation() - h.rotation()).cwiseAbs().maxCoeff(),
                    (g.translation() - h.translation()).cwiseAbs().maxCoeff());
}

/// Automorphism of the open unit ball: x -> post_rotation * M_a(x), where
///   M_a(x) = ((1-|a|^2)(x-a) - |x-a|^2 a) / (1 - 2<x,a> + |x|^2 |a|^2)
/// sends a to 0, is the identity for a = 0 and has inverse M_{-a}.
template <typename Scalar>
class BallMobiusT {
public:
    BallMobiusT(const PointT<Scalar>& center, const MatrixT<Scalar>& post_rotation)
        : center_(center), rotation_(post_rotation) {
        require_dimension(center.size(), 2, 3, "BallMobius");
        if (!(center.norm() < Scalar(1))) throw DomainError("BallMobius: |center| must be < 1");
        if (post_rotation.rows() != center.size() || post_rotation.cols() != center.size())
            throw ArgumentError("BallMobius: dimension mismatch");
        const MatrixT<Scalar> eye = MatrixT<Scalar>::Identity(center.size(), center.size());
        if ((post_rotation.transpose() * post_rotation - eye).cwiseAbs().maxCoeff() > Scalar(1e-12))
            throw ArgumentError("BallMobius: post rotation is not orthogonal");
    }

    static BallMobiusT identity(Index dim) {
        return BallMobiusT(PointT<Scalar>::Zero(dim), MatrixT<Scalar>::Identity(dim, dim));
    }

    /// The elliptic automorphism fixing p: M_{-p} o O o M_p.
    static BallMobiusT elliptic(const PointT<Scalar>& fixed_point, const MatrixT<Scalar>& rotation);

    Index dim() const { return center_.size(); }
    const PointT<Scalar>& center() const { return center_; }
    const MatrixT<Scalar>& post_rotation() const { return rotation_; }

    PointT<Scalar> operator()(const PointT<Scalar>& x) const {
        check_inside(x);
        return rotation_ * shift(center_, x);
    }

    PointT<Scalar> inverse(const PointT<Scalar>& y) const {
        check_inside(y);
        return shift(PointT<Scalar>(-center_), PointT<Scalar>(rotation_.transpose() * y));
    }

    static PointT<Scalar> shift(const PointT<Scalar>& a, const PointT<Scalar>& x) {
        const PointT<Scalar> diff = x - a;
        const Scalar aa = a.squaredNorm();
        const Scalar denom = Scalar(1) - Scalar(2) * x.dot(a) + x.squaredNorm() * aa;
        return ((Scalar(1) - aa) * diff - diff.squaredNorm() * a) / denom;
    }

private:
    static void check_inside(const PointT<Scalar>& x) {
        if (!(x.norm() < Scalar(1))) throw DomainError("BallMobius: point outside the open unit ball");
    }

    PointT<Scalar> center_;
    MatrixT<Scalar> rotation_;
};

using BallMobius = BallMobiusT<double>;

/// (outer o inner) written again in center/post-rotation form.
template <typename Scalar>
BallMobiusT<Scalar> compose(const BallMobiusT<Scalar>& outer, const BallMobiusT<Scalar>& inner) {
    const Index n = inner.dim();
    const PointT<Scalar> zero = PointT<Scalar>::Zero(n);
    const PointT<Scalar> center = inner.inverse(outer.inverse(zero));
    // outer o inner o M_{-c} fixes 0, hence is orthogonal; read off its columns.
    MatrixT<Scalar> rot(n, n);
    const Scalar s(0.5);
    for (Index j = 0; j < n; ++j) {
        PointT<Scalar> e = PointT<Scalar>::Zero(n);
        e(j) = s;
        rot.col(j) = outer(inner(BallMobiusT<Scalar>::shift(PointT<Scalar>(-center), e))) / s;
    }
    return BallMobiusT<Scalar>(center, rot);
}

template <typename Scalar>
BallMobiusT<Scalar> BallMobiusT<Scalar>::elliptic(const PointT<Scalar>& fixed_point, const MatrixT<Scalar>& rotation) {
    const BallMobiusT inner(fixed_point, rotation);
    const BallMobiusT outer(PointT<Scalar>(-fixed_point), MatrixT<Scalar>::Identity(fixed_point.size(), fixed_point.size()));
    return compose(outer, inner);
}

/// Rotation of R^3 about a unit axis (Rodrigues).
inline Matrix axis_rotation(const Point& axis, double angle) {
    const Eigen::Vector3d a = Eigen::Vector3d(axis(0), axis(1), axis(2)).normalized();
    return Matrix(Eigen::AngleAxisd(angle, a).toRotationMatrix());
}

inline Matrix plane_rotation(double angle) {
    Matrix r(2, 2);
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return r;
}

} // namespace uqr
