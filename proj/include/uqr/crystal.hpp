#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uqr/geometry.hpp"

namespace uqr {

/// Axis-aligned fundamental box in R^{n-1} with the boundary conventions that
/// make reduction a function:
///  - on a periodic axis the upper face is excluded (it is a translate of the lower one);
///  - a face folded onto itself by a half-turn keeps the points with
///    x[keep_axis] >= keep_from. Fold faces are exempt from the periodic exclusion.
struct FundamentalBox {
    struct Fold {
        Index axis;
        double value;
        Isometry glue;  // transverse half-turn mapping the face onto itself
        Index keep_axis;
        double keep_from;
    };

    Point lo;
    Point hi;
    std::vector<bool> periodic;
    std::vector<Fold> folds;

    bool contains(const Point& x) const;
};

/// Rule selecting the canonical half of the beam base {x_n = 0} for sine groups:
/// points with x[axis] on the kept side of pivot are canonical.
struct BaseFold {
    Index axis;
    double pivot;
    bool keep_upper;

    bool keeps(const Point& transverse) const {
        return keep_upper ? transverse(axis) >= pivot : transverse(axis) <= pivot;
    }
};

/// Linear conformal map x -> scale * orthogonal * x of R^n.
struct ConformalAutomorphism {
    double scale = 2.0;
    Matrix orthogonal;

    static ConformalAutomorphism dilation(double scale, Index dim) {
        return {scale, Matrix::Identity(dim, dim)};
    }

    Index dim() const { return orthogonal.rows(); }
    bool repelling() const { return scale > 1.0; }
    Matrix matrix() const { return scale * orthogonal; }
    Point operator()(const Point& x) const { return scale * (orthogonal * x); }
    Point inverse(const Point& y) const { return orthogonal.transpose() * y / scale; }
};

/// A crystallographic group acting on the transverse space R^{n-1}, extended to R^n
/// trivially in the beam coordinate x_n, optionally together with a beam rotation R
/// switching the ends of the fundamental beam (sine-type groups).
class CrystGroup {
public:
    CrystGroup(std::string name, Matrix lattice, std::vector<Isometry> point_reps, FundamentalBox box,
               std::optional<Isometry> beam_rotation = std::nullopt,
               std::optional<BaseFold> base_fold = std::nullopt);

    /// G = <x -> x + 2 pi> on R.
    static CrystGroup zorich2();
    /// G_1 = <x -> x + 2 pi, x -> -x>, realised on R^2 with R(x1, x2) = (2 pi - x1, -x2).
    static CrystGroup sine2();
    /// p2 on R^2: lattice 2Z^2, half-turns about integer points, box [-1,1] x [0,1].
    static CrystGroup p2();
    /// <p2, R'> with R'(x1, x2, x3) = (-x1, x2, -x3).
    static CrystGroup p2_sine();
    static CrystGroup by_name(const std::string& name);
    static const std::vector<std::string>& names();

    const std::string& name() const { return name_; }
    Index dim() const { return lattice_.rows() + 1; }
    Index transverse_dim() const { return lattice_.rows(); }
    /// Basis vectors as columns.
    const Matrix& lattice() const { return lattice_; }
    const Matrix& lattice_inverse() const { return lattice_inv_; }
    const std::vector<Isometry>& point_reps() const { return point_reps_; }
    const FundamentalBox& box() const { return box_; }
    bool has_beam_rotation() const { return beam_rotation_.has_value(); }
    const Isometry& beam_rotation() const;
    const BaseFold& base_fold() const;

    /// Generators acting on R^n: lattice translations, non-trivial point reps and R.
    std::vector<Isometry> generators() const;
    /// Coset representatives of G modulo its translation subgroup, acting on R^n.
    std::vector<Isometry> coset_reps() const;

private:
    std::string name_;
    Matrix lattice_;
    Matrix lattice_inv_;
    std::vector<Isometry> point_reps_;
    FundamentalBox box_;
    std::optional<Isometry> beam_rotation_;
    std::optional<BaseFold> base_fold_;
};

/// x = element(point), with point canonical.
struct Reduction {
    Point point;
    Isometry element;
};

/// Transverse reduction into the fundamental box (x in R^{n-1}).
Reduction reduce(const CrystGroup& group, const Point& x);
Point reduce_point(const CrystGroup& group, const Point& x);

/// Reduction of x in R^n into the fundamental beam, or the half-beam when the
/// group has a beam rotation.
Reduction reduce_beam(const CrystGroup& group, const Point& x);
Point reduce_beam_point(const CrystGroup& group, const Point& x);

/// Integer lattice coordinates of v if v is a lattice vector within tol.
std::optional<Eigen::VectorXd> lattice_coordinates(const CrystGroup& group, const Point& v, double tol = 1e-9);

/// Membership of an isometry of R^n (or of R^{n-1} for groups without beam rotation).
bool contains(const CrystGroup& group, const Isometry& g, double tol = 1e-9);

/// All group elements fixing x, for x in R^{n-1} (planar part) or in R^n (whole group).
std::vector<Isometry> stabilizer(const CrystGroup& group, const Point& x, double tol = 1e-12);

/// Orbit points of x (R^{n-1} or R^n) within the origin-centred ball of the given radius.
std::vector<Point> orbit_points(const CrystGroup& group, const Point& x, double radius);

struct AdmissibilityEntry {
    std::string generator;
    bool in_group = false;
    double max_integer_defect = 0.0;
};

struct AdmissibilityCertificate {
    bool admissible = false;
    std::vector<AdmissibilityEntry> entries;
    std::string reason;
};

/// A G A^{-1} subset of G, checked on generators.
AdmissibilityCertificate check_admissible(const CrystGroup& group, const ConformalAutomorphism& a);

/// Coset representatives of G modulo A G A^{-1} for A = d * identity (translations by
/// multiples of the lattice basis below d).
std::vector<Isometry> dilation_coset_reps(const CrystGroup& group, int d, bool include_beam_rotation);

} // namespace uqr
