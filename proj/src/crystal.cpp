#include "uqr/crystal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace uqr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool on_fold_face(const FundamentalBox& box, const Point& x) {
    for (const auto& f : box.folds)
        if (x(f.axis) == f.value) return true;
    return false;
}

Point lattice_vector(const Matrix& basis, const Eigen::VectorXd& k) {
    return basis * k;
}

// Raw affine map x -> r * x + t, used while tracking the reducing element.
struct Affine {
    Matrix r;
    Point t;
};

} // namespace

bool FundamentalBox::contains(const Point& x) const {
    const Index m = lo.size();
    if (x.size() != m) return false;
    for (Index i = 0; i < m; ++i)
        if (!(x(i) >= lo(i) && x(i) <= hi(i))) return false;
    for (const auto& f : folds)
        if (x(f.axis) == f.value && x(f.keep_axis) < f.keep_from) return false;
    if (!on_fold_face(*this, x)) {
        for (Index i = 0; i < m; ++i)
            if (periodic[static_cast<std::size_t>(i)] && x(i) >= hi(i)) return false;
    }
    return true;
}

CrystGroup::CrystGroup(std::string name, Matrix lattice, std::vector<Isometry> point_reps, FundamentalBox box,
                       std::optional<Isometry> beam_rotation, std::optional<BaseFold> base_fold)
    : name_(std::move(name)), lattice_(std::move(lattice)), point_reps_(std::move(point_reps)), box_(std::move(box)),
      beam_rotation_(std::move(beam_rotation)), base_fold_(base_fold) {
    const Index m = lattice_.rows();
    require_dimension(m, 1, 2, "CrystGroup");
    if (lattice_.cols() != m) throw ArgumentError("CrystGroup: lattice basis must be square");
    if (std::abs(lattice_.determinant()) < 1e-12) throw ArgumentError("CrystGroup: degenerate lattice");
    lattice_inv_ = lattice_.inverse();
    if (point_reps_.empty() || isometry_distance(point_reps_.front(), Isometry::identity(m)) > 1e-12)
        throw ArgumentError("CrystGroup: first point rep must be the identity");
    if (box_.lo.size() != m || box_.hi.size() != m || box_.periodic.size() != static_cast<std::size_t>(m))
        throw ArgumentError("CrystGroup: box dimension mismatch");
    for (Index i = 0; i < m; ++i) {
        if (!box_.periodic[static_cast<std::size_t>(i)]) continue;
        Point axis = Point::Zero(m);
        axis(i) = box_.hi(i) - box_.lo(i);
        if ((lattice_.col(i) - axis).norm() > 1e-12)
            throw ArgumentError("CrystGroup: periodic box axis must match a lattice basis vector");
    }
    if (beam_rotation_) {
        if (beam_rotation_->dim() != m + 1) throw ArgumentError("CrystGroup: beam rotation dimension mismatch");
        if (!base_fold_) throw ArgumentError("CrystGroup: beam rotation requires a base fold rule");
    }
}

CrystGroup CrystGroup::zorich2() {
    Matrix basis(1, 1);
    basis << kTwoPi;
    FundamentalBox box{make_point({0.0}), make_point({kTwoPi}), {true}, {}};
    return CrystGroup("zorich2", basis, {Isometry::identity(1)}, box);
}

CrystGroup CrystGroup::sine2() {
    Matrix basis(1, 1);
    basis << kTwoPi;
    FundamentalBox box{make_point({0.0}), make_point({kTwoPi}), {true}, {}};
    const Isometry r(-Matrix::Identity(2, 2), make_point({kTwoPi, 0.0}));
    return CrystGroup("sine2", basis, {Isometry::identity(1)}, box, r, BaseFold{0, std::numbers::pi, false});
}

CrystGroup CrystGroup::p2() {
    Matrix basis(2, 2);
    basis << 2.0, 0.0, 0.0, 2.0;
    FundamentalBox box;
    box.lo = make_point({-1.0, 0.0});
    box.hi = make_point({1.0, 1.0});
    box.periodic = {true, false};
    box.folds = {
        {1, 0.0, Isometry::half_turn(make_point({0.0, 0.0})), 0, 0.0},
        {1, 1.0, Isometry::half_turn(make_point({0.0, 1.0})), 0, 0.0},
    };
    return CrystGroup("p2", basis, {Isometry::identity(2), Isometry::half_turn(make_point({0.0, 0.0}))}, box);
}

CrystGroup CrystGroup::p2_sine() {
    const CrystGroup base = p2();
    Matrix r = Matrix::Identity(3, 3);
    r(0, 0) = -1.0;
    r(2, 2) = -1.0;
    return CrystGroup("p2-sine", base.lattice(), base.point_reps(), base.box(), Isometry(r, Point::Zero(3)),
                      BaseFold{0, 0.0, true});
}

const std::vector<std::string>& CrystGroup::names() {
    static const std::vector<std::string> all{"zorich2", "sine2", "p2", "p2-sine"};
    return all;
}

CrystGroup CrystGroup::by_name(const std::string& name) {
    if (name == "zorich2") return zorich2();
    if (name == "sine2") return sine2();
    if (name == "p2") return p2();
    if (name == "p2-sine") return p2_sine();
    throw ArgumentError("unknown group '" + name + "'");
}

const Isometry& CrystGroup::beam_rotation() const {
    if (!beam_rotation_) throw ArgumentError("group " + name_ + " has no beam rotation");
    return *beam_rotation_;
}

const BaseFold& CrystGroup::base_fold() const {
    if (!base_fold_) throw ArgumentError("group " + name_ + " has no base fold");
    return *base_fold_;
}

std::vector<Isometry> CrystGroup::generators() const {
    const Index n = dim();
    std::vector<Isometry> gens;
    for (Index i = 0; i < transverse_dim(); ++i) {
        Point t = Point::Zero(n);
        t.head(transverse_dim()) = lattice_.col(i);
        gens.push_back(Isometry::translation(t));
    }
    for (std::size_t i = 1; i < point_reps_.size(); ++i) gens.push_back(point_reps_[i].extended(n));
    if (beam_rotation_) gens.push_back(*beam_rotation_);
    return gens;
}

std::vector<Isometry> CrystGroup::coset_reps() const {
    const Index n = dim();
    std::vector<Isometry> reps;
    for (const auto& p : point_reps_) reps.push_back(p.extended(n));
    if (beam_rotation_) {
        for (const auto& p : point_reps_) reps.push_back(compose(*beam_rotation_, p.extended(n)));
    }
    return reps;
}

namespace {

template <bool Track>
Point reduce_impl(const CrystGroup& group, const Point& x, Affine* element) {
    const Index m = group.transverse_dim();
    if (x.size() != m) throw ArgumentError("reduce: expected a point of R^" + std::to_string(m));
    if (!x.allFinite()) throw ArgumentError("reduce: non-finite point");
    const FundamentalBox& box = group.box();
    const Matrix& basis = group.lattice();
    if (box.contains(x)) {
        if constexpr (Track) *element = {Matrix::Identity(m, m), Point::Zero(m)};
        return x;
    }
    for (const auto& p : group.point_reps()) {
        const Matrix& rp = p.rotation();
        Point cand = rp.transpose() * (x - p.translation());
        const Eigen::VectorXd k = (group.lattice_inverse() * (cand - box.lo)).array().floor().matrix();
        cand -= lattice_vector(basis, k);
        Affine g{rp, rp * lattice_vector(basis, k) + p.translation()};
        for (Index i = 0; i < m; ++i) {
            if (!box.periodic[static_cast<std::size_t>(i)]) continue;
            const Point v = basis.col(i);
            if (cand(i) >= box.hi(i)) {
                cand -= v;
                g.t += g.r * v;
            } else if (cand(i) < box.lo(i)) {
                cand += v;
                g.t -= g.r * v;
            }
        }
        bool inside = true;
        for (Index i = 0; i < m; ++i)
            if (!(cand(i) >= box.lo(i) && cand(i) <= box.hi(i))) inside = false;
        if (!inside) continue;
        for (const auto& f : box.folds) {
            if (cand(f.axis) == f.value && cand(f.keep_axis) < f.keep_from) {
                const Matrix rgt = f.glue.rotation().transpose();
                cand = f.glue(cand);
                cand(f.axis) = f.value;
                g.t -= g.r * rgt * f.glue.translation();
                g.r = g.r * rgt;
                break;
            }
        }
        if constexpr (Track) *element = g;
        return cand;
    }
    // Unreachable for the built-in groups: some point rep always lands in the closed box.
    throw ArgumentError("reduce: no representative found for the fundamental box");
}

Isometry to_isometry(const Affine& a) {
    return Isometry(a.r, a.t);
}

} // namespace

Reduction reduce(const CrystGroup& group, const Point& x) {
    Affine g;
    Point p = reduce_impl<true>(group, x, &g);
    return {p, to_isometry(g)};
}

Point reduce_point(const CrystGroup& group, const Point& x) {
    return reduce_impl<false>(group, x, nullptr);
}

Reduction reduce_beam(const CrystGroup& group, const Point& x) {
    const Index n = group.dim();
    const Index m = group.transverse_dim();
    if (x.size() != n) throw ArgumentError("reduce_beam: expected a point of R^" + std::to_string(n));
    Reduction r = reduce(group, x.head(m));
    Point hat(n);
    hat.head(m) = r.point;
    hat(m) = x(m);
    Isometry g = r.element.extended(n);
    if (group.has_beam_rotation()) {
        const bool flip = hat(m) < 0.0 || (hat(m) == 0.0 && !group.base_fold().keeps(r.point));
        if (flip) {
            const Isometry& rot = group.beam_rotation();
            const Point y = rot(hat);
            Reduction s = reduce(group, y.head(m));
            hat.head(m) = s.point;
            hat(m) = (y(m) == 0.0) ? 0.0 : y(m);
            g = compose(compose(g, inverse(rot)), s.element.extended(n));
        }
    }
    return {hat, g};
}

Point reduce_beam_point(const CrystGroup& group, const Point& x) {
    const Index n = group.dim();
    const Index m = group.transverse_dim();
    if (x.size() != n) throw ArgumentError("reduce_beam: expected a point of R^" + std::to_string(n));
    Point hat(n);
    hat.head(m) = reduce_point(group, x.head(m));
    hat(m) = x(m);
    if (group.has_beam_rotation() && (hat(m) < 0.0 || (hat(m) == 0.0 && !group.base_fold().keeps(hat.head(m))))) {
        const Point y = group.beam_rotation()(hat);
        hat.head(m) = reduce_point(group, y.head(m));
        hat(m) = (y(m) == 0.0) ? 0.0 : y(m);
    }
    return hat;
}

std::optional<Eigen::VectorXd> lattice_coordinates(const CrystGroup& group, const Point& v, double tol) {
    const Index m = group.transverse_dim();
    if (v.size() != m && v.size() != m + 1) throw ArgumentError("lattice_coordinates: dimension mismatch");
    if (v.size() == m + 1 && std::abs(v(m)) > tol) return std::nullopt;
    const Eigen::VectorXd k = group.lattice_inverse() * v.head(m);
    const Eigen::VectorXd rounded = k.array().round().matrix();
    if ((k - rounded).cwiseAbs().maxCoeff() > tol) return std::nullopt;
    return rounded;
}

namespace {

std::vector<Isometry> reps_for(const CrystGroup& group, Index dim) {
    if (dim == group.transverse_dim()) return group.point_reps();
    if (dim == group.dim()) return group.coset_reps();
    throw ArgumentError("group " + group.name() + ": dimension mismatch");
}

// Largest deviation from integrality of the lattice coordinates of v (beam component included).
double integer_defect(const CrystGroup& group, const Point& v) {
    const Index m = group.transverse_dim();
    const Eigen::VectorXd k = group.lattice_inverse() * v.head(m);
    double defect = (k - k.array().round().matrix()).cwiseAbs().maxCoeff();
    if (v.size() == m + 1) defect = std::max(defect, std::abs(v(m)));
    return defect;
}

} // namespace

bool contains(const CrystGroup& group, const Isometry& g, double tol) {
    for (const auto& c : reps_for(group, g.dim())) {
        if ((g.rotation() - c.rotation()).cwiseAbs().maxCoeff() > tol) continue;
        if (lattice_coordinates(group, g.translation() - c.translation(), tol)) return true;
    }
    return false;
}

std::vector<Isometry> stabilizer(const CrystGroup& group, const Point& x, double tol) {
    const Index m = group.transverse_dim();
    std::vector<Isometry> out;
    for (const auto& c : reps_for(group, x.size())) {
        const Point v = x - c(x);
        if (v.size() == m + 1 && std::abs(v(m)) > tol) continue;
        const Eigen::VectorXd k = (group.lattice_inverse() * v.head(m)).array().round().matrix();
        Point t = c.translation();
        t.head(m) += lattice_vector(group.lattice(), k);
        const Isometry g(c.rotation(), t);
        if ((g(x) - x).norm() < tol) out.push_back(g);
    }
    return out;
}

std::vector<Point> orbit_points(const CrystGroup& group, const Point& x, double radius) {
    if (!(radius > 0.0)) throw ArgumentError("orbit_points: radius must be positive");
    const Index m = group.transverse_dim();
    const Matrix& inv = group.lattice_inverse();
    std::vector<Point> out;
    for (const auto& c : reps_for(group, x.size())) {
        const Point y0 = c(x);
        const double reach = radius + y0.norm();
        Eigen::VectorXi lo(m), hi(m);
        for (Index i = 0; i < m; ++i) {
            const double bound = inv.row(i).norm() * reach;
            const double centre = -(inv.row(i) * y0.head(m))(0);
            lo(i) = static_cast<int>(std::floor(centre - bound));
            hi(i) = static_cast<int>(std::ceil(centre + bound));
        }
        Eigen::VectorXi k = lo;
        while (true) {
            Point y = y0;
            y.head(m) += lattice_vector(group.lattice(), k.cast<double>());
            if (y.norm() <= radius) {
                const bool dup = std::any_of(out.begin(), out.end(),
                                             [&](const Point& q) { return (q - y).norm() < 1e-9; });
                if (!dup) out.push_back(y);
            }
            Index i = 0;
            while (i < m && k(i) == hi(i)) {
                k(i) = lo(i);
                ++i;
            }
            if (i == m) break;
            ++k(i);
        }
    }
    std::sort(out.begin(), out.end(), [](const Point& a, const Point& b) {
        return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
    });
    return out;
}

AdmissibilityCertificate check_admissible(const CrystGroup& group, const ConformalAutomorphism& a) {
    AdmissibilityCertificate cert;
    const Index n = group.dim();
    if (!(a.scale > 0.0)) {
        cert.reason = "scale must be positive";
        return cert;
    }
    if (a.orthogonal.rows() != n || a.orthogonal.cols() != n) {
        cert.reason = "orthogonal part has wrong dimension";
        return cert;
    }
    if ((a.orthogonal.transpose() * a.orthogonal - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-12) {
        cert.reason = "orthogonal part is not orthogonal";
        return cert;
    }
    const std::vector<Isometry> gens = group.generators();
    const Index m = group.transverse_dim();
    cert.admissible = true;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        AdmissibilityEntry e;
        if (i < static_cast<std::size_t>(m))
            e.generator = "translation " + std::to_string(i + 1);
        else if (group.has_beam_rotation() && i + 1 == gens.size())
            e.generator = "beam rotation";
        else
            e.generator = "point rotation " + std::to_string(i - static_cast<std::size_t>(m) + 1);
        const Matrix rot = a.orthogonal * gens[i].rotation() * a.orthogonal.transpose();
        const Point t = a.scale * (a.orthogonal * gens[i].translation());
        e.max_integer_defect = 1.0;
        for (const auto& c : group.coset_reps()) {
            if ((rot - c.rotation()).cwiseAbs().maxCoeff() > 1e-9) continue;
            e.max_integer_defect = std::min(e.max_integer_defect, integer_defect(group, t - c.translation()));
        }
        e.in_group = e.max_integer_defect <= 1e-9;
        if (!e.in_group) {
            cert.admissible = false;
            if (cert.reason.empty()) cert.reason = "conjugate of " + e.generator + " leaves the group";
        }
        cert.entries.push_back(e);
    }
    return cert;
}

std::vector<Isometry> dilation_coset_reps(const CrystGroup& group, int d, bool include_beam_rotation) {
    if (d < 1) throw ArgumentError("dilation_coset_reps: d must be >= 1");
    const Index n = group.dim();
    const Index m = group.transverse_dim();
    std::vector<Isometry> out;
    Eigen::VectorXi k = Eigen::VectorXi::Zero(m);
    while (true) {
        Point t = Point::Zero(n);
        t.head(m) = lattice_vector(group.lattice(), k.cast<double>());
        const Isometry tau = Isometry::translation(t);
        out.push_back(tau);
        if (include_beam_rotation) out.push_back(compose(tau, group.beam_rotation()));
        Index i = 0;
        while (i < m && k(i) == d - 1) {
            k(i) = 0;
            ++i;
        }
        if (i == m) break;
        ++k(i);
    }
    return out;
}

} // namespace uqr
