#pragma once

#include <string>
#include <vector>

#include "uqr/schroeder.hpp"

namespace uqr {

enum class OrbitClass { ToZero, ToInfinity, Bounded, Undecided };

std::string to_string(OrbitClass c);

struct OrbitOptions {
    double r_small = 1e-6;
    double r_large = 1e6;
    int max_iter = 200;
    /// Only maps with an attracting fixed point at 0 may report ToZero.
    bool detect_zero = true;
    bool record_samples = false;
};

struct OrbitRecord {
    ExtendedPoint start;
    std::vector<ExtendedPoint> samples;
    OrbitClass classification = OrbitClass::Undecided;
    int iterations_used = 0;
};

/// ToZero once |f^m(x)| < r_small, ToInfinity once |f^m(x)| > r_large, Bounded when
/// max_iter is reached without either, Undecided when evaluation fails.
OrbitRecord classify_orbit(const SelfMap& f, const ExtendedPoint& x, const OrbitOptions& options = {});

/// Square slice origin + s e1 + t e2 with s, t in [-extent/2, extent/2].
struct Slice {
    Point origin;
    Point e1;
    Point e2;
    double extent = 4.0;

    static Slice coordinate_plane(Index dim, Index axis1, Index axis2, double extent);
};

struct JuliaRaster {
    Slice slice;
    int resolution = 0;
    /// Row-major, index j * resolution + i, with i along e1 and j along e2.
    std::vector<OrbitClass> classes;
    std::vector<int> iterations;

    Point cell_center(int i, int j) const;
    double cell_diagonal() const;
    OrbitClass at(int i, int j) const { return classes[static_cast<std::size_t>(j) * resolution + i]; }
    int iters_at(int i, int j) const { return iterations[static_cast<std::size_t>(j) * resolution + i]; }
    bool is_interface(int i, int j) const;
};

struct InterfaceCell {
    int i = 0;
    int j = 0;
    Point center;
    OrbitClass classification = OrbitClass::Undecided;
    int iterations = 0;
};

/// Classifies every cell centre; the work is split by rows over `threads` workers and the
/// result does not depend on the split.
JuliaRaster julia_raster(const SelfMap& f, const Slice& slice, int resolution, const OrbitOptions& options,
                         int threads = 1);

/// Cells with a 4-neighbour of different classification, in row-major order.
std::vector<InterfaceCell> julia_points(const JuliaRaster& raster);

enum class DwVerdict { Converged, AutomorphismLike, Undecided };

std::string to_string(DwVerdict v);

struct DenjoyWolffOptions {
    double sample_radius = 0.5;
    double tol = 1e-8;
    int max_iter = 200;
    int recurrence_window = 10000;
    int net_size = 200;
};

struct ConvergenceReport {
    DwVerdict verdict = DwVerdict::Undecided;
    Point limit;
    int iterations = 0;
    /// Max over the net of the chordal distance to the candidate limit, per iterate.
    std::vector<double> sup_trace;
    std::string sample_description;
    /// Chordal distance between the limits found from two independent nets.
    double uniqueness_gap = 0.0;
    bool uniqueness_ok = true;
    double max_return_distance = 0.0;
    double max_distance_distortion = 0.0;
};

/// Fibonacci-sphere shells (circles for n = 2) at radii {0.1, 0.3, 0.5} * radius.
std::vector<Point> sample_net(Index dim, double radius, int count, double phase = 0.0);

/// Iteration of a self-map of the unit ball, or of domain(ball) when a deformation is given.
/// Throws PreconditionError when a sampled image leaves the closed ball.
ConvergenceReport denjoy_wolff(const SelfMap& f, const DenjoyWolffOptions& options,
                               const QcDeformation* domain = nullptr);

/// The ball automorphism as a self-map (points outside the open ball raise DomainError).
SelfMap ball_self_map(const BallMobius& t);

struct DistortionReport {
    Point x;
    std::vector<double> radii;
    std::vector<double> ratios;
    double estimate = 0.0;
    int directions = 0;
    std::string note;
};

std::vector<double> default_distortion_radii();

/// max/min of |f(x + r v) - f(x)| over unit directions v, per radius; the estimate is the
/// ratio at the smallest radius that agrees with the next larger one within 1%.
DistortionReport distortion_estimate(const SelfMap& f, const Point& x,
                                     const std::vector<double>& radii = default_distortion_radii());

/// Estimates for the iterates f^m, m = 1..m_max.
std::vector<DistortionReport> distortion_series(const SelfMap& f, const Point& x, int m_max,
                                                const std::vector<double>& radii = default_distortion_radii());

} // namespace uqr
