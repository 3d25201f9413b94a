#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uqr/dynamics.hpp"

namespace uqr {

enum class MapKind { Power, Chebyshev, Joukowsky, HD, Lifted };

std::string to_string(MapKind kind);
MapKind map_kind_from_string(const std::string& name);

struct DeformationSpec {
    DeformationKind kind = DeformationKind::Identity;
    double beta = 0.5;
    double theta_max = 0.5;
    double alpha = 1.5;
};

struct RenderSpec {
    int resolution = 256;
    double extent = 4.0;
    /// Two of x, y, z.
    std::string plane = "xy";
    /// Shift the slice by half a cell along e2 so that one row of centres lies on the e1 axis.
    bool align_axis = false;
    std::string png = "julia.png";
    std::string csv;
    std::string ply;
};

struct DenjoyWolffSpec {
    double sample_radius = 0.5;
    double tol = 1e-8;
    int max_iter = 200;
    /// "none" iterates the scene map on the ball; "elliptic" uses a ball automorphism.
    std::string mobius = "none";
    double mobius_angle = 0.4 * 3.14159265358979323846;
    double mobius_fixed = 0.3;
};

struct DistortionSpec {
    std::vector<double> point;
    int m_max = 10;
};

struct PreimageSpec {
    int targets = 10;
    std::vector<double> target;
};

/// Everything a command needs; mirrored 1:1 by the config file and the flags.
struct SceneConfig {
    std::string group = "p2";
    MapKind map = MapKind::Power;
    int d = 2;
    std::optional<double> scale;
    SineVariant sine_variant = SineVariant::Cell;
    DeformationSpec deformation;
    OrbitOptions thresholds;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out = ".";
    int samples = 10000;
    RenderSpec render;
    DenjoyWolffSpec denjoy_wolff;
    DistortionSpec distortion;
    PreimageSpec preimages;

    Index dim() const;
    double automorphism_scale() const { return scale.value_or(static_cast<double>(d)); }
};

/// Throws ConfigError on unknown names, incompatible group/map pairs and out-of-range values.
void validate(const SceneConfig& scene);

/// Reads `key = value` sections [scene], [thresholds], [deformation], [render],
/// [denjoy_wolff], [distortion], [preimages] into `scene`, keeping absent keys.
void load_scene_file(const std::string& path, SceneConfig& scene);

GroupPair scene_groups(const SceneConfig& scene);
QcDeformation scene_deformation(const SceneConfig& scene);
/// The Schröder map of a power/chebyshev/lifted scene (PreconditionError if A is not admissible).
SchroederMap scene_schroeder(const SceneConfig& scene);
/// The scene map as a self-map, conjugated by the deformation.
SelfMap scene_map(const SceneConfig& scene);
/// Orbit options with ToZero detection enabled only when 0 attracts.
OrbitOptions scene_orbit_options(const SceneConfig& scene);
Slice scene_slice(const SceneConfig& scene);

struct VerifyEntry {
    std::string identity;
    long sample_count = 0;
    double max_residual = 0.0;
    /// Absent for report-only entries.
    std::optional<double> tolerance;
    bool pass = true;
    std::string note;
};

struct VerifyReport {
    int schema_version = 1;
    std::string scene;
    std::vector<VerifyEntry> entries;

    bool all_pass() const;
};

/// Residuals of the defining identities of the scene over seeded samples.
VerifyReport verify_suite(const SceneConfig& scene);

} // namespace uqr
