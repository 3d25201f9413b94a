#include "uqr/scene.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace uqr {

std::string to_string(MapKind kind) {
    switch (kind) {
    case MapKind::Power: return "power";
    case MapKind::Chebyshev: return "chebyshev";
    case MapKind::Joukowsky: return "joukowsky";
    case MapKind::HD: return "h_d";
    case MapKind::Lifted: return "lifted";
    }
    return "unknown";
}

MapKind map_kind_from_string(const std::string& name) {
    if (name == "power") return MapKind::Power;
    if (name == "chebyshev") return MapKind::Chebyshev;
    if (name == "joukowsky") return MapKind::Joukowsky;
    if (name == "h_d") return MapKind::HD;
    if (name == "lifted") return MapKind::Lifted;
    throw ConfigError("unknown map kind '" + name + "' (expected power, chebyshev, joukowsky, h_d or lifted)");
}

Index SceneConfig::dim() const {
    return (group == "zorich2" || group == "sine2") ? 2 : 3;
}

void validate(const SceneConfig& s) {
    const auto& names = CrystGroup::names();
    if (std::find(names.begin(), names.end(), s.group) == names.end())
        throw ConfigError("unknown group '" + s.group + "' (expected zorich2, sine2, p2 or p2-sine)");
    const bool sine_group = s.group == "sine2" || s.group == "p2-sine";
    switch (s.map) {
    case MapKind::Power:
        if (sine_group) throw ConfigError("map power needs a group without beam rotation (zorich2 or p2)");
        if (s.d < 2) throw ConfigError("map power needs degree d >= 2");
        break;
    case MapKind::Chebyshev:
    case MapKind::Lifted:
        if (!sine_group) throw ConfigError("map " + to_string(s.map) + " needs a sine group (sine2 or p2-sine)");
        if (s.d < 2) throw ConfigError("map " + to_string(s.map) + " needs degree d >= 2");
        break;
    case MapKind::Joukowsky:
    case MapKind::HD:
        if (s.d < 1) throw ConfigError("map " + to_string(s.map) + " needs d >= 1");
        break;
    }
    if (s.d > 64) throw ConfigError("degree d must be <= 64");
    if (s.scale && !(*s.scale > 0.0 && std::isfinite(*s.scale))) throw ConfigError("scale must be positive");
    if (s.scale && (s.map == MapKind::Joukowsky || s.map == MapKind::HD))
        throw ConfigError("scale applies to power, chebyshev and lifted maps only");
    const auto& t = s.thresholds;
    if (!(t.r_small > 0.0 && t.r_small < 1.0 && t.r_large > 1.0))
        throw ConfigError("thresholds must satisfy 0 < r_small < 1 < r_large");
    if (t.max_iter < 1) throw ConfigError("max_iter must be >= 1");
    if (s.deformation.kind == DeformationKind::RadialPower && !(s.deformation.alpha > 0.0))
        throw ConfigError("radial-power alpha must be positive");
    if (s.threads < 1 || s.threads > 256) throw ConfigError("threads must be in [1, 256]");
    if (s.samples < 1) throw ConfigError("samples must be >= 1");
    const auto& r = s.render;
    if (r.resolution < 16 || r.resolution > 4096) throw ConfigError("resolution must be in [16, 4096]");
    if (!(r.extent > 0.0)) throw ConfigError("extent must be positive");
    static const std::set<std::string> planes2{"xy"};
    static const std::set<std::string> planes3{"xy", "xz", "yz"};
    if (!(s.dim() == 2 ? planes2 : planes3).count(r.plane))
        throw ConfigError("plane '" + r.plane + "' not available in dimension " + std::to_string(s.dim()));
    const auto& dw = s.denjoy_wolff;
    if (!(dw.sample_radius > 0.0 && dw.sample_radius < 1.0)) throw ConfigError("sample_radius must be in (0, 1)");
    if (!(dw.tol > 0.0) || dw.max_iter < 2) throw ConfigError("invalid denjoy_wolff tolerance or max_iter");
    if (dw.mobius != "none" && dw.mobius != "elliptic") throw ConfigError("mobius must be none or elliptic");
    if (!(std::abs(dw.mobius_fixed) < 1.0)) throw ConfigError("mobius fixed point must lie in the open ball");
    if (!s.distortion.point.empty() && static_cast<Index>(s.distortion.point.size()) != s.dim())
        throw ConfigError("distortion point has the wrong dimension");
    if (s.distortion.m_max < 1) throw ConfigError("distortion m_max must be >= 1");
    if (!s.preimages.target.empty() && static_cast<Index>(s.preimages.target.size()) != s.dim())
        throw ConfigError("preimage target has the wrong dimension");
    if (s.preimages.targets < 1) throw ConfigError("preimage target count must be >= 1");
}

namespace {

std::string unquote(std::string v) {
    if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) v = v.substr(1, v.size() - 2);
    return v;
}

template <typename T>
T parse_value(const std::string& key, const std::string& raw) {
    std::istringstream in(unquote(raw));
    T v{};
    in >> v;
    if (in.fail() || !(in >> std::ws).eof()) throw ConfigError("config key '" + key + "': cannot parse '" + raw + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& raw) {
    const std::string v = unquote(raw);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config key '" + key + "': expected a boolean, got '" + raw + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& raw) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(unquote(raw));
    while (std::getline(in, item, ',')) out.push_back(parse_value<double>(key, item));
    return out;
}

} // namespace

void load_scene_file(const std::string& path, SceneConfig& s) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(path, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("cannot read config '" + path + "': " + e.message());
    }
    for (const auto& [section, body] : tree) {
        for (const auto& [key, node] : body) {
            const std::string v = node.get_value<std::string>();
            const std::string full = section + "." + key;
            if (section == "scene") {
                if (key == "group") s.group = unquote(v);
                else if (key == "map") s.map = map_kind_from_string(unquote(v));
                else if (key == "d") s.d = parse_value<int>(full, v);
                else if (key == "scale") s.scale = parse_value<double>(full, v);
                else if (key == "sine_variant") s.sine_variant = sine_variant_from_string(unquote(v));
                else if (key == "seed") s.seed = parse_value<std::uint64_t>(full, v);
                else if (key == "threads") s.threads = parse_value<int>(full, v);
                else if (key == "out") s.out = unquote(v);
                else if (key == "samples") s.samples = parse_value<int>(full, v);
                else throw ConfigError("unknown config key '" + full + "'");
            } else if (section == "thresholds") {
                if (key == "r_small") s.thresholds.r_small = parse_value<double>(full, v);
                else if (key == "r_large") s.thresholds.r_large = parse_value<double>(full, v);
                else if (key == "max_iter") s.thresholds.max_iter = parse_value<int>(full, v);
                else throw ConfigError("unknown config key '" + full + "'");
            } else if (section == "deformation") {
                if (key == "kind") s.deformation.kind = deformation_from_string(unquote(v));
                else if (key == "beta") s.deformation.beta = parse_value<double>(full, v);
                else if (key == "theta_max") s.deformation.theta_max = parse_value<double>(full, v);
                else if (key == "alpha") s.deformation.alpha = parse_value<double>(full, v);
                else throw ConfigError("unknown config key '" + full + "'");
            } else if (section == "render") {
                if (key == "resolution") s.render.resolution = parse_value<int>(full, v);
                else if (key == "extent") s.render.extent = parse_value<double>(full, v);
                else if (key == "plane") s.render.plane = unquote(v);
                else if (key == "align_axis") s.render.align_axis = parse_bool(full, v);
                else if (key == "png") s.render.png = unquote(v);
                else if (key == "csv") s.render.csv = unquote(v);
                else if (key == "ply") s.render.ply = unquote(v);
                else throw ConfigError("unknown config key '" + full + "'");
            } else if (section == "denjoy_wolff") {
                if (key == "sample_radius") s.denjoy_wolff.sample_radius = parse_value<double>(full, v);
                else if (key == "tol") s.denjoy_wolff.tol = parse_value<double>(full, v);
                else if (key == "max_iter") s.denjoy_wolff.max_iter = parse_value<int>(full, v);
                else if (key == "mobius") s.denjoy_wolff.mobius = unquote(v);
                else if (key == "angle") s.denjoy_wolff.mobius_angle = parse_value<double>(full, v);
                else if (key == "fixed_point") s.denjoy_wolff.mobius_fixed = parse_value<double>(full, v);
                else throw ConfigError("unknown config key '" + full + "'");
            } else if (section == "distortion") {
                if (key == "point") s.distortion.point = parse_list(full, v);
                else if (key == "m_max") s.distortion.m_max = parse_value<int>(full, v);
                else throw ConfigError("unknown config key '" + full + "'");
            } else if (section == "preimages") {
                if (key == "targets") s.preimages.targets = parse_value<int>(full, v);
                else if (key == "target") s.preimages.target = parse_list(full, v);
                else throw ConfigError("unknown config key '" + full + "'");
            } else {
                throw ConfigError("unknown config section '" + section + "'");
            }
        }
    }
}

GroupPair scene_groups(const SceneConfig& scene) { return default_group_pair(scene.dim()); }

QcDeformation scene_deformation(const SceneConfig& scene) {
    const Index n = scene.dim();
    switch (scene.deformation.kind) {
    case DeformationKind::Identity: return QcDeformation::identity(n);
    case DeformationKind::Shear: return QcDeformation::shear(scene.deformation.beta, n);
    case DeformationKind::Twist: return QcDeformation::twist(scene.deformation.theta_max, n);
    case DeformationKind::RadialPower: return QcDeformation::radial_power(scene.deformation.alpha, n);
    }
    return QcDeformation::identity(n);
}

SchroederMap scene_schroeder(const SceneConfig& scene) {
    const CrystGroup group = CrystGroup::by_name(scene.group);
    const auto a = ConformalAutomorphism::dilation(scene.automorphism_scale(), group.dim());
    switch (scene.map) {
    case MapKind::Power: return SchroederMap(AutomorphicMap::zorich(group), a);
    case MapKind::Chebyshev:
    case MapKind::Lifted: return SchroederMap(AutomorphicMap::sine(group, scene.sine_variant), a);
    default: throw ConfigError("map " + to_string(scene.map) + " is not a Schröder map");
    }
}

SelfMap scene_map(const SceneConfig& scene) {
    SelfMap f;
    switch (scene.map) {
    case MapKind::Power:
    case MapKind::Chebyshev: f = scene_schroeder(scene).as_self_map(); break;
    case MapKind::Lifted: f = LiftedMap(scene_schroeder(scene)).as_self_map(); break;
    case MapKind::Joukowsky: f = Joukowsky(scene_groups(scene), 1, scene.sine_variant).as_self_map(); break;
    case MapKind::HD: f = Joukowsky(scene_groups(scene), scene.d, scene.sine_variant).as_self_map(); break;
    }
    if (scene.deformation.kind == DeformationKind::Identity) return f;
    return conjugate(f, scene_deformation(scene));
}

OrbitOptions scene_orbit_options(const SceneConfig& scene) {
    OrbitOptions o = scene.thresholds;
    o.detect_zero = scene.map == MapKind::Power || scene.map == MapKind::Lifted;
    return o;
}

Slice scene_slice(const SceneConfig& scene) {
    const std::string& p = scene.render.plane;
    const Index a1 = p[0] - 'x';
    const Index a2 = p[1] - 'x';
    Slice s = Slice::coordinate_plane(scene.dim(), a1, a2, scene.render.extent);
    if (scene.render.align_axis) s.origin += 0.5 * (scene.render.extent / scene.render.resolution) * s.e2;
    return s;
}

} // namespace uqr
