#include "uqr/cli.hpp"

#include <array>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "uqr/io.hpp"

namespace uqr {

namespace {

// Flag values; each one overrides the config file only when given.
struct Flags {
    std::string config;
    std::uint64_t seed = 0;
    std::string out;
    int threads = 1;
    std::string group;
    std::string map;
    int d = 0;
    double scale = 0.0;
    std::string sine_variant;
    int samples = 0;
    std::string deformation;
    double beta = 0.0;
    double theta_max = 0.0;
    double alpha = 0.0;
    double r_small = 0.0;
    double r_large = 0.0;
    int max_iter = 0;

    int resolution = 0;
    double extent = 0.0;
    std::string plane;
    bool align_axis = false;
    std::string png;
    std::string csv;
    std::string ply;

    int targets = 0;
    std::vector<double> target;

    double sample_radius = 0.0;
    double tol = 0.0;
    int dw_max_iter = 0;
    std::string mobius;
    double mobius_angle = 0.0;
    double mobius_fixed = 0.0;

    std::vector<double> point;
    int m_max = 0;
};

SceneConfig build_scene(const CLI::App& app, const Flags& f) {
    SceneConfig s;
    if (!f.config.empty()) load_scene_file(f.config, s);
    // Options attached to subcommands are visible from the subcommand only.
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    auto given = [&](const std::string& name) {
        for (const CLI::App* a : {&app, sub}) {
            const CLI::Option* o = a->get_option_no_throw(name);
            if (o != nullptr && o->count() > 0) return true;
        }
        return false;
    };
    if (given("--seed")) s.seed = f.seed;
    if (given("--out")) s.out = f.out;
    if (given("--threads")) s.threads = f.threads;
    if (given("--group")) s.group = f.group;
    if (given("--map")) s.map = map_kind_from_string(f.map);
    if (given("--d")) s.d = f.d;
    if (given("--scale")) s.scale = f.scale;
    if (given("--sine-variant")) s.sine_variant = sine_variant_from_string(f.sine_variant);
    if (given("--samples")) s.samples = f.samples;
    if (given("--deformation")) s.deformation.kind = deformation_from_string(f.deformation);
    if (given("--beta")) s.deformation.beta = f.beta;
    if (given("--theta-max")) s.deformation.theta_max = f.theta_max;
    if (given("--alpha")) s.deformation.alpha = f.alpha;
    if (given("--r-small")) s.thresholds.r_small = f.r_small;
    if (given("--r-large")) s.thresholds.r_large = f.r_large;
    if (given("--max-iter")) s.thresholds.max_iter = f.max_iter;
    if (given("--resolution")) s.render.resolution = f.resolution;
    if (given("--extent")) s.render.extent = f.extent;
    if (given("--plane")) s.render.plane = f.plane;
    if (given("--align-axis")) s.render.align_axis = f.align_axis;
    if (given("--png")) s.render.png = f.png;
    if (given("--csv")) s.render.csv = f.csv;
    if (given("--ply")) s.render.ply = f.ply;
    if (given("--targets")) s.preimages.targets = f.targets;
    if (given("--target")) s.preimages.target = f.target;
    if (given("--sample-radius")) s.denjoy_wolff.sample_radius = f.sample_radius;
    if (given("--tol")) s.denjoy_wolff.tol = f.tol;
    if (given("--dw-max-iter")) s.denjoy_wolff.max_iter = f.dw_max_iter;
    if (given("--mobius")) s.denjoy_wolff.mobius = f.mobius;
    if (given("--mobius-angle")) s.denjoy_wolff.mobius_angle = f.mobius_angle;
    if (given("--mobius-fixed")) s.denjoy_wolff.mobius_fixed = f.mobius_fixed;
    if (given("--point")) s.distortion.point = f.point;
    if (given("--m-max")) s.distortion.m_max = f.m_max;
    validate(s);
    return s;
}

std::string output_path(const SceneConfig& s, const std::string& name) {
    namespace fs = std::filesystem;
    const fs::path p(name);
    if (p.is_absolute()) return p.string();
    std::error_code ec;
    fs::create_directories(s.out, ec);
    if (ec || !fs::is_directory(s.out)) throw IoError("cannot create output directory " + s.out);
    return (fs::path(s.out) / p).string();
}

std::string show(const ExtendedPoint& p) {
    if (p.is_infinite()) return "inf";
    std::ostringstream o;
    o << '(';
    for (Index i = 0; i < p.dim(); ++i) o << (i ? ", " : "") << format_double(p.point()(i));
    o << ')';
    return o.str();
}

std::string show(const Point& p) { return show(ExtendedPoint(p)); }

std::string show_omitted(const std::vector<ExtendedPoint>& v) {
    std::string s = "{";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + show(v[k]);
    return s + "}";
}

bool same(const ExtendedPoint& a, const ExtendedPoint& b) { return chordal_distance(a, b) < 1e-12; }

void cmd_info(const SceneConfig& s, std::ostream& out) {
    const CrystGroup g = CrystGroup::by_name(s.group);
    out << "group: " << g.name() << " (dimension " << g.dim() << ")\n";
    out << "lattice basis (columns):\n";
    for (Index r = 0; r < g.lattice().rows(); ++r) {
        out << "  ";
        for (Index c = 0; c < g.lattice().cols(); ++c) out << ' ' << format_double(g.lattice()(r, c));
        out << '\n';
    }
    out << "point group order: " << g.point_reps().size() << '\n';
    out << "beam rotation: " << (g.has_beam_rotation() ? "yes" : "no") << '\n';
    out << "map: " << to_string(s.map) << ", d = " << s.d << '\n';

    if (s.map == MapKind::Power || s.map == MapKind::Chebyshev || s.map == MapKind::Lifted) {
        const double lambda = s.automorphism_scale();
        const auto cert = check_admissible(g, ConformalAutomorphism::dilation(lambda, g.dim()));
        out << "automorphism: A = " << format_double(lambda) << " * identity\n";
        out << "admissibility: " << (cert.admissible ? "admissible" : "NOT admissible");
        if (!cert.reason.empty()) out << " (" << cert.reason << ')';
        out << '\n';
        for (const auto& e : cert.entries)
            out << "  A " << e.generator << " A^-1: " << (e.in_group ? "in G" : "not in G")
                << ", integer defect " << format_double(e.max_integer_defect) << '\n';
        const AutomorphicMap h = s.map == MapKind::Power ? AutomorphicMap::zorich(g)
                                                         : AutomorphicMap::sine(g, s.sine_variant);
        const auto omitted = h.omitted_values();
        out << "carrier: " << to_string(h.kind()) << ", omitted values " << show_omitted(omitted) << '\n';
        if (!cert.admissible) throw PreconditionError("A is not admissible for " + g.name());
        const SchroederMap f = scene_schroeder(s);
        out << "schroeder type: " << to_string(f.kind()) << '\n';
        for (const auto& w : omitted)
            out << "  f(" << show(w) << ") = " << show(f(w)) << (same(f(w), w) ? "  fixed\n" : "  NOT fixed\n");
    } else {
        const GroupPair pair = scene_groups(s);
        const Joukowsky hd(pair, s.d, s.sine_variant);
        out << "carriers: " << to_string(hd.zorich().kind()) << " omits " << show_omitted(hd.zorich().omitted_values())
            << ", " << to_string(hd.sine().kind()) << " omits " << show_omitted(hd.sine().omitted_values()) << '\n';
        const ExtendedPoint zero(Point::Zero(g.dim()));
        const ExtendedPoint inf = ExtendedPoint::infinity(g.dim());
        out << "  h(" << show(zero) << ") = " << show(hd(zero)) << '\n';
        out << "  h(inf) = " << show(hd(inf)) << '\n';
        const int fiber = 2 * static_cast<int>(std::lround(std::pow(s.d, g.dim() - 1)));
        out << "generic fiber size: " << fiber << '\n';
    }
}

int cmd_verify(const SceneConfig& s, std::ostream& out) {
    const VerifyReport rep = verify_suite(s);
    const std::string path = output_path(s, "verify.json");
    write_file_atomic(path, verify_json(rep));
    for (const auto& e : rep.entries) {
        out << std::left << std::setw(26) << e.identity << ' ' << std::setw(6) << (e.pass ? "pass" : "FAIL")
            << " max_residual=" << format_double(e.max_residual)
            << " tolerance=" << (e.tolerance ? format_double(*e.tolerance) : std::string("none"))
            << " samples=" << e.sample_count << '\n';
    }
    out << "report: " << path << '\n';
    return rep.all_pass() ? kExitOk : kExitFailure;
}

int cmd_render(const SceneConfig& s, std::ostream& out) {
    const SelfMap f = scene_map(s);
    const OrbitOptions opts = scene_orbit_options(s);
    const JuliaRaster raster = julia_raster(f, scene_slice(s), s.render.resolution, opts, s.threads);
    const auto cells = julia_points(raster);
    const std::string png = output_path(s, s.render.png);
    write_file_atomic(png, encode_png(raster, opts.max_iter));
    out << "png: " << png << '\n';
    if (!s.render.csv.empty()) {
        const std::string p = output_path(s, s.render.csv);
        write_file_atomic(p, interface_csv(cells));
        out << "csv: " << p << '\n';
    }
    if (!s.render.ply.empty()) {
        const std::string p = output_path(s, s.render.ply);
        write_file_atomic(p, interface_ply(cells));
        out << "ply: " << p << '\n';
    }
    std::array<long, 4> counts{};
    for (OrbitClass c : raster.classes) ++counts[static_cast<std::size_t>(c)];
    out << "cells: to_zero=" << counts[0] << " to_infinity=" << counts[1] << " bounded=" << counts[2]
        << " undecided=" << counts[3] << " interface=" << cells.size() << '\n';
    return kExitOk;
}

int cmd_preimages(const SceneConfig& s, std::ostream& out) {
    const Index n = s.dim();
    std::vector<Point> targets;
    if (!s.preimages.target.empty()) {
        Point t(n);
        for (Index i = 0; i < n; ++i) t(i) = s.preimages.target[static_cast<std::size_t>(i)];
        targets.push_back(t);
    } else {
        std::mt19937_64 rng(s.seed);
        std::normal_distribution<double> g;
        std::uniform_real_distribution<double> logr(std::log(0.2), std::log(5.0));
        for (int k = 0; k < s.preimages.targets; ++k) {
            Point t(n);
            for (Index i = 0; i < n; ++i) t(i) = g(rng);
            targets.push_back(std::exp(logr(rng)) * t.normalized());
        }
    }

    const int base = static_cast<int>(std::lround(std::pow(s.d, n - 1)));
    std::function<std::vector<ExtendedPoint>(const Point&)> solve;
    int expected = base;
    switch (s.map) {
    case MapKind::Power:
    case MapKind::Chebyshev: {
        if (s.scale && *s.scale != static_cast<double>(s.d)) throw ConfigError("preimages need A = d * identity");
        const SchroederMap f = scene_schroeder(s);
        solve = [f](const Point& y) { return preimages(f, ExtendedPoint(y)); };
        break;
    }
    case MapKind::Joukowsky:
    case MapKind::HD: {
        const int d = s.map == MapKind::Joukowsky ? 1 : s.d;
        const Joukowsky hd(scene_groups(s), d, s.sine_variant);
        expected = 2 * static_cast<int>(std::lround(std::pow(d, n - 1)));
        solve = [hd](const Point& y) { return preimages(hd, ExtendedPoint(y)); };
        break;
    }
    case MapKind::Lifted: throw ConfigError("preimages are available for power, chebyshev, joukowsky and h_d maps");
    }
    if (s.deformation.kind != DeformationKind::Identity)
        throw ConfigError("preimages ignore deformations; remove the deformation from the scene");

    std::vector<std::vector<ExtendedPoint>> fibers(targets.size());
    std::vector<std::string> failures(targets.size());
    int mismatched = 0;
    int degenerate = 0;
    for (std::size_t k = 0; k < targets.size(); ++k) {
        try {
            fibers[k] = solve(targets[k]);
            if (static_cast<int>(fibers[k].size()) != expected) ++mismatched;
        } catch (const DegenerateInputError& e) {
            failures[k] = e.what();
            ++degenerate;
        }
        out << "target " << show(targets[k]) << ": ";
        if (failures[k].empty()) out << fibers[k].size() << " preimages\n";
        else out << "degenerate (" << failures[k] << ")\n";
    }
    const std::string path = output_path(s, "preimages.json");
    write_file_atomic(path, preimages_json(targets, fibers, failures, expected));
    out << "expected " << expected << " per target; mismatched " << mismatched << ", degenerate " << degenerate
        << "\nreport: " << path << '\n';
    return mismatched == 0 && degenerate == 0 ? kExitOk : kExitFailure;
}

int cmd_denjoy_wolff(const SceneConfig& s, std::ostream& out) {
    const auto& spec = s.denjoy_wolff;
    DenjoyWolffOptions opts;
    opts.sample_radius = spec.sample_radius;
    opts.tol = spec.tol;
    opts.max_iter = spec.max_iter;
    const Index n = s.dim();
    ConvergenceReport rep;
    std::string name;
    if (spec.mobius == "elliptic") {
        Point p = Point::Zero(n);
        p(0) = spec.mobius_fixed;
        const Matrix rot = n == 3 ? axis_rotation(make_point({0.0, 0.0, 1.0}), spec.mobius_angle)
                                  : plane_rotation(spec.mobius_angle);
        const BallMobius t = BallMobius::elliptic(p, rot);
        name = "elliptic ball automorphism";
        rep = denjoy_wolff(ball_self_map(t), opts);
    } else {
        const SelfMap f = scene_map(s);
        name = f.name;
        if (s.deformation.kind == DeformationKind::Identity) {
            rep = denjoy_wolff(f, opts);
        } else {
            const QcDeformation g = scene_deformation(s);
            rep = denjoy_wolff(f, opts, &g);
        }
    }
    const std::string path = output_path(s, "denjoy_wolff.json");
    write_file_atomic(path, convergence_json(rep, name));
    out << "verdict: " << to_string(rep.verdict) << '\n';
    if (rep.verdict == DwVerdict::Converged)
        out << "limit: " << show(rep.limit) << " after " << rep.iterations << " iterations\n";
    out << "report: " << path << '\n';
    return rep.verdict == DwVerdict::Undecided ? kExitFailure : kExitOk;
}

int cmd_distortion(const SceneConfig& s, std::ostream& out) {
    const Index n = s.dim();
    Point x(n);
    if (s.distortion.point.empty()) {
        // On the unit sphere the power-map iterates neither collapse nor escape.
        x = n == 2 ? make_point({0.6, 0.8}) : make_point({0.6, 0.64, 0.48});
    } else {
        for (Index i = 0; i < n; ++i) x(i) = s.distortion.point[static_cast<std::size_t>(i)];
    }
    const SelfMap f = scene_map(s);
    const auto series = distortion_series(f, x, s.distortion.m_max);
    const std::string path = output_path(s, "distortion.csv");
    write_file_atomic(path, distortion_csv(series));
    for (std::size_t m = 0; m < series.size(); ++m) {
        out << "m=" << m + 1 << " H=" << format_double(series[m].estimate);
        if (!series[m].note.empty()) out << "  (" << series[m].note << ')';
        out << '\n';
    }
    if (s.deformation.kind != DeformationKind::Identity) {
        const QcDeformation g = scene_deformation(s);
        const SelfMap gm{"deformation", n, [g](const ExtendedPoint& y) { return g.apply(y); }};
        out << "deformation H=" << format_double(distortion_estimate(gm, x).estimate) << '\n';
    }
    out << "empirical series, no asserted bound\nreport: " << path << '\n';
    return kExitOk;
}

void add_scene_flags(CLI::App& app, Flags& f) {
    app.add_option("--config", f.config, "Scene config file (INI sections, flags override)");
    app.add_option("--seed", f.seed, "Seed for sampled computations");
    app.add_option("--out", f.out, "Output directory");
    app.add_option("--threads", f.threads, "Worker threads");
    app.add_option("--group", f.group, "zorich2, sine2, p2 or p2-sine");
    app.add_option("--map", f.map, "power, chebyshev, joukowsky, h_d or lifted");
    app.add_option("--d", f.d, "Degree parameter");
    app.add_option("--scale", f.scale, "Dilation factor of A (defaults to d)");
    app.add_option("--sine-variant", f.sine_variant, "cell or averaged");
    app.add_option("--samples", f.samples, "Samples per identity");
    app.add_option("--deformation", f.deformation, "identity, shear, twist or radial-power");
    app.add_option("--beta", f.beta, "Shear amount");
    app.add_option("--theta-max", f.theta_max, "Twist angle at the origin");
    app.add_option("--alpha", f.alpha, "Radial power exponent");
    app.add_option("--r-small", f.r_small, "ToZero threshold");
    app.add_option("--r-large", f.r_large, "ToInfinity threshold");
    app.add_option("--max-iter", f.max_iter, "Orbit iteration cap");
}

} // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Uniformly quasiregular map constructions and their dynamics", "uqr"};
    app.require_subcommand(1);
    Flags f;
    add_scene_flags(app, f);

    auto* info = app.add_subcommand("info", "Group data, omitted values and admissibility");
    auto* verify = app.add_subcommand("verify", "Residuals of the defining identities (verify.json)");
    auto* render = app.add_subcommand("render", "Julia raster of a 2-plane slice (PNG, CSV, PLY)");
    render->add_option("--resolution", f.resolution, "Cells per side");
    render->add_option("--extent", f.extent, "Side length of the slice");
    render->add_option("--plane", f.plane, "xy, xz or yz");
    render->add_flag("--align-axis", f.align_axis, "Put a row of cell centres on the e1 axis");
    render->add_option("--png", f.png, "PNG file name");
    render->add_option("--csv", f.csv, "Interface cell CSV");
    render->add_option("--ply", f.ply, "Interface cell PLY");
    auto* pre = app.add_subcommand("preimages", "Fibers over generic targets (preimages.json)");
    pre->add_option("--targets", f.targets, "Number of seeded targets");
    pre->add_option("--target", f.target, "A single target point")->delimiter(',');
    auto* dw = app.add_subcommand("denjoy-wolff", "Iteration on the unit ball (denjoy_wolff.json)");
    dw->add_option("--sample-radius", f.sample_radius, "Radius of the sample net");
    dw->add_option("--tol", f.tol, "Convergence tolerance");
    dw->add_option("--dw-max-iter", f.dw_max_iter, "Iteration cap");
    dw->add_option("--mobius", f.mobius, "none or elliptic");
    dw->add_option("--mobius-angle", f.mobius_angle, "Rotation angle of the elliptic automorphism");
    dw->add_option("--mobius-fixed", f.mobius_fixed, "Fixed point (t, 0, ..) of the elliptic automorphism");
    auto* dist = app.add_subcommand("distortion", "Distortion series of the iterates (distortion.csv)");
    dist->add_option("--point", f.point, "Base point")->delimiter(',');
    dist->add_option("--m-max", f.m_max, "Largest iterate");
    for (auto* sub : {info, verify, render, pre, dw, dist}) sub->fallthrough();

    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    SceneConfig scene;
    try {
        scene = build_scene(app, f);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (info->parsed()) {
            cmd_info(scene, out);
            return kExitOk;
        }
        if (verify->parsed()) return cmd_verify(scene, out);
        if (render->parsed()) return cmd_render(scene, out);
        if (pre->parsed()) return cmd_preimages(scene, out);
        if (dw->parsed()) return cmd_denjoy_wolff(scene, out);
        if (dist->parsed()) return cmd_distortion(scene, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

int cli_main(int argc, char** argv) {
    return cli_main(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

} // namespace uqr
