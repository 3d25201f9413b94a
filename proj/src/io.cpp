#include "uqr/io.hpp"

#include <png.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace uqr {

using json = nlohmann::json;

void write_file_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write failed: " + tmp);
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename " + tmp + " to " + path);
    }
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void palette_color(OrbitClass c, int iters, int max_iter, unsigned char rgb[3]) {
    // Fast escape is bright; the ramp bottoms out at 64 so slow escapes stay distinguishable from black.
    const double t = max_iter > 0 ? std::clamp(static_cast<double>(iters) / max_iter, 0.0, 1.0) : 0.0;
    const auto ramp = static_cast<unsigned char>(std::lround(255.0 - 191.0 * std::sqrt(t)));
    switch (c) {
    case OrbitClass::ToZero:
        rgb[0] = 0;
        rgb[1] = static_cast<unsigned char>(ramp / 4);
        rgb[2] = ramp;
        return;
    case OrbitClass::ToInfinity:
        rgb[0] = ramp;
        rgb[1] = static_cast<unsigned char>(ramp / 4);
        rgb[2] = 0;
        return;
    case OrbitClass::Bounded:
        rgb[0] = rgb[1] = rgb[2] = 0;
        return;
    case OrbitClass::Undecided:
        rgb[0] = rgb[1] = rgb[2] = 128;
        return;
    }
}

namespace {

void png_append(png_structp png, png_bytep data, png_size_t length) {
    auto* out = static_cast<std::string*>(png_get_io_ptr(png));
    out->append(reinterpret_cast<const char*>(data), length);
}

void png_no_flush(png_structp) {}

[[noreturn]] void png_fail(png_structp, png_const_charp msg) { throw IoError(std::string("png encoding: ") + msg); }

json point_json(const ExtendedPoint& p) {
    if (p.is_infinite()) return "inf";
    json a = json::array();
    const Point& q = p.point();
    for (Index i = 0; i < q.size(); ++i) a.push_back(q(i));
    return a;
}

json point_json(const Point& q) {
    json a = json::array();
    for (Index i = 0; i < q.size(); ++i) a.push_back(q(i));
    return a;
}

// nlohmann writes non-finite numbers as null; keep them readable.
json number_json(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

} // namespace

std::string encode_png(const JuliaRaster& raster, int max_iter) {
    const int res = raster.resolution;
    std::vector<unsigned char> pixels(static_cast<std::size_t>(res) * res * 3);
    for (int row = 0; row < res; ++row) {
        const int j = res - 1 - row;
        for (int i = 0; i < res; ++i)
            palette_color(raster.at(i, j), raster.iters_at(i, j), max_iter,
                          &pixels[(static_cast<std::size_t>(row) * res + i) * 3]);
    }

    std::string out;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_fail, nullptr);
    if (!png) throw IoError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png_create_info_struct failed");
    }
    try {
        png_set_write_fn(png, &out, png_append, png_no_flush);
        png_set_IHDR(png, info, static_cast<png_uint_32>(res), static_cast<png_uint_32>(res), 8, PNG_COLOR_TYPE_RGB,
                     PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        for (int row = 0; row < res; ++row)
            png_write_row(png, &pixels[static_cast<std::size_t>(row) * res * 3]);
        png_write_end(png, nullptr);
    } catch (...) {
        png_destroy_write_struct(&png, &info);
        throw;
    }
    png_destroy_write_struct(&png, &info);
    return out;
}

std::string interface_csv(const std::vector<InterfaceCell>& cells) {
    std::ostringstream o;
    o << "x,y,z,class,iters\n";
    for (const auto& c : cells) {
        const Point& p = c.center;
        o << format_double(p(0)) << ',' << format_double(p(1)) << ',' << format_double(p.size() > 2 ? p(2) : 0.0)
          << ',' << to_string(c.classification) << ',' << c.iterations << '\n';
    }
    return o.str();
}

std::string interface_ply(const std::vector<InterfaceCell>& cells) {
    std::ostringstream o;
    o << "ply\nformat ascii 1.0\nelement vertex " << cells.size()
      << "\nproperty float x\nproperty float y\nproperty float z\nend_header\n";
    for (const auto& c : cells) {
        const Point& p = c.center;
        o << format_double(p(0)) << ' ' << format_double(p(1)) << ' ' << format_double(p.size() > 2 ? p(2) : 0.0)
          << '\n';
    }
    return o.str();
}

std::string verify_json(const VerifyReport& report) {
    json j;
    j["schema_version"] = report.schema_version;
    j["scene"] = report.scene;
    j["all_pass"] = report.all_pass();
    json entries = json::array();
    for (const auto& e : report.entries) {
        json x;
        x["identity"] = e.identity;
        x["sample_count"] = e.sample_count;
        x["max_residual"] = number_json(e.max_residual);
        x["tolerance"] = e.tolerance ? json(*e.tolerance) : json(nullptr);
        x["pass"] = e.pass;
        if (!e.note.empty()) x["note"] = e.note;
        entries.push_back(x);
    }
    j["entries"] = entries;
    return j.dump(2) + "\n";
}

std::string convergence_json(const ConvergenceReport& r, const std::string& map_name) {
    json j;
    j["schema_version"] = 1;
    j["map"] = map_name;
    j["verdict"] = to_string(r.verdict);
    j["limit"] = r.limit.size() > 0 ? point_json(r.limit) : json(nullptr);
    j["iterations"] = r.iterations;
    json trace = json::array();
    for (double v : r.sup_trace) trace.push_back(number_json(v));
    j["sup_trace"] = trace;
    j["sample_description"] = r.sample_description;
    j["uniqueness_gap"] = number_json(r.uniqueness_gap);
    j["uniqueness_ok"] = r.uniqueness_ok;
    j["max_return_distance"] = number_json(r.max_return_distance);
    j["max_distance_distortion"] = number_json(r.max_distance_distortion);
    return j.dump(2) + "\n";
}

std::string preimages_json(const std::vector<Point>& targets, const std::vector<std::vector<ExtendedPoint>>& fibers,
                            const std::vector<std::string>& failures, int expected) {
    json j;
    j["schema_version"] = 1;
    j["expected_count"] = expected;
    json list = json::array();
    for (std::size_t k = 0; k < targets.size(); ++k) {
        json t;
        t["target"] = point_json(targets[k]);
        if (!failures[k].empty()) {
            t["count"] = nullptr;
            t["error"] = failures[k];
        } else {
            t["count"] = fibers[k].size();
            json pts = json::array();
            for (const auto& p : fibers[k]) pts.push_back(point_json(p));
            t["preimages"] = pts;
        }
        list.push_back(t);
    }
    j["targets"] = list;
    return j.dump(2) + "\n";
}

std::string distortion_csv(const std::vector<DistortionReport>& series) {
    std::ostringstream o;
    o << "m,radius,ratio,estimate\n";
    for (std::size_t m = 0; m < series.size(); ++m) {
        const auto& r = series[m];
        for (std::size_t k = 0; k < r.radii.size(); ++k)
            o << m + 1 << ',' << format_double(r.radii[k]) << ',' << format_double(r.ratios[k]) << ','
              << format_double(r.estimate) << '\n';
    }
    return o.str();
}

} // namespace uqr
