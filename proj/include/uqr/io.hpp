#pragma once

#include <string>
#include <vector>

#include "uqr/scene.hpp"

namespace uqr {

/// Writes to `path.tmp` and renames over `path`; IoError on failure, no partial file left.
void write_file_atomic(const std::string& path, const std::string& contents);

/// 8-bit RGB PNG, one pixel per cell, top row = largest e2 coordinate.
std::string encode_png(const JuliaRaster& raster, int max_iter);
/// ToZero: blue ramp by escape time; ToInfinity: red ramp; Bounded: black; Undecided: gray.
void palette_color(OrbitClass c, int iters, int max_iter, unsigned char rgb[3]);

/// Header `x,y,z,class,iters`; z is 0 in the plane.
std::string interface_csv(const std::vector<InterfaceCell>& cells);
/// ASCII PLY point cloud of interface cell centres.
std::string interface_ply(const std::vector<InterfaceCell>& cells);

std::string verify_json(const VerifyReport& report);
std::string convergence_json(const ConvergenceReport& report, const std::string& map_name);
std::string preimages_json(const std::vector<Point>& targets, const std::vector<std::vector<ExtendedPoint>>& fibers,
                           const std::vector<std::string>& failures, int expected);
/// Columns m,radius,ratio,estimate.
std::string distortion_csv(const std::vector<DistortionReport>& series);

/// Shortest round-trip decimal form; used everywhere outputs must be byte-stable.
std::string format_double(double v);

} // namespace uqr
