#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "uqr/cli.hpp"
#include "uqr/io.hpp"

using namespace uqr;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "uqr");
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli_main(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("uqr_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("info reports omitted values") {
    const Run a = run({"info", "--group", "p2", "--map", "power", "--d", "2"});
    CHECK(a.code == 0);
    CHECK(a.out.find("omitted values {(0, 0, 0), inf}") != std::string::npos);
    CHECK(a.out.find("admissibility: admissible") != std::string::npos);
    const Run b = run({"info", "--group", "p2-sine", "--map", "chebyshev", "--d", "2"});
    CHECK(b.code == 0);
    CHECK(b.out.find("omitted values {inf}") != std::string::npos);
}

TEST_CASE("usage and config errors exit 2") {
    CHECK(run({"info", "--group", "p2", "--map", "power", "--d", "1"}).code == 2);
    CHECK(run({"info", "--group", "p4"}).code == 2);
    CHECK(run({"info", "--map", "cubic"}).code == 2);
    CHECK(run({"info", "--group", "p2", "--map", "chebyshev"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"info", "--config", "/nonexistent/scene.ini"}).code == 2);
}

TEST_CASE("config file is read and flags override it") {
    const fs::path dir = scratch("config");
    std::ofstream(dir / "scene.ini") << "[scene]\ngroup = p2-sine\nmap = chebyshev\nd = 3\n";
    const Run a = run({"info", "--config", (dir / "scene.ini").string()});
    CHECK(a.code == 0);
    CHECK(a.out.find("map: chebyshev, d = 3") != std::string::npos);
    const Run b = run({"info", "--config", (dir / "scene.ini").string(), "--d", "2"});
    CHECK(b.out.find("map: chebyshev, d = 2") != std::string::npos);
    std::ofstream(dir / "bad.ini") << "[scene]\ngroup = p2\ncolour = red\n";
    CHECK(run({"info", "--config", (dir / "bad.ini").string()}).code == 2);
}

TEST_CASE("verify writes a versioned JSON report") {
    const fs::path dir = scratch("verify");
    const Run a = run({"verify", "--group", "zorich2", "--map", "power", "--d", "2", "--samples", "500", "--out",
                       dir.string()});
    CHECK(a.code == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "verify.json"));
    CHECK(j["schema_version"] == 1);
    CHECK(j["all_pass"] == true);
    for (const auto& e : j["entries"]) {
        CHECK(e.contains("identity"));
        CHECK(e.contains("sample_count"));
        CHECK(e.contains("tolerance"));
        CHECK(e["max_residual"].get<double>() < 1e-11);
    }
}

TEST_CASE("verify flags a non-admissible scale with exit 1") {
    const fs::path dir = scratch("verify_bad");
    const Run a = run({"verify", "--group", "p2", "--map", "power", "--scale", "1.5", "--out", dir.string()});
    CHECK(a.code == 1);
    const auto j = nlohmann::json::parse(slurp(dir / "verify.json"));
    CHECK(j["entries"][0]["identity"] == "admissibility");
    CHECK(j["entries"][0]["pass"] == false);
}

TEST_CASE("render writes PNG, CSV and PLY; unwritable output exits 3") {
    const fs::path dir = scratch("render");
    const Run a = run({"render", "--group", "p2", "--map", "power", "--resolution", "32", "--csv", "i.csv", "--ply",
                       "i.ply", "--out", dir.string()});
    CHECK(a.code == 0);
    const std::string png = slurp(dir / "julia.png");
    REQUIRE(png.size() > 8);
    CHECK(png.substr(1, 3) == "PNG");
    CHECK(slurp(dir / "i.csv").rfind("x,y,z,class,iters\n", 0) == 0);
    CHECK(slurp(dir / "i.ply").rfind("ply\nformat ascii 1.0\n", 0) == 0);
    CHECK_FALSE(fs::exists(dir / "julia.png.tmp"));

    std::ofstream(dir / "blocker") << "x";
    const Run b = run({"render", "--resolution", "16", "--out", (dir / "blocker" / "sub").string()});
    CHECK(b.code == 3);
}

TEST_CASE("preimages, denjoy-wolff and distortion commands") {
    const fs::path dir = scratch("misc");
    const Run a = run({"preimages", "--group", "p2-sine", "--map", "h_d", "--d", "2", "--out", dir.string()});
    CHECK(a.code == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "preimages.json"));
    CHECK(j["targets"].size() == 10);
    for (const auto& t : j["targets"]) CHECK(t["count"] == 8);

    const Run b = run({"denjoy-wolff", "--group", "p2", "--map", "power", "--d", "2", "--out", dir.string()});
    CHECK(b.code == 0);
    CHECK(b.out.find("verdict: converged") != std::string::npos);
    const Run c = run({"denjoy-wolff", "--mobius", "elliptic", "--out", dir.string()});
    CHECK(c.out.find("verdict: automorphism_like") != std::string::npos);
    const Run d = run({"denjoy-wolff", "--group", "p2-sine", "--map", "chebyshev", "--out", dir.string()});
    CHECK(d.code == 1);

    const Run e = run({"distortion", "--group", "p2", "--map", "power", "--m-max", "2", "--out", dir.string()});
    CHECK(e.code == 0);
    CHECK(slurp(dir / "distortion.csv").rfind("m,radius,ratio,estimate\n", 0) == 0);
}

TEST_CASE("PNG palette") {
    unsigned char rgb[3];
    palette_color(OrbitClass::Bounded, 200, 200, rgb);
    CHECK((rgb[0] == 0 && rgb[1] == 0 && rgb[2] == 0));
    palette_color(OrbitClass::Undecided, 3, 200, rgb);
    CHECK((rgb[0] == 128 && rgb[1] == 128 && rgb[2] == 128));
    palette_color(OrbitClass::ToZero, 1, 200, rgb);
    CHECK((rgb[0] == 0 && rgb[2] > 200));
    palette_color(OrbitClass::ToInfinity, 1, 200, rgb);
    CHECK((rgb[0] > 200 && rgb[2] == 0));
}
