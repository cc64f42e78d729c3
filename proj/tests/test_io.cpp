#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "spdc/config_file.hpp"
#include "spdc/image_io.hpp"
#include "spdc/manifest.hpp"

using namespace spdc;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("spdc_io_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("format_double round-trips arbitrary doubles") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
    std::uniform_int_distribution<int> exponent(-300, 300);
    for (int trial = 0; trial < 500; ++trial) {
        const double v = std::ldexp(mantissa(rng), exponent(rng));
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.455) == "0.455");
    CHECK(format_double(-0.0) == "-0");
}

TEST_CASE("pgm writer emits big-endian 16-bit rows, top row first") {
    TempDir tmp;
    Image img{1.0, 3, {1.0, 0.5, 0.0, 0.25, 0.75, 1.0, 0.0, 0.0, 0.125}};
    const auto path = tmp.file("tiny.pgm");
    write_pgm16(path, img);
    const auto bytes = slurp(path);

    const std::string header = "P5\n3 3\n65535\n";
    REQUIRE(bytes.size() == header.size() + 18);
    CHECK(bytes.compare(0, header.size(), header) == 0);
    const auto sample = [&](int index) {
        const auto hi = static_cast<unsigned char>(bytes[header.size() + 2 * index]);
        const auto lo = static_cast<unsigned char>(bytes[header.size() + 2 * index + 1]);
        return (static_cast<unsigned>(hi) << 8) | lo;
    };
    CHECK(sample(0) == 65535u); // 1.0
    CHECK(sample(1) == 32768u); // 0.5 rounds up
    CHECK(sample(2) == 0u);
    CHECK(sample(3) == 16384u); // 0.25
    CHECK(sample(4) == 49151u); // 0.75
    CHECK(sample(8) == 8192u);  // 0.125
}

TEST_CASE("image csv lists x, y and the rate in storage order") {
    TempDir tmp;
    Image img{1.0, 3, {1.0, 0.5, 0.0, 0.25, 0.75, 1.0, 0.0, 0.0, 0.125}};
    const auto path = tmp.file("tiny.csv");
    write_image_csv(path, img);
    const auto text = slurp(path);
    CHECK(text.rfind("x_mm,y_mm,rate\n", 0) == 0);
    // first row is the top-left pixel: x = -1, y = +1
    CHECK(text.find("\n-1,1,1\n") != std::string::npos);
    // last row is the bottom-right pixel
    CHECK(text.find("\n1,-1,0.125\n") != std::string::npos);
    std::istringstream lines(text);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) ++count;
    CHECK(count == 10);
}

TEST_CASE("generic csv writer is deterministic in formatting") {
    TempDir tmp;
    const auto path = tmp.file("table.csv");
    write_csv(path, "param,K", {{0.0, 3.396188899}, {90.0, 1.946975011}});
    CHECK(slurp(path) == "param,K\n0,3.396188899\n90,1.946975011\n");
}

TEST_CASE("manifest reloads as a config and reproduces the snapshot") {
    TempDir tmp;
    std::istringstream in(
        "pump.wavelength_nm = 405\npump.waist_um = 136\ncrystal.length_mm = 5\n"
        "crystal.walkoff_deg = 4.9\ncrystal.noncollinear_deg = 4\ncrystal.alpha_deg = 270\n"
        "collection.ws_um = 0\ncollection.focal_mm = 500\ngrid.samples = 65\n");
    const auto cfg = ConfigFile::parse(in, "<test>");

    RunManifest manifest;
    manifest.subcommand = "image";
    manifest.args = "--alpha 270 --out run/a";
    manifest.grid_note = "momentum samples=65";
    manifest.outputs = {"run/a.pgm", "run/a.csv"};
    manifest.duration_s = 0.125;
    manifest.config_snapshot = cfg.snapshot();

    const auto path = tmp.file("a.manifest.txt");
    write_manifest(path, manifest);

    const auto reloaded = ConfigFile::load(path);
    CHECK(reloaded.snapshot() == cfg.snapshot());
    CHECK(reloaded.biphoton().crystal.azimuth_rad == cfg.biphoton().crystal.azimuth_rad);

    const auto text = slurp(path);
    CHECK(text.find("# subcommand: image") != std::string::npos);
    CHECK(text.find("# output: run/a.pgm") != std::string::npos);
    CHECK(text.find("# duration_s: 0.125") != std::string::npos);
}
