#include "doctest.h"

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "fpm/cli.hpp"
#include "fpm/io.hpp"

using namespace fpm;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("fpm_cli_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const char* kOptimalDesign =
    R"({"L_c": 1.0, "R": 0.5, "H": 0.25, "gamma_deg": 90.0, "unit": "mm"})";

}  // namespace

TEST_CASE("cli: usage errors exit with 2") {
    CHECK(cli::run({}) == 2);
    CHECK(cli::run({"no-such-command"}) == 2);
    CHECK(cli::run({"fk"}) == 2);  // missing required options
}

TEST_CASE("cli: fk prints the home endpoint") {
    TempDir tmp;
    const std::string design = tmp.file("design.json");
    write_file(design, kOptimalDesign);
    const std::string out = tmp.file("fk.txt");
    CHECK(cli::run({"fk", "--design", design, "--theta", "0", "--phi", "0",
                    "-o", out}) == 0);
    std::istringstream row(slurp(out));
    double x, y, z;
    row >> x >> y >> z;
    CHECK(std::abs(x) < 1e-12);
    CHECK(std::abs(y) < 1e-12);
    CHECK(z == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fs::exists(out + ".manifest.json"));
}

TEST_CASE("cli: sensitivity reproduces the published optimum") {
    TempDir tmp;
    const std::string design = tmp.file("design.json");
    write_file(design, kOptimalDesign);
    const std::string out = tmp.file("sens.txt");
    CHECK(cli::run({"sensitivity", "--design", design, "--seed", "7", "-o", out}) == 0);
    const std::string text = slurp(out);
    double s_k = 0.0;
    std::sscanf(text.c_str(), "s_k %lf", &s_k);
    CHECK(s_k > 0.057);
    CHECK(s_k < 0.087);
}

TEST_CASE("cli: sweep is byte-identical across reruns and thread counts") {
    TempDir tmp;
    const std::string out1 = tmp.file("a.csv"), out2 = tmp.file("b.csv");
    const std::vector<std::string> common = {
        "sweep", "--grid", "4x4", "--h-range", "0.1:0.4", "--r-range", "0.3:0.9",
        "--gamma", "90", "--seed", "7", "--instances", "6", "--points", "12"};

    auto with_out = [&](const std::string& path, const std::string& threads) {
        std::vector<std::string> args = common;
        args.insert(args.end(), {"--threads", threads, "-o", path});
        return args;
    };
    CHECK(cli::run(with_out(out1, "1")) == 0);
    CHECK(cli::run(with_out(out2, "4")) == 0);
    const std::string a = slurp(out1), b = slurp(out2);
    CHECK(a == b);
    CHECK(a.substr(0, a.find('\n')) == "H,R,gamma,H_over_R,s_k,ci95,failures");
}

TEST_CASE("cli: outputs are not overwritten without --force") {
    TempDir tmp;
    const std::string design = tmp.file("design.json");
    write_file(design, kOptimalDesign);
    const std::string out = tmp.file("fk.txt");
    CHECK(cli::run({"fk", "--design", design, "--theta", "0", "-o", out}) == 0);
    CHECK(cli::run({"fk", "--design", design, "--theta", "0", "-o", out}) == 1);
    CHECK(cli::run({"fk", "--design", design, "--theta", "0", "-o", out, "--force"}) == 0);
}

TEST_CASE("cli: domain errors exit with 1") {
    TempDir tmp;
    const std::string design = tmp.file("design.json");
    write_file(design, kOptimalDesign);
    // far outside the workspace
    CHECK(cli::run({"ik", "--design", design, "--x", "0.9", "--y", "0"}) == 1);
    CHECK(cli::run({"fk", "--design", tmp.file("missing.json"), "--theta", "0"}) == 1);
}

TEST_CASE("cli: links round trip through the two design forms") {
    TempDir tmp;
    const std::string params = tmp.file("params.json");
    write_file(params, kOptimalDesign);
    const std::string out1 = tmp.file("links1.json");
    CHECK(cli::run({"links", "--design", params, "-o", out1}) == 0);

    const std::string links = tmp.file("links.json");
    write_file(links, R"({"links": {"A": 0.25, "B": 0.5590169943749475,
                          "C": 0.9013878188659973, "D": 0.9238795325112867}})");
    const std::string out2 = tmp.file("links2.json");
    CHECK(cli::run({"links", "--design", links, "-o", out2}) == 0);
    const nlohmann::json recovered = nlohmann::json::parse(slurp(out2));
    CHECK(recovered.at("H").get<double>() == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(recovered.at("R").get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(recovered.at("gamma_deg").get<double>() == doctest::Approx(90.0).epsilon(1e-12));
}

TEST_CASE("cli: calibrate and compensate round trip through files") {
    TempDir tmp;
    std::ostringstream scan;
    scan << "# unit=mm\nx,y,z\n";
    for (int iy = 0; iy < 5; ++iy)
        for (int ix = 0; ix < 5; ++ix)
            scan << ix * 10.0 << ',' << iy * 10.0 << ','
                 << 0.01 * ix - 0.004 * iy + 0.002 * ((ix * 3 + iy) % 4) << '\n';
    const std::string scan_path = tmp.file("scan.csv");
    write_file(scan_path, scan.str());

    const std::string field_path = tmp.file("field.json");
    CHECK(cli::run({"calibrate", "--scan", scan_path, "-o", field_path}) == 0);
    const ErrorField field = load_field_json(field_path);
    CHECK(field.xs.size() == 5);
    CHECK(field.ys.size() == 5);

    const std::string corrected_path = tmp.file("corrected.csv");
    CHECK(cli::run({"compensate", "--scan", scan_path, "--field", field_path,
                    "-o", corrected_path}) == 0);
    const SurfaceScan corrected = load_scan_csv(corrected_path);
    REQUIRE(corrected.points.size() == 25);
    CHECK(flatness_rmse(corrected) < 1e-12);
}

TEST_CASE("cli: tilt value matches the closed form") {
    TempDir tmp;
    const std::string out = tmp.file("tilt.txt");
    CHECK(cli::run({"tilt", "--ni", "0,0,1", "--ng", "1,0,1", "-o", out}) == 0);
    CHECK(std::stod(slurp(out)) == doctest::Approx(45.0).epsilon(1e-9));
}

TEST_CASE("cli: plan converts a small program") {
    TempDir tmp;
    const std::string design = tmp.file("robot.json");
    write_file(design, R"({"links": {"A": 125.0, "B": 224.06, "C": 414.82, "D": 329.10},
                           "unit": "mm"})");
    const std::string gcode = tmp.file("part.gcode");
    write_file(gcode, "G90\nG1 X20 Y0 F600\nG1 X20 Y10\n");
    const std::string out = tmp.file("plan.csv");
    const std::string lines = tmp.file("lines.json");
    CHECK(cli::run({"plan", "--gcode", gcode, "--design", design, "--max-segment", "5",
                    "-o", out, "--lines-json", lines}) == 0);
    const std::string text = slurp(out);
    CHECK(text.substr(0, text.find('\n')) == "index,alpha_rad,beta_rad,z_mm");
    CHECK(fs::exists(lines));
    // 20 mm then 10 mm at 5 mm chopping: 4 + 2 samples plus the header line
    CHECK(std::count(text.begin(), text.end(), '\n') == 7);
}

TEST_CASE("cli: bootstrap and scale-link emit trajectory tables") {
    TempDir tmp;
    const std::string boot = tmp.file("boot.csv");
    CHECK(cli::run({"bootstrap", "--seed", "3", "--iters", "2", "--sk-instances", "8",
                    "-o", boot}) == 0);
    const std::string text = slurp(boot);
    CHECK(text.substr(0, text.find('\n')) ==
          "iter,len_A,len_B,len_C,len_K,len_D,delta_mean,s_k");
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);

    const std::string scale = tmp.file("scale.csv");
    CHECK(cli::run({"scale-link", "--n", "3", "--seed", "4", "-o", scale}) == 0);
    CHECK(slurp(scale).substr(0, 38) == "iter,estimated_length,relative_error\n0");
}
