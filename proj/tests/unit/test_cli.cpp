#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "pfrac/dataset_io.hpp"
#include "pfrac/png_io.hpp"

using namespace pfrac;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "pfrac");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    Result r;
    r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

const std::string sierpinski_json = R"({"maps": [
  {"a": 0.5, "b": 0, "c": 0, "d": 0.5, "e": 0, "f": 0},
  {"a": 0.5, "b": 0, "c": 0, "d": 0.5, "e": 0.5, "f": 0},
  {"a": 0.5, "b": 0, "c": 0, "d": 0.5, "e": 0, "f": 0.5}],
 "probs": [0.3333333333333333, 0.3333333333333333, 0.3333333333333334]})";

}  // namespace

TEST_CASE("help exits 0 and shows defaults") {
    const auto top = run({"--help"});
    CHECK(top.code == 0);
    for (const char* sub : {"search", "generate", "noise", "realimg", "probe", "montage", "sigma"}) {
        CHECK(top.out.find(sub) != std::string::npos);
    }
    const auto gen = run({"generate", "--help"});
    CHECK(gen.code == 0);
    for (const char* flag : {"--code", "--sigma", "--delta", "--l", "--seed", "--size", "--points", "--patch-mode",
                             "--out", "--threads", "--montage"}) {
        CHECK(gen.out.find(flag) != std::string::npos);
    }
    CHECK(gen.out.find("100000") != std::string::npos);
    CHECK(gen.out.find("0.05") != std::string::npos);
    CHECK(run({"probe", "--help"}).out.find("30") != std::string::npos);
}

TEST_CASE("usage errors exit 64") {
    CHECK(run({}).code == 64);
    CHECK(run({"search", "--sigma", "-1"}).code == 64);
    CHECK(run({"search", "--bogus"}).code == 64);
    CHECK(run({"generate", "--sigma", "3.5"}).code == 64);
    CHECK(run({"noise", "--kind", "pink", "--out", "x"}).code == 64);
    test::TempDir dir("cli_usage");
    CHECK(run({"noise", "--sd", "0.1", "--mu", "0.5", "--low", "0.7", "--high", "0.2", "--kind", "uniform", "--out",
               (dir / "n").string()})
              .code == 64);
}

TEST_CASE("search writes a reproducible code") {
    test::TempDir dir("cli_search");
    const auto a = (dir / "a.json").string();
    const auto b = (dir / "b.json").string();
    const auto r = run({"search", "--sigma", "3.5", "--seed", "7", "--out", a});
    CHECK(r.code == 0);
    CHECK(r.err.find("\"command\":\"search\"") != std::string::npos);
    CHECK(run({"search", "--sigma", "3.5", "--seed", "7", "--out", b}).code == 0);
    CHECK(slurp(a) == slurp(b));

    const auto doc = ifs_from_json(slurp(a));
    CHECK(std::abs(sigma_factor(doc.code) - 3.5) <= 1e-6);
    CHECK(sample_ifs(2, {3.5, 1e-6}, doc.seed) == doc.code);

    const auto sig = run({"sigma", "--code", a});
    CHECK(sig.code == 0);
    CHECK(std::abs(std::stod(sig.out) - 3.5) <= 1e-6);

    const auto many = run({"search", "--count", "3", "--seed", "1"});
    CHECK(many.code == 0);
    const auto arr = Json::parse(many.out);
    CHECK(arr.is_array());
    CHECK(arr.size() == 3);
}

TEST_CASE("search exhaustion exits 2") {
    CHECK(run({"search", "--sigma", "7", "--n-maps", "2"}).code == 2);
}

TEST_CASE("sigma of the Sierpinski code prints 4.5") {
    test::TempDir dir("cli_sigma");
    std::ofstream(dir / "s.json") << sierpinski_json;
    const auto r = run({"sigma", "--code", (dir / "s.json").string()});
    CHECK(r.code == 0);
    CHECK(r.out == "4.5\n");
}

TEST_CASE("generate with zero degree gives identical images") {
    test::TempDir dir("cli_gen");
    const auto out = (dir / "ds").string();
    const auto r = run({"generate", "--sigma", "3.5", "--delta", "0", "--l", "8", "--size", "32", "--points", "5000",
                        "--out", out, "--montage", "4"});
    REQUIRE(r.code == 0);
    const auto timing = Json::parse(r.out);
    CHECK(timing.contains("search"));
    CHECK(timing.contains("render"));
    CHECK(timing.contains("total"));
    const auto ds = read_dataset(out);
    REQUIRE(ds.images.size() == 8);
    for (const auto& img : ds.images) {
        CHECK(img == ds.images[0]);
    }
    CHECK(fs::exists(fs::path(out) / "montage.png"));
}

TEST_CASE("generate is idempotent across runs and thread counts") {
    test::TempDir dir("cli_idem");
    const std::vector<std::string> common{"generate", "--sigma", "4", "--delta", "0.1", "--l", "6", "--size", "32",
                                          "--points", "4000", "--seed", "5", "--patch-mode", "random-3x3"};
    auto a = common, b = common;
    a.insert(a.end(), {"--out", (dir / "a").string(), "--threads", "1"});
    b.insert(b.end(), {"--out", (dir / "b").string(), "--threads", "8"});
    REQUIRE(run(a).code == 0);
    REQUIRE(run(b).code == 0);
    CHECK(slurp(dir / "a/manifest.json") == slurp(dir / "b/manifest.json"));
    for (int i = 0; i < 6; ++i) {
        CHECK(slurp(dir / "a" / image_filename(i)) == slurp(dir / "b" / image_filename(i)));
    }
}

TEST_CASE("an expansive code exits 3") {
    test::TempDir dir("cli_resample");
    std::ofstream(dir / "bad.json") << R"({"maps":[{"a":2,"b":0,"c":0,"d":2,"e":1,"f":1}],"probs":[1]})";
    const auto r = run({"generate", "--code", (dir / "bad.json").string(), "--l", "2", "--size", "16", "--points",
                        "500", "--out", (dir / "ds").string()});
    CHECK(r.code == 3);
    CHECK_FALSE(fs::exists(dir / "ds/manifest.json"));
}

TEST_CASE("I/O problems exit 4") {
    test::TempDir dir("cli_io");
    fs::create_directories(dir / "empty");
    CHECK(run({"probe", "--dataset", (dir / "empty").string()}).code == 4);
    CHECK(run({"montage", "--dataset", (dir / "empty").string()}).code == 4);
}

TEST_CASE("noise datasets") {
    test::TempDir dir("cli_noise");
    const auto out = (dir / "n").string();
    REQUIRE(run({"noise", "--kind", "gaussian", "--sd", "0", "--delta", "0", "--l", "3", "--size", "16", "--out", out})
                .code == 0);
    const auto ds = read_dataset(out);
    for (const auto& img : ds.images) {
        CHECK(std::all_of(img.pixels.begin(), img.pixels.end(), [](auto p) { return p == 128; }));
    }
    CHECK(slurp(fs::path(out) / "manifest.json").find("\"generator\": \"gaussian\"") != std::string::npos);
}

TEST_CASE("realimg elastic canny gives binary images") {
    test::TempDir dir("cli_real");
    RgbImage img(48, 40);
    for (int y = 0; y < 40; ++y) {
        for (int x = 0; x < 48; ++x) {
            const std::size_t i = 3 * (static_cast<std::size_t>(y) * 48 + x);
            img.rgb[i] = img.rgb[i + 1] = img.rgb[i + 2] = (x > 12 && x < 36 && y > 10 && y < 30) ? 220 : 30;
        }
    }
    write_ppm(dir / "in.ppm", img);
    const auto out = (dir / "r").string();
    const auto r = run({"realimg", "--input", (dir / "in.ppm").string(), "--canny", "--transform", "elastic",
                        "--l", "5", "--out", out});
    REQUIRE(r.code == 0);
    const auto ds = read_dataset(out);
    CHECK(ds.images.size() == 5);
    for (const auto& im : ds.images) {
        CHECK(std::all_of(im.pixels.begin(), im.pixels.end(), [](auto p) { return p == 0 || p == 255; }));
    }
    const auto text = slurp(fs::path(out) / "manifest.json");
    CHECK(text.find("\"generator\": \"real-elastic\"") != std::string::npos);
    CHECK(text.find("\"canny\": true") != std::string::npos);
}

TEST_CASE("probe and montage on a generated dataset") {
    test::TempDir dir("cli_probe");
    const auto out = (dir / "ds").string();
    REQUIRE(run({"generate", "--sigma", "3.5", "--delta", "0.1", "--l", "4", "--size", "32", "--points", "5000",
                 "--out", out})
                .code == 0);
    const auto model = (dir / "m.bin").string();
    const auto r = run({"probe", "--dataset", out, "--epochs", "3", "--resolution", "16", "--hidden", "8",
                        "--model-out", model});
    REQUIRE(r.code == 0);
    const auto report = Json::parse(r.out);
    for (const char* key : {"accuracy", "chance", "ratio", "epochs", "seed"}) {
        CHECK(report.contains(key));
    }
    CHECK(report["chance"].get<double>() == 0.25);
    CHECK(fs::exists(model));

    const auto m = run({"montage", "--dataset", out, "--k", "4", "--out", (dir / "m.png").string()});
    CHECK(m.code == 0);
    CHECK(read_png_gray(dir / "m.png").width == 64);
}

TEST_CASE("a large class count completes") {
    test::TempDir dir("cli_large");
    const auto r = run({"generate", "--sigma", "3.5", "--l", "21000", "--size", "8", "--points", "300", "--burn-in",
                        "20", "--out", (dir / "big").string()});
    REQUIRE(r.code == 0);
    CHECK(Json::parse(r.out)["images"].get<int>() == 21000);
    CHECK(fs::exists(dir / "big/images/020999.png"));
}

TEST_CASE("the installed binary runs") {
    const std::string cmd = std::string(PFRAC_TOOL_PATH) + " --help > /dev/null";
    CHECK(std::system(cmd.c_str()) == 0);
}
