#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "fixtures.hpp"
#include "pfrac/errors.hpp"
#include "pfrac/parallel.hpp"
#include "pfrac/render.hpp"
#include "pfrac/rng.hpp"

using namespace pfrac;
using test::make_code;

namespace {

RenderConfig small_cfg(int size = 64, int points = 20000) {
    RenderConfig cfg;
    cfg.width = cfg.height = size;
    cfg.point_count = points;
    return cfg;
}

}  // namespace

TEST_CASE("render config validation") {
    RenderConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.burn_in = cfg.point_count;
    CHECK_THROWS_AS(cfg.validate(), InvalidParams);
    cfg = {};
    cfg.width = 7;
    CHECK_THROWS_AS(cfg.validate(), InvalidParams);
    cfg = {};
    cfg.padding = 0.5;
    CHECK_THROWS_AS(cfg.validate(), InvalidParams);
}

TEST_CASE("a single contraction converges to its fixed point") {
    const auto code = make_code({{0.5, 0, 0, 0.5, 0.5, 0}});
    RenderConfig cfg;
    cfg.point_count = 1000;
    cfg.burn_in = 100;
    const auto pts = generate_points(code, cfg);
    CHECK(pts.size() == 900);
    for (const auto& p : pts) {
        REQUIRE(std::abs(p.x - 1.0) <= 1e-6);
        REQUIRE(std::abs(p.y) <= 1e-6);
    }
}

TEST_CASE("Sierpinski points stay in the unit square") {
    RenderConfig cfg;
    const auto pts = generate_points(test::sierpinski(), cfg);
    for (const auto& p : pts) {
        REQUIRE(p.x >= -1e-9);
        REQUIRE(p.x <= 1 + 1e-9);
        REQUIRE(p.y >= -1e-9);
        REQUIRE(p.y <= 1 + 1e-9);
    }
}

TEST_CASE("expansive maps diverge") {
    CHECK_THROWS_AS(generate_points(make_code({{2, 0, 0, 2, 1, 1}}), RenderConfig{}), Diverged);
    CHECK_THROWS_AS(render(make_code({{2, 0, 0, 2, 1, 1}}), RenderConfig{}), Diverged);
}

TEST_CASE("strict contractions never diverge") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        for (const double sigma : {3.5, 5.0, 5.9}) {
            const auto code = sample_ifs(2, {sigma, 1e-6}, seed);
            auto cfg = small_cfg(32, 5000);
            cfg.rng_seed = seed;
            REQUIRE_NOTHROW(generate_points(code, cfg));
        }
    }
}

TEST_CASE("two points land on opposite corners") {
    RenderConfig cfg = small_cfg(16);
    cfg.padding = 0.0;
    const std::vector<Point2> pts{{0, 0}, {1, 1}};
    const auto img = rasterize(pts, cfg);
    CHECK(img.at(0, 15) == 255);
    CHECK(img.at(15, 0) == 255);
    CHECK(std::count(img.pixels.begin(), img.pixels.end(), 255) == 2);
    CHECK(std::count(img.pixels.begin(), img.pixels.end(), 0) == 16 * 16 - 2);
}

TEST_CASE("letterboxing centers the short side") {
    RenderConfig cfg = small_cfg(17);
    cfg.padding = 0.0;
    const std::vector<Point2> pts{{0, 0}, {1, 0}};
    const auto img = rasterize(pts, cfg);
    CHECK(img.at(0, 8) == 255);
    CHECK(img.at(16, 8) == 255);
    CHECK(std::count(img.pixels.begin(), img.pixels.end(), 255) == 2);
}

TEST_CASE("coincident points have a degenerate extent") {
    const std::vector<Point2> pts{{1, 2}, {1, 2}};
    CHECK_THROWS_AS(rasterize(pts, RenderConfig{}), DegenerateExtent);
    CHECK_THROWS_AS(rasterize({}, RenderConfig{}), DegenerateExtent);
}

TEST_CASE("Sierpinski occupancy lies in the regression band") {
    const auto img = render(test::sierpinski(), RenderConfig{});
    CHECK(img.width == 256);
    CHECK(img.pixels.size() == 256u * 256u);
    const double occ = occupancy(img);
    CHECK(occ > 0.02);
    CHECK(occ < 0.6);
}

TEST_CASE("rendering is deterministic in every patch mode") {
    const auto code = sample_ifs(2, {3.5, 1e-6}, 1);
    for (const auto mode : {PatchMode::single_pixel, PatchMode::fixed_3x3, PatchMode::random_3x3}) {
        auto cfg = small_cfg();
        cfg.patch_mode = mode;
        cfg.rng_seed = 5;
        CHECK(render(code, cfg) == render(code, cfg));
    }
}

TEST_CASE("patch masks are never empty and cover all masks") {
    std::vector<int> seen(512, 0);
    RenderConfig cfg;
    for (std::uint64_t s = 0; s < 20000; ++s) {
        cfg.rng_seed = s;
        const auto m = patch_mask(cfg);
        REQUIRE(m >= 1);
        REQUIRE(m <= 511);
        seen[m] = 1;
    }
    CHECK(std::accumulate(seen.begin(), seen.end(), 0) == 511);
}

TEST_CASE("fixed patches grow single-pixel renders") {
    const auto code = sample_ifs(2, {3.5, 1e-6}, 2);
    auto cfg = small_cfg();
    const auto single = render(code, cfg);
    cfg.patch_mode = PatchMode::fixed_3x3;
    const auto fixed = render(code, cfg);
    for (std::size_t i = 0; i < single.pixels.size(); ++i) {
        if (single.pixels[i]) {
            REQUIRE(fixed.pixels[i] == 255);
        }
    }
    CHECK(occupancy(fixed) > occupancy(single));
}

TEST_CASE("rasterization ignores point order") {
    auto cfg = small_cfg();
    auto pts = generate_points(sample_ifs(2, {4.0, 1e-6}, 3), cfg);
    const auto base = rasterize(pts, cfg);
    Rng rng(1);
    for (std::size_t i = pts.size() - 1; i > 0; --i) {
        std::swap(pts[i], pts[rng.below(i + 1)]);
    }
    CHECK(rasterize(pts, cfg) == base);
    cfg.patch_mode = PatchMode::fixed_3x3;
    CHECK(rasterize(pts, cfg) == rasterize(generate_points(sample_ifs(2, {4.0, 1e-6}, 3), cfg), cfg));
}

TEST_CASE("a common translation shift leaves shared-linear-part renders unchanged") {
    // With one linear part A for all maps, adding t to every translation moves
    // every orbit by (I - A)^-1 t, a constant that the bounding box removes.
    Rng rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        const double t = rng.uniform(0, 6.28), c = std::cos(t), s = std::sin(t);
        const AffineMap linear{0.6 * c, -0.4 * s, 0.6 * s, 0.4 * c, 0, 0};
        auto maps = std::vector<AffineMap>(3, linear);
        for (auto& m : maps) {
            m.e = rng.uniform(-1, 1);
            m.f = rng.uniform(-1, 1);
        }
        const auto code = make_code(maps);
        auto shifted = code;
        const double de = rng.uniform(-0.5, 0.5), df = rng.uniform(-0.5, 0.5);
        for (auto& m : shifted.maps) {
            m.e += de;
            m.f += df;
        }
        auto cfg = small_cfg();
        cfg.rng_seed = static_cast<std::uint64_t>(trial);
        CHECK(render(shifted, cfg) == render(code, cfg));
    }
}

TEST_CASE("low sigma renders fewer foreground pixels than sigma 6") {
    // sigma 6 with two maps forces isometries, whose orbit fills the frame like noise.
    int lower = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto cfg = small_cfg(128, 50000);
        cfg.rng_seed = seed;
        const double o35 = occupancy(render(sample_ifs(2, {3.5, 1e-6}, seed), cfg));
        const double o60 = occupancy(render(sample_ifs(2, {6.0, 1e-6}, seed), cfg));
        lower += o35 < o60 ? 1 : 0;
    }
    CHECK(lower == 10);
}

TEST_CASE("parallel rendering does not depend on scheduling") {
    const auto code = sample_ifs(2, {3.5, 1e-6}, 4);
    constexpr std::size_t k = 12;
    auto run = [&](unsigned threads) {
        std::vector<GrayImage> out(k);
        parallel_for(k, threads, [&](std::size_t i) {
            auto cfg = small_cfg(48, 8000);
            cfg.rng_seed = derive_seed(77, i);
            out[i] = render(code, cfg);
        });
        return out;
    };
    const auto one = run(1);
    CHECK(run(4) == one);
    CHECK(run(8) == one);
}

TEST_CASE("montage tiles on a near-square grid") {
    std::vector<GrayImage> imgs;
    for (int i = 0; i < 5; ++i) {
        imgs.emplace_back(8, 8, static_cast<std::uint8_t>(10 * (i + 1)));
    }
    const auto m = montage(imgs, 5);
    CHECK(m.width == 24);
    CHECK(m.height == 16);
    CHECK(m.at(0, 0) == 10);
    CHECK(m.at(16, 0) == 30);
    CHECK(m.at(8, 8) == 50);
    CHECK(m.at(23, 15) == 0);
    CHECK_THROWS_AS(montage(imgs, 0), InvalidParams);
}

TEST_CASE("patch mode names") {
    CHECK(patch_mode_from_string("random-3x3") == PatchMode::random_3x3);
    CHECK(patch_mode_from_string(to_string(PatchMode::fixed_3x3)) == PatchMode::fixed_3x3);
    CHECK_THROWS_AS(patch_mode_from_string("blob"), InvalidParams);
}
