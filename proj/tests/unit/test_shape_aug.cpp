#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "pfrac/errors.hpp"
#include "pfrac/shape_aug.hpp"

using namespace pfrac;

namespace {

GrayImage gradient_image(int w, int h) {
    GrayImage img(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            img.at(x, y) = static_cast<std::uint8_t>((x * 7 + y * 3 + (x * y) % 11) % 256);
        }
    }
    return img;
}

RgbImage disk_image(int side) {
    RgbImage img(side, side);
    const double c = 0.5 * (side - 1), r = side / 4.0;
    for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
            const bool inside = std::hypot(x - c, y - c) < r || (x > side / 8 && x < side / 4 && y > side / 2);
            const std::size_t i = 3 * (static_cast<std::size_t>(y) * side + x);
            img.rgb[i] = inside ? 230 : 20;
            img.rgb[i + 1] = inside ? 180 : 40;
            img.rgb[i + 2] = inside ? 60 : 90;
        }
    }
    return img;
}

bool binary(const GrayImage& img) {
    return std::all_of(img.pixels.begin(), img.pixels.end(), [](auto p) { return p == 0 || p == 255; });
}

double mean_distance_to_class0(const RealFamily& f) {
    double sum = 0.0;
    for (const auto& li : f.images) {
        sum += mean_l1_distance(li.image, f.images[0].image);
    }
    return sum / static_cast<double>(f.images.size());
}

}  // namespace

TEST_CASE("grayscale conversion") {
    RgbImage img(3, 1);
    img.rgb = {255, 255, 255, 255, 0, 0, 0, 0, 0};
    const auto g = to_grayscale(img);
    CHECK(g.pixels == std::vector<std::uint8_t>{255, 76, 0});
    RgbImage gray(256, 1);
    for (int v = 0; v < 256; ++v) {
        gray.rgb[3 * v] = gray.rgb[3 * v + 1] = gray.rgb[3 * v + 2] = static_cast<std::uint8_t>(v);
    }
    const auto gg = to_grayscale(gray);
    for (int v = 0; v < 256; ++v) {
        REQUIRE(gg.pixels[v] == v);
    }
}

TEST_CASE("grayscale matches rounded luma") {
    RgbImage img(64, 64);
    for (std::size_t i = 0; i < img.rgb.size(); ++i) {
        img.rgb[i] = static_cast<std::uint8_t>((i * 37 + 11) % 256);
    }
    const auto g = to_grayscale(img);
    for (std::size_t i = 0; i < g.pixels.size(); ++i) {
        const double luma = 0.299 * img.rgb[3 * i] + 0.587 * img.rgb[3 * i + 1] + 0.114 * img.rgb[3 * i + 2];
        REQUIRE(std::abs(g.pixels[i] - luma) <= 0.5 + 1e-9);
    }
}

TEST_CASE("canny on a constant image is empty") {
    for (const int v : {0, 77, 255}) {
        const GrayImage img(40, 30, static_cast<std::uint8_t>(v));
        const auto edges = canny(img);
        CHECK(std::all_of(edges.pixels.begin(), edges.pixels.end(), [](auto p) { return p == 0; }));
    }
}

TEST_CASE("canny finds a vertical step within one column") {
    const int w = 32, h = 24;
    GrayImage img(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = w / 2; x < w; ++x) {
            img.at(x, y) = 255;
        }
    }
    const auto edges = canny(img);
    CHECK(binary(edges));
    std::set<int> columns;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (edges.at(x, y)) {
                columns.insert(x);
            }
        }
    }
    REQUIRE_FALSE(columns.empty());
    CHECK(*columns.begin() >= w / 2 - 2);
    CHECK(*columns.rbegin() <= w / 2 + 1);
    // One continuous line covering the interior rows.
    for (int y = 2; y < h - 2; ++y) {
        int count = 0;
        for (int x = 0; x < w; ++x) {
            count += edges.at(x, y) ? 1 : 0;
        }
        CHECK(count == 1);
    }
}

TEST_CASE("canny is invariant under inversion") {
    const auto img = gradient_image(50, 40);
    auto inv = img;
    for (auto& p : inv.pixels) {
        p = static_cast<std::uint8_t>(255 - p);
    }
    CHECK(canny(img) == canny(inv));
    const auto disk = to_grayscale(disk_image(64));
    auto disk_inv = disk;
    for (auto& p : disk_inv.pixels) {
        p = static_cast<std::uint8_t>(255 - p);
    }
    CHECK(canny(disk, 20, 60) == canny(disk_inv, 20, 60));
}

TEST_CASE("canny keeps the frame clear and respects thresholds") {
    const auto img = gradient_image(50, 40);
    const auto edges = canny(img, 10, 30);
    for (int x = 0; x < 50; ++x) {
        CHECK(edges.at(x, 0) == 0);
        CHECK(edges.at(x, 39) == 0);
    }
    const auto none = canny(img, 255, 255);
    const auto n_none = std::count(none.pixels.begin(), none.pixels.end(), 255);
    const auto n_some = std::count(edges.pixels.begin(), edges.pixels.end(), 255);
    CHECK(n_none <= n_some);
}

TEST_CASE("identity warps are exact no-ops") {
    const auto img = gradient_image(37, 29);
    for (const auto kind : {TransformKind::affine, TransformKind::polynomial}) {
        TransformSpec spec;
        spec.kind = kind;
        const std::vector<double> zero(transform_parameter_count(kind), 0.0);
        CHECK(warp(img, spec, zero) == img);
        CHECK(warp(img, spec, zero, Interpolation::nearest) == img);
    }
}

TEST_CASE("elastic warp with zero amplitude is a no-op") {
    const auto img = gradient_image(33, 33);
    TransformSpec spec;
    spec.kind = TransformKind::elastic;
    spec.elastic_alpha = 0.0;
    CHECK(warp(img, spec, std::vector<double>{0.3}) == img);
    spec.elastic_alpha = 0.08;
    CHECK(warp(img, spec, std::vector<double>{-1.0}) == img);
}

TEST_CASE("integer affine translation shifts content exactly") {
    const int w = 41, h = 31;
    const auto img = gradient_image(w, h);
    TransformSpec spec;
    for (const int k : {1, 3, -2}) {
        std::vector<double> eps(6, 0.0);
        eps[2] = 2.0 * k / (w - 1);
        eps[5] = -2.0 * k / (h - 1);
        const auto out = warp(img, spec, eps);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const int sx = x + k, sy = y - k;
                const int expected = (sx >= 0 && sx < w && sy >= 0 && sy < h) ? img.at(sx, sy) : 0;
                REQUIRE(out.at(x, y) == expected);
            }
        }
    }
}

TEST_CASE("warps preserve dimensions") {
    const auto img = gradient_image(45, 20);
    Rng rng(1);
    for (const auto kind : {TransformKind::affine, TransformKind::elastic, TransformKind::polynomial}) {
        TransformSpec spec;
        spec.kind = kind;
        spec.delta = 0.5;
        const auto out = warp(img, spec, draw_transform_eps(spec, rng));
        CHECK(out.width == 45);
        CHECK(out.height == 20);
    }
    TransformSpec spec;
    CHECK_THROWS_AS(warp(img, spec, std::vector<double>(5, 0.0)), InvalidParams);
}

TEST_CASE("transform perturbations respect their box") {
    TransformSpec spec;
    spec.kind = TransformKind::polynomial;
    spec.delta = 0.4;
    const auto half = transform_half_widths(spec);
    CHECK(half[1] == doctest::Approx(0.2));
    CHECK(half[4] == doctest::Approx(0.05));
    Rng rng(3);
    for (int i = 0; i < 10000; ++i) {
        const auto eps = draw_transform_eps(spec, rng);
        for (std::size_t k = 0; k < eps.size(); ++k) {
            REQUIRE(std::abs(eps[k]) <= half[k]);
        }
    }
}

TEST_CASE("displacement field has unit peak") {
    const auto field = make_displacement_field(40, 30, 4.0, 2);
    double peak = 0.0;
    for (std::size_t i = 0; i < field.dx.size(); ++i) {
        peak = std::max(peak, std::hypot(field.dx[i], field.dy[i]));
    }
    CHECK(peak == doctest::Approx(1.0));
    CHECK_THROWS_AS(make_displacement_field(4, 4, 0.0, 0), InvalidParams);
}

TEST_CASE("real families") {
    const auto rgb = disk_image(64);

    SUBCASE("a single class is the prepared original") {
        TransformSpec spec;
        const auto fam = build_real_family(rgb, true, spec, 1);
        REQUIRE(fam.images.size() == 1);
        CHECK(fam.images[0].image == canny(to_grayscale(rgb)));
    }

    SUBCASE("affine classes are distinct") {
        TransformSpec spec;
        spec.seed = 5;
        const auto fam = build_real_family(rgb, false, spec, 200);
        std::set<std::vector<std::uint8_t>> distinct;
        for (const auto& li : fam.images) {
            distinct.insert(li.image.pixels);
        }
        CHECK(distinct.size() == 200);
    }

    SUBCASE("edge families stay binary for every transform") {
        for (const auto kind : {TransformKind::affine, TransformKind::elastic, TransformKind::polynomial}) {
            TransformSpec spec;
            spec.kind = kind;
            const auto fam = build_real_family(rgb, true, spec, 8);
            for (const auto& li : fam.images) {
                CHECK(binary(li.image));
            }
        }
    }

    SUBCASE("class 0 is the unwarped base for every transform") {
        for (const auto kind : {TransformKind::affine, TransformKind::elastic, TransformKind::polynomial}) {
            TransformSpec spec;
            spec.kind = kind;
            const auto fam = build_real_family(rgb, false, spec, 3);
            CHECK(fam.images[0].image == to_grayscale(rgb));
        }
    }

    SUBCASE("deterministic and thread independent") {
        TransformSpec spec;
        spec.kind = TransformKind::elastic;
        spec.seed = 4;
        const auto a = build_real_family(rgb, false, spec, 10, {}, 1);
        const auto b = build_real_family(rgb, false, spec, 10, {}, 8);
        CHECK(a.eps == b.eps);
        for (std::size_t i = 0; i < a.images.size(); ++i) {
            CHECK(a.images[i].image == b.images[i].image);
        }
    }

    SUBCASE("affine support grows with the degree") {
        double prev = -1.0;
        for (const double delta : {0.0, 0.01, 0.1, 1.0}) {
            TransformSpec spec;
            spec.delta = delta;
            spec.seed = 1;
            const double d = mean_distance_to_class0(build_real_family(rgb, false, spec, 32));
            if (delta == 0.0) {
                CHECK(d == 0.0);
            }
            CHECK(d >= prev);
            prev = d;
        }
    }
}
