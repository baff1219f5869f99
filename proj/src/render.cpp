#include "pfrac/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pfrac/errors.hpp"
#include "pfrac/rng.hpp"

namespace pfrac {

std::string to_string(PatchMode mode) {
    switch (mode) {
    case PatchMode::fixed_3x3:
        return "fixed-3x3";
    case PatchMode::random_3x3:
        return "random-3x3";
    default:
        return "single-pixel";
    }
}

PatchMode patch_mode_from_string(const std::string& name) {
    if (name == "single" || name == "single-pixel") {
        return PatchMode::single_pixel;
    }
    if (name == "fixed" || name == "fixed-3x3") {
        return PatchMode::fixed_3x3;
    }
    if (name == "random" || name == "random-3x3") {
        return PatchMode::random_3x3;
    }
    throw InvalidParams("unknown patch mode '" + name + "'");
}

void RenderConfig::validate() const {
    if (!(point_count > burn_in && burn_in >= 0)) {
        throw InvalidParams("render config needs point_count > burn_in >= 0");
    }
    if (width < 8 || height < 8) {
        throw InvalidParams("render size must be at least 8x8");
    }
    if (!(padding >= 0.0 && padding < 0.5)) {
        throw InvalidParams("padding must lie in [0, 0.5)");
    }
}

std::vector<Point2> generate_points(const IfsCode& code, const RenderConfig& cfg) {
    code.validate();
    cfg.validate();

    std::vector<double> cumulative(code.probs.size());
    double running = 0.0;
    for (std::size_t j = 0; j < code.probs.size(); ++j) {
        running += code.probs[j];
        cumulative[j] = running;
    }
    cumulative.back() = std::numeric_limits<double>::infinity();

    Rng rng(derive_seed(cfg.rng_seed, stream::render));
    std::vector<Point2> points;
    points.reserve(static_cast<std::size_t>(cfg.point_count - cfg.burn_in));
    Point2 v{0.0, 0.0};
    for (int t = 0; t < cfg.point_count; ++t) {
        const double u = rng.uniform();
        std::size_t j = 0;
        while (u >= cumulative[j]) {
            ++j;
        }
        v = code.maps[j](v);
        // NaN fails both comparisons, so the negated form catches it too.
        if (!(std::abs(v.x) <= divergence_limit && std::abs(v.y) <= divergence_limit)) {
            throw Diverged("chaos game diverged at iteration " + std::to_string(t));
        }
        if (t >= cfg.burn_in) {
            points.push_back(v);
        }
    }
    return points;
}

std::uint16_t patch_mask(const RenderConfig& cfg) {
    Rng rng(derive_seed(cfg.rng_seed, stream::patch));
    return static_cast<std::uint16_t>(1 + rng.below(511));
}

GrayImage rasterize(std::span<const Point2> points, const RenderConfig& cfg) {
    cfg.validate();
    if (points.empty()) {
        throw DegenerateExtent("no points to rasterize");
    }
    double xmin = points[0].x, xmax = points[0].x;
    double ymin = points[0].y, ymax = points[0].y;
    for (const auto& p : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw InvalidParams("rasterize: non-finite point");
        }
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double span_x = xmax - xmin;
    const double span_y = ymax - ymin;
    const double span = std::max(span_x, span_y);
    if (!(span > 0.0)) {
        throw DegenerateExtent("all points coincide");
    }

    // Pixel centers 0 .. W-1 cover the padded square extent; the shorter box
    // side is centered (letterbox).
    const double margin = cfg.padding * span;
    const double extent = span + 2.0 * margin;
    const int pixels_across = std::min(cfg.width, cfg.height) - 1;
    const double scale = pixels_across / extent;
    const double offset_x = 0.5 * (cfg.width - 1 - span_x * scale);
    const double offset_y = 0.5 * (cfg.height - 1 - span_y * scale);

    std::uint16_t mask = 0;
    switch (cfg.patch_mode) {
    case PatchMode::single_pixel:
        mask = 1u << 4;
        break;
    case PatchMode::fixed_3x3:
        mask = 0x1ff;
        break;
    case PatchMode::random_3x3:
        mask = patch_mask(cfg);
        break;
    }

    GrayImage img(cfg.width, cfg.height, 0);
    for (const auto& p : points) {
        const long px = std::lround(offset_x + (p.x - xmin) * scale);
        const long row = cfg.height - 1 - std::lround(offset_y + (p.y - ymin) * scale);
        for (int k = 0; k < 9; ++k) {
            if (((mask >> k) & 1u) == 0) {
                continue;
            }
            const long x = px + (k % 3 - 1);
            const long y = row + (k / 3 - 1);
            if (x >= 0 && x < cfg.width && y >= 0 && y < cfg.height) {
                img.at(static_cast<int>(x), static_cast<int>(y)) = 255;
            }
        }
    }
    return img;
}

GrayImage render(const IfsCode& code, const RenderConfig& cfg) {
    const auto points = generate_points(code, cfg);
    return rasterize(points, cfg);
}

GrayImage montage(std::span<const GrayImage> images, std::size_t k) {
    k = std::min(k, images.size());
    if (k == 0) {
        throw InvalidParams("montage needs at least one image");
    }
    const int tile_w = images[0].width;
    const int tile_h = images[0].height;
    const auto cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(k))));
    const auto rows = static_cast<int>((k + cols - 1) / cols);
    GrayImage out(cols * tile_w, rows * tile_h, 0);
    for (std::size_t i = 0; i < k; ++i) {
        const auto& img = images[i];
        if (img.width != tile_w || img.height != tile_h) {
            throw InvalidParams("montage images must share one size");
        }
        const int ox = static_cast<int>(i % cols) * tile_w;
        const int oy = static_cast<int>(i / cols) * tile_h;
        for (int y = 0; y < tile_h; ++y) {
            std::copy_n(img.pixels.begin() + static_cast<std::ptrdiff_t>(y) * tile_w, tile_w,
                        out.pixels.begin() + static_cast<std::ptrdiff_t>(oy + y) * out.width + ox);
        }
    }
    return out;
}

}  // namespace pfrac
