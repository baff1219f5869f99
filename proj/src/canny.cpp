#include <cmath>
#include <cstdint>
#include <vector>

#include "pfrac/errors.hpp"
#include "pfrac/kernels.hpp"
#include "pfrac/shape_aug.hpp"

namespace pfrac {
namespace {

// Blur weights sum to this; gradients are compared in blurred-sum units so
// the whole pipeline stays in exact integer arithmetic.
constexpr std::int64_t blur_scale = 159;

// tan(22.5 deg)
constexpr double tan_22_5 = 0.41421356237309503;

}  // namespace

GrayImage canny(const GrayImage& img, double low, double high) {
    if (!(low >= 0.0 && low <= high && high <= 255.0)) {
        throw InvalidParams("canny thresholds need 0 <= low <= high <= 255");
    }
    const int w = img.width;
    const int h = img.height;
    GrayImage edges(w, h, 0);
    if (w < 3 || h < 3) {
        return edges;
    }
    const auto n = static_cast<std::size_t>(w) * h;

    std::vector<std::int32_t> blurred(n);
    kernels::gauss5x5_i32(img.pixels, w, h, blurred);

    auto at = [&](int x, int y) -> std::int64_t {
        x = x < 0 ? 0 : (x >= w ? w - 1 : x);
        y = y < 0 ? 0 : (y >= h ? h - 1 : y);
        return blurred[static_cast<std::size_t>(y) * w + x];
    };

    std::vector<std::int64_t> gx(n), gy(n), mag2(n);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::int64_t sx = (at(x + 1, y - 1) + 2 * at(x + 1, y) + at(x + 1, y + 1)) -
                                    (at(x - 1, y - 1) + 2 * at(x - 1, y) + at(x - 1, y + 1));
            const std::int64_t sy = (at(x - 1, y + 1) + 2 * at(x, y + 1) + at(x + 1, y + 1)) -
                                    (at(x - 1, y - 1) + 2 * at(x, y - 1) + at(x + 1, y - 1));
            const auto i = static_cast<std::size_t>(y) * w + x;
            gx[i] = sx;
            gy[i] = sy;
            mag2[i] = sx * sx + sy * sy;
        }
    }

    // Non-maximum suppression along the quantized gradient direction.
    // Ties resolve toward the earlier neighbor so plateaus keep one pixel.
    std::vector<std::uint8_t> kept(n, 0);
    for (int y = 1; y < h - 1; ++y) {
        for (int x = 1; x < w - 1; ++x) {
            const auto i = static_cast<std::size_t>(y) * w + x;
            const std::int64_t m = mag2[i];
            if (m == 0) {
                continue;
            }
            const double ax = std::abs(static_cast<double>(gx[i]));
            const double ay = std::abs(static_cast<double>(gy[i]));
            int ox = 0, oy = 0;
            if (ay <= tan_22_5 * ax) {
                ox = 1;
            } else if (ax <= tan_22_5 * ay) {
                oy = 1;
            } else {
                ox = 1;
                oy = (gx[i] > 0) == (gy[i] > 0) ? 1 : -1;
            }
            const std::int64_t before = mag2[static_cast<std::size_t>(y - oy) * w + (x - ox)];
            const std::int64_t after = mag2[static_cast<std::size_t>(y + oy) * w + (x + ox)];
            if (m > before && m >= after) {
                kept[i] = 1;
            }
        }
    }

    // Hysteresis on squared magnitudes in blurred-sum units.
    const double low2 = std::pow(low * blur_scale, 2.0);
    const double high2 = std::pow(high * blur_scale, 2.0);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < n; ++i) {
        if (kept[i] && static_cast<double>(mag2[i]) >= high2 && edges.pixels[i] == 0) {
            edges.pixels[i] = 255;
            stack.push_back(i);
            while (!stack.empty()) {
                const std::size_t c = stack.back();
                stack.pop_back();
                const int cx = static_cast<int>(c % w);
                const int cy = static_cast<int>(c / w);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx, ny = cy + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) {
                            continue;
                        }
                        const auto j = static_cast<std::size_t>(ny) * w + nx;
                        if (kept[j] && edges.pixels[j] == 0 && static_cast<double>(mag2[j]) >= low2) {
                            edges.pixels[j] = 255;
                            stack.push_back(j);
                        }
                    }
                }
            }
        }
    }
    return edges;
}

}  // namespace pfrac
