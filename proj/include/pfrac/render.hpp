#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pfrac/ifs.hpp"
#include "pfrac/image.hpp"

namespace pfrac {

enum class PatchMode {
    single_pixel,
    fixed_3x3,
    random_3x3,  ///< one of the 511 non-empty 3x3 masks, drawn per image from the seed
};

std::string to_string(PatchMode mode);
/// Accepts "single", "fixed", "random" and the full enumerator names.
PatchMode patch_mode_from_string(const std::string& name);

struct RenderConfig {
    int point_count = 100'000;  ///< T, chaos-game iterations including burn-in
    int burn_in = 100;
    int width = 256;
    int height = 256;
    double padding = 0.05;  ///< margin per side, as a fraction of the larger box side
    PatchMode patch_mode = PatchMode::single_pixel;
    std::uint64_t rng_seed = 0;

    void validate() const;

    friend bool operator==(const RenderConfig&, const RenderConfig&) = default;
};

/// Orbit magnitude beyond which the chaos game is declared divergent.
inline constexpr double divergence_limit = 1e8;

/// Chaos game from v0 = (0, 0); returns v_t for t in [burn_in, T).
/// Throws Diverged on a non-finite coordinate or one beyond divergence_limit.
std::vector<Point2> generate_points(const IfsCode& code, const RenderConfig& cfg);

/// Letterboxed binary raster of the padded bounding box, +y pointing up.
/// Throws DegenerateExtent when all points coincide.
GrayImage rasterize(std::span<const Point2> points, const RenderConfig& cfg);

GrayImage render(const IfsCode& code, const RenderConfig& cfg);

/// The 3x3 mask used for an image in random_3x3 mode (bit k covers dx = k % 3 - 1,
/// dy = k / 3 - 1). Never zero.
std::uint16_t patch_mask(const RenderConfig& cfg);

/// Tiles the first `k` images row-major on a near-square grid.
GrayImage montage(std::span<const GrayImage> images, std::size_t k);

}  // namespace pfrac
