#pragma once

#include <filesystem>

#include "pfrac/image.hpp"

namespace pfrac {

/// 8-bit grayscale PNG. Throws IoFailure.
void write_png(const std::filesystem::path& path, const GrayImage& img);

/// Reads any PNG as 8-bit grayscale (color input is converted by luma).
GrayImage read_png_gray(const std::filesystem::path& path);

/// Reads a PNG (any color type, alpha dropped) or binary PPM/PGM (P6/P5, maxval 255) as RGB.
RgbImage read_rgb_image(const std::filesystem::path& path);

/// Binary PPM (P6).
void write_ppm(const std::filesystem::path& path, const RgbImage& img);

}  // namespace pfrac
