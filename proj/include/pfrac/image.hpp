#pragma once

#include <cstdint>
#include <vector>

namespace pfrac {

/// Row-major 8-bit single-channel raster.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

/// Interleaved 8-bit RGB.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 0) {}

    friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

/// One element of a perturbation-labeled family.
struct LabeledImage {
    int label = 0;
    GrayImage image;
};

/// Mean absolute per-pixel difference; images must share dimensions.
double mean_l1_distance(const GrayImage& a, const GrayImage& b);

/// Fraction of non-zero pixels.
double occupancy(const GrayImage& img);

/// Intersection over union of the non-zero pixel sets.
double foreground_iou(const GrayImage& a, const GrayImage& b);

}  // namespace pfrac
