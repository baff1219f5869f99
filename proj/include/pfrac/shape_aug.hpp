#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pfrac/image.hpp"
#include "pfrac/rng.hpp"

namespace pfrac {

/// Rounded integer luma: (299 R + 587 G + 114 B) / 1000.
GrayImage to_grayscale(const RgbImage& img);

struct CannyThresholds {
    double low = 50.0;
    double high = 150.0;

    friend bool operator==(const CannyThresholds&, const CannyThresholds&) = default;
};

/// Binary edge map (0 / 255): 5x5 Gaussian (sigma 1.4), Sobel, non-maximum
/// suppression, hysteresis. Thresholds are in gradient-magnitude units of
/// the blurred 8-bit image. The one-pixel frame is always 0.
GrayImage canny(const GrayImage& img, double low, double high);
inline GrayImage canny(const GrayImage& img, CannyThresholds t = {}) { return canny(img, t.low, t.high); }

enum class TransformKind { affine, elastic, polynomial };

std::string to_string(TransformKind kind);
TransformKind transform_kind_from_string(const std::string& name);

struct TransformSpec {
    TransformKind kind = TransformKind::affine;
    double delta = 0.1;
    double elastic_alpha = 0.08;  ///< displacement amplitude, fraction of image width
    double elastic_sigma = 8.0;   ///< smoothing width of the displacement field, pixels
    std::uint64_t seed = 0;

    void validate() const;

    friend bool operator==(const TransformSpec&, const TransformSpec&) = default;
};

/// Number of perturbed parameters: affine 6, elastic 1, polynomial 12.
std::size_t transform_parameter_count(TransformKind kind) noexcept;

/// Per-component half-width of the perturbation box. Polynomial quadratic
/// terms get a quarter of the linear-term range.
std::vector<double> transform_half_widths(const TransformSpec& spec);

std::vector<double> draw_transform_eps(const TransformSpec& spec, Rng& rng);

/// Smoothed random displacement field, unit peak magnitude.
struct DisplacementField {
    int width = 0;
    int height = 0;
    std::vector<double> dx;
    std::vector<double> dy;
};

DisplacementField make_displacement_field(int width, int height, double sigma, std::uint64_t seed);

enum class Interpolation { bilinear, nearest };

/// Inverse-mapping warp with zero fill outside the source.
///   affine:     src = [[1+e0, e1], [e3, 1+e4]] (u, v) + (e2, e5) in the [-1, 1]^2 frame
///   polynomial: src_x = u + sum e[k] * (1, u, v, u^2, uv, v^2)[k], src_y likewise with e[6..11]
///   elastic:    src = (x, y) + alpha * width * (1 + e0) * field(x, y)
GrayImage warp(const GrayImage& img, const TransformSpec& spec, std::span<const double> eps,
               Interpolation interp = Interpolation::bilinear);
GrayImage warp(const GrayImage& img, const TransformSpec& spec, std::span<const double> eps,
               const DisplacementField& field, Interpolation interp = Interpolation::bilinear);

/// Grayscale conversion followed by optional edge extraction.
GrayImage prepare_real_base(const RgbImage& img, bool use_canny, CannyThresholds thresholds = {});

struct RealFamily {
    GrayImage base;
    std::vector<LabeledImage> images;
    std::vector<std::vector<double>> eps;  ///< eps[0] is all zeros
};

/// Class 0 is the prepared base itself; class i >= 1 warps it with eps_i.
/// Edge maps are warped with nearest sampling so outputs stay binary.
RealFamily build_real_family(const RgbImage& img, bool use_canny, const TransformSpec& spec, int count,
                             CannyThresholds thresholds = {}, unsigned threads = 0);

/// Renders one class of a real-image family from its recorded eps.
GrayImage render_real_class(const GrayImage& base, bool binary, const TransformSpec& spec,
                            std::span<const double> eps, int label, const DisplacementField* field);

}  // namespace pfrac
