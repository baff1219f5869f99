#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pfrac/image.hpp"

namespace pfrac {

enum class NoiseKind { gaussian, uniform };

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

/// Single-channel noise distribution in normalized intensity [0, 1].
/// gaussian: params = (mean, standard deviation); uniform: params = (low, high).
struct NoiseSpec {
    NoiseKind kind = NoiseKind::gaussian;
    std::array<double, 2> params{0.5, 0.15};
    double delta = 0.0;
    std::uint64_t seed = 0;

    static NoiseSpec gaussian(double mean, double sd, double delta, std::uint64_t seed);
    static NoiseSpec uniform(double low, double high, double delta, std::uint64_t seed);

    /// Throws InvalidParams.
    void validate() const;

    friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

/// params + eps, validated; throws InvalidParams when the perturbed
/// distribution is not well defined (sd < 0, low > high).
std::array<double, 2> perturbed_params(const NoiseSpec& spec, const std::array<double, 2>& eps);

/// One image from explicit (already perturbed) parameters. All classes of a
/// family share the same underlying variates, drawn from `seed`.
GrayImage render_noise_image(NoiseKind kind, const std::array<double, 2>& params, int width, int height,
                             std::uint64_t seed);

struct NoiseFamily {
    std::vector<LabeledImage> images;
    std::vector<std::array<double, 2>> eps;
    std::vector<int> resample_counts;
};

NoiseFamily render_noise_family(const NoiseSpec& spec, int count, int width, int height,
                                unsigned threads = 0);

}  // namespace pfrac
