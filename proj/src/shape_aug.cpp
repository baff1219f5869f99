#include "pfrac/shape_aug.hpp"

#include <algorithm>
#include <cmath>

#include "pfrac/errors.hpp"
#include "pfrac/parallel.hpp"

namespace pfrac {

GrayImage to_grayscale(const RgbImage& img) {
    GrayImage out(img.width, img.height);
    for (std::size_t i = 0; i < out.pixels.size(); ++i) {
        const std::uint32_t r = img.rgb[3 * i], g = img.rgb[3 * i + 1], b = img.rgb[3 * i + 2];
        out.pixels[i] = static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b + 500) / 1000);
    }
    return out;
}

std::string to_string(TransformKind kind) {
    switch (kind) {
    case TransformKind::elastic:
        return "elastic";
    case TransformKind::polynomial:
        return "polynomial";
    default:
        return "affine";
    }
}

TransformKind transform_kind_from_string(const std::string& name) {
    if (name == "affine") {
        return TransformKind::affine;
    }
    if (name == "elastic") {
        return TransformKind::elastic;
    }
    if (name == "polynomial") {
        return TransformKind::polynomial;
    }
    throw InvalidParams("unknown transform '" + name + "'");
}

void TransformSpec::validate() const {
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw InvalidParams("perturbation degree must be finite and >= 0");
    }
    if (!(elastic_sigma > 0.0)) {
        throw InvalidParams("elastic smoothing width must be positive");
    }
    if (!std::isfinite(elastic_alpha)) {
        throw InvalidParams("elastic amplitude must be finite");
    }
}

std::size_t transform_parameter_count(TransformKind kind) noexcept {
    switch (kind) {
    case TransformKind::elastic:
        return 1;
    case TransformKind::polynomial:
        return 12;
    default:
        return 6;
    }
}

std::vector<double> transform_half_widths(const TransformSpec& spec) {
    std::vector<double> half(transform_parameter_count(spec.kind), 0.5 * spec.delta);
    if (spec.kind == TransformKind::polynomial) {
        for (std::size_t k : {3, 4, 5, 9, 10, 11}) {
            half[k] = 0.125 * spec.delta;
        }
    }
    return half;
}

std::vector<double> draw_transform_eps(const TransformSpec& spec, Rng& rng) {
    auto eps = transform_half_widths(spec);
    for (auto& v : eps) {
        v *= 2.0 * rng.uniform() - 1.0;
    }
    return eps;
}

namespace {

void gaussian_smooth(std::vector<double>& data, int w, int h, double sigma) {
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(2 * radius + 1);
    double total = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        kernel[k + radius] = std::exp(-0.5 * k * k / (sigma * sigma));
        total += kernel[k + radius];
    }
    for (auto& k : kernel) {
        k /= total;
    }
    std::vector<double> tmp(data.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                acc += kernel[k + radius] * data[static_cast<std::size_t>(y) * w + std::clamp(x + k, 0, w - 1)];
            }
            tmp[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                acc += kernel[k + radius] * tmp[static_cast<std::size_t>(std::clamp(y + k, 0, h - 1)) * w + x];
            }
            data[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
}

std::uint8_t sample(const GrayImage& img, double sx, double sy, Interpolation interp) {
    constexpr double slack = 1e-6;
    const double max_x = img.width - 1, max_y = img.height - 1;
    if (!(sx >= -slack && sx <= max_x + slack && sy >= -slack && sy <= max_y + slack)) {
        return 0;
    }
    sx = std::clamp(sx, 0.0, max_x);
    sy = std::clamp(sy, 0.0, max_y);
    if (interp == Interpolation::nearest) {
        return img.at(static_cast<int>(std::lround(sx)), static_cast<int>(std::lround(sy)));
    }
    const int x0 = std::min(static_cast<int>(sx), img.width - 2 < 0 ? 0 : img.width - 2);
    const int y0 = std::min(static_cast<int>(sy), img.height - 2 < 0 ? 0 : img.height - 2);
    const int x1 = std::min(x0 + 1, img.width - 1);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double fx = sx - x0, fy = sy - y0;
    const double top = (1.0 - fx) * img.at(x0, y0) + fx * img.at(x1, y0);
    const double bottom = (1.0 - fx) * img.at(x0, y1) + fx * img.at(x1, y1);
    const double v = (1.0 - fy) * top + fy * bottom;
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

void check_eps(const TransformSpec& spec, std::span<const double> eps) {
    if (eps.size() != transform_parameter_count(spec.kind)) {
        throw InvalidParams(to_string(spec.kind) + " warp expects " +
                            std::to_string(transform_parameter_count(spec.kind)) + " parameters, got " +
                            std::to_string(eps.size()));
    }
}

}  // namespace

DisplacementField make_displacement_field(int width, int height, double sigma, std::uint64_t seed) {
    if (!(sigma > 0.0)) {
        throw InvalidParams("elastic smoothing width must be positive");
    }
    DisplacementField field{width, height, {}, {}};
    const auto n = static_cast<std::size_t>(width) * height;
    field.dx.resize(n);
    field.dy.resize(n);
    Rng rng(derive_seed(seed, stream::transform));
    for (std::size_t i = 0; i < n; ++i) {
        field.dx[i] = rng.uniform(-1.0, 1.0);
        field.dy[i] = rng.uniform(-1.0, 1.0);
    }
    gaussian_smooth(field.dx, width, height, sigma);
    gaussian_smooth(field.dy, width, height, sigma);
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        peak = std::max(peak, std::hypot(field.dx[i], field.dy[i]));
    }
    if (peak > 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            field.dx[i] /= peak;
            field.dy[i] /= peak;
        }
    }
    return field;
}

GrayImage warp(const GrayImage& img, const TransformSpec& spec, std::span<const double> eps,
               const DisplacementField& field, Interpolation interp) {
    spec.validate();
    check_eps(spec, eps);
    const int w = img.width, h = img.height;
    GrayImage out(w, h, 0);
    const double half_w = 0.5 * (w - 1), half_h = 0.5 * (h - 1);

    if (spec.kind == TransformKind::elastic) {
        if (field.width != w || field.height != h) {
            throw InvalidParams("displacement field size does not match the image");
        }
        const double amplitude = spec.elastic_alpha * w * (1.0 + eps[0]);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const auto i = static_cast<std::size_t>(y) * w + x;
                out.pixels[i] = sample(img, x + amplitude * field.dx[i], y + amplitude * field.dy[i], interp);
            }
        }
        return out;
    }

    for (int y = 0; y < h; ++y) {
        const double v = h > 1 ? y / half_h - 1.0 : 0.0;
        for (int x = 0; x < w; ++x) {
            const double u = w > 1 ? x / half_w - 1.0 : 0.0;
            double su = 0.0, sv = 0.0;
            if (spec.kind == TransformKind::affine) {
                su = (1.0 + eps[0]) * u + eps[1] * v + eps[2];
                sv = eps[3] * u + (1.0 + eps[4]) * v + eps[5];
            } else {
                const double basis[6] = {1.0, u, v, u * u, u * v, v * v};
                su = u;
                sv = v;
                for (int k = 0; k < 6; ++k) {
                    su += eps[k] * basis[k];
                    sv += eps[6 + k] * basis[k];
                }
            }
            out.at(x, y) = sample(img, (su + 1.0) * half_w, (sv + 1.0) * half_h, interp);
        }
    }
    return out;
}

GrayImage warp(const GrayImage& img, const TransformSpec& spec, std::span<const double> eps,
               Interpolation interp) {
    if (spec.kind == TransformKind::elastic) {
        return warp(img, spec, eps, make_displacement_field(img.width, img.height, spec.elastic_sigma, spec.seed),
                    interp);
    }
    return warp(img, spec, eps, DisplacementField{}, interp);
}

GrayImage prepare_real_base(const RgbImage& img, bool use_canny, CannyThresholds thresholds) {
    auto gray = to_grayscale(img);
    return use_canny ? canny(gray, thresholds) : gray;
}

GrayImage render_real_class(const GrayImage& base, bool binary, const TransformSpec& spec,
                            std::span<const double> eps, int label, const DisplacementField* field) {
    if (label == 0) {
        return base;
    }
    const auto interp = binary ? Interpolation::nearest : Interpolation::bilinear;
    return field ? warp(base, spec, eps, *field, interp) : warp(base, spec, eps, interp);
}

RealFamily build_real_family(const RgbImage& img, bool use_canny, const TransformSpec& spec, int count,
                             CannyThresholds thresholds, unsigned threads) {
    spec.validate();
    if (count < 1) {
        throw InvalidParams("family size L must be >= 1");
    }
    RealFamily family;
    family.base = prepare_real_base(img, use_canny, thresholds);
    const auto n = static_cast<std::size_t>(count);
    family.eps.assign(n, std::vector<double>(transform_parameter_count(spec.kind), 0.0));
    Rng rng(derive_seed(spec.seed, stream::family));
    for (std::size_t i = 1; i < n; ++i) {
        family.eps[i] = draw_transform_eps(spec, rng);
    }

    DisplacementField field;
    if (spec.kind == TransformKind::elastic) {
        field = make_displacement_field(family.base.width, family.base.height, spec.elastic_sigma, spec.seed);
    }
    family.images.resize(n);
    parallel_for(n, threads, [&](std::size_t i) {
        family.images[i] = {static_cast<int>(i),
                            render_real_class(family.base, use_canny, spec, family.eps[i], static_cast<int>(i), &field)};
    });
    return family;
}

}  // namespace pfrac
