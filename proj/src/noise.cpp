#include "pfrac/noise.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "pfrac/errors.hpp"
#include "pfrac/parallel.hpp"
#include "pfrac/rng.hpp"

namespace pfrac {

std::string to_string(NoiseKind kind) { return kind == NoiseKind::gaussian ? "gaussian" : "uniform"; }

NoiseKind noise_kind_from_string(const std::string& name) {
    if (name == "gaussian") {
        return NoiseKind::gaussian;
    }
    if (name == "uniform") {
        return NoiseKind::uniform;
    }
    throw InvalidParams("unknown noise kind '" + name + "'");
}

NoiseSpec NoiseSpec::gaussian(double mean, double sd, double delta, std::uint64_t seed) {
    return {NoiseKind::gaussian, {mean, sd}, delta, seed};
}

NoiseSpec NoiseSpec::uniform(double low, double high, double delta, std::uint64_t seed) {
    return {NoiseKind::uniform, {low, high}, delta, seed};
}

namespace {

void check_params(NoiseKind kind, const std::array<double, 2>& p) {
    if (!std::isfinite(p[0]) || !std::isfinite(p[1])) {
        throw InvalidParams("noise parameters must be finite");
    }
    if (kind == NoiseKind::gaussian && p[1] < 0.0) {
        throw InvalidParams("gaussian standard deviation is negative");
    }
    if (kind == NoiseKind::uniform && p[0] > p[1]) {
        throw InvalidParams("uniform low bound exceeds high bound");
    }
}

}  // namespace

void NoiseSpec::validate() const {
    check_params(kind, params);
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw InvalidParams("perturbation degree must be finite and >= 0");
    }
}

std::array<double, 2> perturbed_params(const NoiseSpec& spec, const std::array<double, 2>& eps) {
    const std::array<double, 2> p{spec.params[0] + eps[0], spec.params[1] + eps[1]};
    check_params(spec.kind, p);
    return p;
}

GrayImage render_noise_image(NoiseKind kind, const std::array<double, 2>& params, int width, int height,
                             std::uint64_t seed) {
    check_params(kind, params);
    GrayImage img(width, height);
    Rng rng(derive_seed(seed, stream::pixels));
    for (auto& px : img.pixels) {
        const double v = kind == NoiseKind::gaussian ? params[0] + params[1] * rng.normal()
                                                     : params[0] + (params[1] - params[0]) * rng.uniform();
        px = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    }
    return img;
}

NoiseFamily render_noise_family(const NoiseSpec& spec, int count, int width, int height, unsigned threads) {
    spec.validate();
    if (count < 1) {
        throw InvalidParams("family size L must be >= 1");
    }
    if (width < 1 || height < 1) {
        throw InvalidParams("noise image size must be positive");
    }
    const auto n = static_cast<std::size_t>(count);
    NoiseFamily out;
    out.images.resize(n);
    out.eps.assign(n, {0.0, 0.0});
    out.resample_counts.assign(n, 0);

    Rng draw(derive_seed(spec.seed, stream::family));
    for (std::size_t i = 1; i < n; ++i) {
        out.eps[i] = {spec.delta * (draw.uniform() - 0.5), spec.delta * (draw.uniform() - 0.5)};
    }

    std::vector<std::optional<std::string>> failures(n);
    parallel_for(n, threads, [&](std::size_t i) {
        Rng resample_rng(derive_seed(derive_seed(spec.seed, stream::resample), i));
        auto eps = out.eps[i];
        for (int attempt = 0; attempt < 100; ++attempt) {
            try {
                const auto params = perturbed_params(spec, eps);
                out.images[i] = {static_cast<int>(i), render_noise_image(spec.kind, params, width, height, spec.seed)};
                out.eps[i] = eps;
                out.resample_counts[i] = attempt;
                return;
            } catch (const InvalidParams& e) {
                failures[i] = e.what();
            }
            eps = {spec.delta * (resample_rng.uniform() - 0.5), spec.delta * (resample_rng.uniform() - 0.5)};
        }
    });
    for (std::size_t i = 0; i < n; ++i) {
        if (out.images[i].image.pixels.empty()) {
            throw ResampleExhausted(i, "noise class " + std::to_string(i) +
                                           " has no valid parameters: " + failures[i].value_or("?"));
        }
    }
    return out;
}

}  // namespace pfrac
