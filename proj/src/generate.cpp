#include "pfrac/generate.hpp"

#include <chrono>

#include "pfrac/liep.hpp"
#include "pfrac/png_io.hpp"

namespace pfrac {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename Eps>
std::vector<ManifestEntry> make_entries(const std::vector<Eps>& eps, const std::vector<int>& resamples) {
    std::vector<ManifestEntry> entries(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        entries[i].class_index = static_cast<int>(i);
        entries[i].eps.assign(eps[i].begin(), eps[i].end());
        entries[i].file = image_filename(static_cast<int>(i));
        entries[i].resamples = resamples.empty() ? 0 : resamples[i];
    }
    return entries;
}

}  // namespace

GeneratedDataset generate_fractal_dataset(const FractalDatasetParams& params) {
    GeneratedDataset out;
    auto start = Clock::now();
    IfsDocument code;
    if (params.code) {
        code = *params.code;
        code.code.validate();
    } else {
        std::vector<std::uint64_t> seeds;
        code.code = search_category_set(1, params.n_maps, params.sigma, params.seed, &seeds).front();
        code.seed = seeds.front();
    }
    out.timings.search_seconds = seconds_since(start);

    start = Clock::now();
    RenderConfig render = params.render;
    render.rng_seed = params.seed;
    const auto family = sample_family(code.code, params.delta, params.count, params.seed);
    auto rendered = render_family(family, render, params.threads);
    out.timings.render_seconds = seconds_since(start);
    out.timings.total_seconds = out.timings.search_seconds + out.timings.render_seconds;

    out.manifest.source = FractalSource{code.code, code.seed, render};
    out.manifest.delta = params.delta;
    out.manifest.count = params.count;
    out.manifest.seed = params.seed;
    std::vector<std::vector<double>> eps;
    eps.reserve(rendered.perturbations.size());
    for (auto& p : rendered.perturbations) {
        eps.push_back(std::move(p.eps));
    }
    out.manifest.entries = make_entries(eps, rendered.resample_counts);
    out.images = std::move(rendered.images);
    return out;
}

GeneratedDataset generate_noise_dataset(const NoiseSpec& spec, int count, int width, int height,
                                        unsigned threads) {
    GeneratedDataset out;
    const auto start = Clock::now();
    auto family = render_noise_family(spec, count, width, height, threads);
    out.timings.render_seconds = seconds_since(start);
    out.timings.total_seconds = out.timings.render_seconds;
    out.manifest.source = NoiseSource{spec.kind, spec.params, width, height};
    out.manifest.delta = spec.delta;
    out.manifest.count = count;
    out.manifest.seed = spec.seed;
    out.manifest.entries = make_entries(family.eps, family.resample_counts);
    out.images = std::move(family.images);
    return out;
}

GeneratedDataset generate_real_dataset(const RealDatasetParams& params) {
    GeneratedDataset out;
    const auto start = Clock::now();
    const auto rgb = read_rgb_image(params.input);
    auto family = build_real_family(rgb, params.canny, params.transform, params.count, params.thresholds,
                                    params.threads);
    out.timings.render_seconds = seconds_since(start);
    out.timings.total_seconds = out.timings.render_seconds;
    RealImageSource src;
    src.input = std::filesystem::absolute(params.input).string();
    src.canny = params.canny;
    src.thresholds = params.thresholds;
    src.transform = params.transform.kind;
    src.elastic_alpha = params.transform.elastic_alpha;
    src.elastic_sigma = params.transform.elastic_sigma;
    out.manifest.source = std::move(src);
    out.manifest.delta = params.transform.delta;
    out.manifest.count = params.count;
    out.manifest.seed = params.transform.seed;
    out.manifest.entries = make_entries(family.eps, {});
    out.images = std::move(family.images);
    return out;
}

}  // namespace pfrac
