#include "pfrac/probe_data.hpp"

#include <algorithm>
#include <cmath>

#include "pfrac/liep.hpp"
#include "pfrac/parallel.hpp"
#include "pfrac/rng.hpp"

namespace pfrac {

namespace {

int crop_side(int resolution) { return std::max(1, static_cast<int>(std::lround(resolution * 56.0 / 64.0))); }

}  // namespace

std::vector<double> crop_view(const std::vector<double>& input, int resolution, int x0, int y0) {
    const int side = crop_side(resolution);
    const auto r = static_cast<std::size_t>(resolution);
    std::vector<double> out(r * r);
    const double step = resolution > 1 ? static_cast<double>(side - 1) / (resolution - 1) : 0.0;
    auto at = [&](int x, int y) { return input[static_cast<std::size_t>(y) * r + static_cast<std::size_t>(x)]; };
    for (int y = 0; y < resolution; ++y) {
        const double sy = y0 + y * step;
        const int iy = std::min(static_cast<int>(sy), resolution - 1);
        const int iy1 = std::min(iy + 1, resolution - 1);
        const double fy = sy - iy;
        for (int x = 0; x < resolution; ++x) {
            const double sx = x0 + x * step;
            const int ix = std::min(static_cast<int>(sx), resolution - 1);
            const int ix1 = std::min(ix + 1, resolution - 1);
            const double fx = sx - ix;
            const double top = (1 - fx) * at(ix, iy) + fx * at(ix1, iy);
            const double bottom = (1 - fx) * at(ix, iy1) + fx * at(ix1, iy1);
            out[static_cast<std::size_t>(y) * r + static_cast<std::size_t>(x)] = (1 - fy) * top + fy * bottom;
        }
    }
    return out;
}

ProbeSets make_probe_sets(const Dataset& dataset, const TrainConfig& cfg, unsigned threads) {
    cfg.validate();
    const auto& m = dataset.manifest;
    const auto n = dataset.images.size();
    ProbeSets sets;
    sets.classes = static_cast<int>(n);

    if (const auto* f = std::get_if<FractalSource>(&m.source)) {
        sets.holdout_kind = "rerender";
        sets.train.resize(n);
        sets.holdout.resize(n * rerender_views_per_class);
        parallel_for(n, threads, [&](std::size_t i) {
            const auto& e = m.entries[i];
            const auto label = e.class_index;
            sets.train[i] = {image_to_input(dataset.images[static_cast<std::size_t>(label)], cfg.resolution), label};
            const auto code = apply_perturbation(f->code, Perturbation{e.eps, m.delta});
            for (int v = 0; v < rerender_views_per_class; ++v) {
                RenderConfig rerender = f->render;
                rerender.rng_seed = derive_seed(derive_seed(f->render.rng_seed, stream::holdout), v);
                sets.holdout[i * rerender_views_per_class + v] = {image_to_input(render(code, rerender), cfg.resolution),
                                                                  label};
            }
        });
        return sets;
    }

    sets.holdout_kind = "crops";
    const int held = std::clamp(static_cast<int>(std::lround(crop_views_per_class * cfg.holdout_fraction)), 1,
                                crop_views_per_class - 1);
    const int side = crop_side(cfg.resolution);
    std::vector<std::vector<Sample>> train(n), holdout(n);
    parallel_for(n, threads, [&](std::size_t i) {
        const auto input = image_to_input(dataset.images[i], cfg.resolution);
        Rng rng(derive_seed(derive_seed(cfg.seed, stream::holdout), i));
        for (int v = 0; v < crop_views_per_class; ++v) {
            const auto span = static_cast<std::uint64_t>(cfg.resolution - side + 1);
            const int x0 = static_cast<int>(rng.below(span));
            const int y0 = static_cast<int>(rng.below(span));
            Sample s{crop_view(input, cfg.resolution, x0, y0), static_cast<int>(i)};
            (v < crop_views_per_class - held ? train[i] : holdout[i]).push_back(std::move(s));
        }
    });
    for (std::size_t i = 0; i < n; ++i) {
        std::move(train[i].begin(), train[i].end(), std::back_inserter(sets.train));
        std::move(holdout[i].begin(), holdout[i].end(), std::back_inserter(sets.holdout));
    }
    return sets;
}

ProbeRun run_probe(const Dataset& dataset, const TrainConfig& cfg, unsigned threads) {
    const auto sets = make_probe_sets(dataset, cfg, threads);
    ProbeRun run;
    run.result = train(sets.train, sets.holdout, sets.classes, cfg);
    run.report.accuracy = run.result.holdout_accuracy;
    run.report.chance = 1.0 / sets.classes;
    run.report.ratio = run.report.accuracy / run.report.chance;
    run.report.epochs = cfg.epochs;
    run.report.seed = cfg.seed;
    return run;
}

}  // namespace pfrac
