#include "pfrac/liep.hpp"

#include <cmath>
#include <optional>

#include "pfrac/errors.hpp"
#include "pfrac/parallel.hpp"
#include "pfrac/rng.hpp"

namespace pfrac {

double Perturbation::hypercube_volume() const {
    return std::pow(delta, static_cast<double>(eps.size()));
}

bool Perturbation::contained() const noexcept {
    const double half = 0.5 * delta;
    for (double v : eps) {
        if (!(v >= -half && v <= half)) {
            return false;
        }
    }
    return true;
}

Perturbation draw_perturbation(std::size_t n_maps, double delta, Rng& rng) {
    Perturbation p;
    p.delta = delta;
    p.eps.resize(6 * n_maps);
    for (auto& v : p.eps) {
        v = delta * (rng.uniform() - 0.5);
    }
    return p;
}

PerturbedFamily sample_family(const IfsCode& base, double delta, int count, std::uint64_t seed) {
    base.validate();
    if (count < 1) {
        throw InvalidParams("family size L must be >= 1");
    }
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw InvalidParams("perturbation degree must be finite and >= 0");
    }
    PerturbedFamily family;
    family.base = base;
    family.delta = delta;
    family.seed = seed;
    family.perturbations.reserve(static_cast<std::size_t>(count));
    family.perturbations.push_back({std::vector<double>(6 * base.size(), 0.0), delta});
    Rng rng(derive_seed(seed, stream::family));
    for (int i = 1; i < count; ++i) {
        family.perturbations.push_back(draw_perturbation(base.size(), delta, rng));
    }
    return family;
}

IfsCode apply_perturbation(const IfsCode& base, const Perturbation& p) {
    if (p.eps.size() != 6 * base.size()) {
        throw InvalidParams("perturbation has " + std::to_string(p.eps.size()) +
                            " components, code needs " + std::to_string(6 * base.size()));
    }
    IfsCode out;
    out.maps = base.maps;
    for (std::size_t j = 0; j < out.maps.size(); ++j) {
        const double* e = p.eps.data() + 6 * j;
        auto& m = out.maps[j];
        m.a += e[0];
        m.b += e[1];
        m.e += e[2];
        m.c += e[3];
        m.d += e[4];
        m.f += e[5];
    }
    out.probs = determinant_probs(out.maps);
    return out;
}

int FamilyRender::total_resamples() const noexcept {
    int total = 0;
    for (int r : resample_counts) {
        total += r;
    }
    return total;
}

FamilyRender render_family(const PerturbedFamily& family, const RenderConfig& cfg, unsigned threads) {
    cfg.validate();
    const std::size_t n = family.size();
    FamilyRender out;
    out.images.resize(n);
    out.perturbations = family.perturbations;
    out.resample_counts.assign(n, 0);
    std::vector<std::optional<std::string>> failures(n);

    parallel_for(n, threads, [&](std::size_t i) {
        Perturbation p = family.perturbations[i];
        Rng resample_rng(derive_seed(derive_seed(family.seed, stream::resample), i));
        for (int attempt = 0; attempt < max_resample_attempts; ++attempt) {
            try {
                out.images[i] = {static_cast<int>(i), render(apply_perturbation(family.base, p), cfg)};
                out.perturbations[i] = std::move(p);
                out.resample_counts[i] = attempt;
                return;
            } catch (const Diverged& e) {
                failures[i] = e.what();
            } catch (const DegenerateExtent& e) {
                failures[i] = e.what();
            }
            if (i == 0) {
                return;  // class 0 is the base code itself; never substituted
            }
            p = draw_perturbation(family.base.size(), family.delta, resample_rng);
        }
    });

    for (std::size_t i = 0; i < n; ++i) {
        if (out.images[i].image.pixels.empty()) {
            throw ResampleExhausted(i, "class " + std::to_string(i) + " failed " +
                                           std::to_string(i == 0 ? 1 : max_resample_attempts) +
                                           " attempts; last error: " + failures[i].value_or("?"));
        }
    }
    return out;
}

}  // namespace pfrac
