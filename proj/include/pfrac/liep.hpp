#pragma once

#include <cstdint>
#include <vector>

#include "pfrac/ifs.hpp"
#include "pfrac/image.hpp"
#include "pfrac/render.hpp"
#include "pfrac/rng.hpp"

namespace pfrac {

/// Offset added to every affine coefficient of a code; its class label is
/// its position in the family. Layout per map j: eps[6j..6j+5] =
/// (a, b, e, c, d, f), i.e. the rows of the 2x3 matrix [A | t].
struct Perturbation {
    std::vector<double> eps;
    double delta = 0.0;

    std::size_t map_count() const noexcept { return eps.size() / 6; }

    /// Volume of the hypercube [-delta/2, delta/2]^(6N).
    double hypercube_volume() const;

    /// True when every component lies in [-delta/2, delta/2].
    bool contained() const noexcept;

    friend bool operator==(const Perturbation&, const Perturbation&) = default;
};

struct PerturbedFamily {
    IfsCode base;
    double delta = 0.0;
    std::uint64_t seed = 0;
    std::vector<Perturbation> perturbations;  ///< index 0 is always the zero vector

    std::size_t size() const noexcept { return perturbations.size(); }
};

/// Draws one perturbation for a code of `n_maps` maps: eps = delta * (u - 1/2), u ~ U[0,1)^(6N).
Perturbation draw_perturbation(std::size_t n_maps, double delta, Rng& rng);

/// L perturbations; entry 0 is zero, entries 1..L-1 i.i.d. uniform on the hypercube.
PerturbedFamily sample_family(const IfsCode& base, double delta, int count, std::uint64_t seed);

/// Adds eps to the coefficients and re-derives probabilities from the
/// perturbed determinants.
IfsCode apply_perturbation(const IfsCode& base, const Perturbation& p);

inline constexpr int max_resample_attempts = 100;

struct FamilyRender {
    std::vector<LabeledImage> images;
    std::vector<Perturbation> perturbations;  ///< final, after any resampling
    std::vector<int> resample_counts;

    int total_resamples() const noexcept;
};

/// Renders every class with one shared chaos-game seed (cfg.rng_seed), so
/// images differ only through their perturbation. An index whose render
/// diverges or degenerates gets a fresh eps from its own derived stream,
/// up to max_resample_attempts times; then ResampleExhausted.
/// Output is independent of `threads`.
FamilyRender render_family(const PerturbedFamily& family, const RenderConfig& cfg, unsigned threads = 0);

}  // namespace pfrac
