#pragma once

#include <string>
#include <vector>

#include "pfrac/dataset_io.hpp"
#include "pfrac/probe.hpp"

namespace pfrac {

/// Training and holdout samples for one dataset.
///
/// Fractal classes are held out by re-rendering each class's perturbed code
/// with other chaos-game seeds (rerender_views_per_class of them), which tests recognition of the shape
/// rather than of the exact pixels. Noise and real-image classes have one
/// image each, so both sets are random crop views (56/64 of the side,
/// resized back), split by TrainConfig::holdout_fraction.
struct ProbeSets {
    std::vector<Sample> train;
    std::vector<Sample> holdout;
    int classes = 0;
    std::string holdout_kind;  ///< "rerender" or "crops"
};

inline constexpr int crop_views_per_class = 8;
inline constexpr int rerender_views_per_class = 4;

/// Crop of side round(resolution * 56 / 64) at (x0, y0), bilinearly resized to resolution^2.
std::vector<double> crop_view(const std::vector<double>& input, int resolution, int x0, int y0);

ProbeSets make_probe_sets(const Dataset& dataset, const TrainConfig& cfg, unsigned threads = 0);

struct ProbeRun {
    TrainResult result;
    ProbeReport report;
};

ProbeRun run_probe(const Dataset& dataset, const TrainConfig& cfg, unsigned threads = 0);

}  // namespace pfrac
