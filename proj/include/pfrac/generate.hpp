#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pfrac/dataset_io.hpp"

namespace pfrac {

/// End-to-end construction of the datasets the CLI exposes. Every random
/// choice derives from `seed`.
struct GeneratedDataset {
    DatasetManifest manifest;
    std::vector<LabeledImage> images;
    Timings timings;
};

struct FractalDatasetParams {
    std::optional<IfsDocument> code;  ///< searched for when empty
    int n_maps = default_map_count;
    SigmaTarget sigma{3.5, 1e-6};
    double delta = 0.1;
    int count = 1000;
    std::uint64_t seed = 0;
    RenderConfig render;  ///< rng_seed is replaced by `seed`
    unsigned threads = 0;
};

GeneratedDataset generate_fractal_dataset(const FractalDatasetParams& params);

GeneratedDataset generate_noise_dataset(const NoiseSpec& spec, int count, int width, int height,
                                        unsigned threads = 0);

struct RealDatasetParams {
    std::string input;
    bool canny = false;
    CannyThresholds thresholds;
    TransformSpec transform;  ///< transform.seed is the dataset seed
    int count = 1000;
    unsigned threads = 0;
};

GeneratedDataset generate_real_dataset(const RealDatasetParams& params);

}  // namespace pfrac
