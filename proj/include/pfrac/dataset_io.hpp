#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pfrac/ifs.hpp"
#include "pfrac/image.hpp"
#include "pfrac/json_canonical.hpp"
#include "pfrac/noise.hpp"
#include "pfrac/render.hpp"
#include "pfrac/shape_aug.hpp"

namespace pfrac {

inline constexpr int manifest_format_version = 1;

enum class GeneratorKind { fractal, gaussian, uniform, real_affine, real_elastic, real_polynomial };

std::string to_string(GeneratorKind kind);
GeneratorKind generator_kind_from_string(const std::string& name);

struct FractalSource {
    IfsCode code;
    std::uint64_t code_seed = 0;  ///< seed the code was searched with
    RenderConfig render;

    friend bool operator==(const FractalSource&, const FractalSource&) = default;
};

struct NoiseSource {
    NoiseKind kind = NoiseKind::gaussian;
    std::array<double, 2> params{0.5, 0.15};
    int width = 256;
    int height = 256;

    friend bool operator==(const NoiseSource&, const NoiseSource&) = default;
};

struct RealImageSource {
    std::string input;  ///< path of the RGB source image
    bool canny = false;
    CannyThresholds thresholds;
    TransformKind transform = TransformKind::affine;
    double elastic_alpha = 0.08;
    double elastic_sigma = 8.0;

    friend bool operator==(const RealImageSource&, const RealImageSource&) = default;
};

struct ManifestEntry {
    int class_index = 0;
    std::vector<double> eps;
    std::string file;  ///< relative to the dataset directory
    int resamples = 0;

    friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct DatasetManifest {
    int format_version = manifest_format_version;
    std::variant<FractalSource, NoiseSource, RealImageSource> source;
    double delta = 0.0;
    int count = 0;  ///< L
    std::uint64_t seed = 0;
    std::vector<ManifestEntry> entries;

    GeneratorKind generator() const;

    /// Throws CorruptManifest when entries do not cover 0..L-1 exactly once,
    /// filenames repeat, or eps lengths do not fit the generator.
    void validate() const;

    friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

/// NoiseSpec / TransformSpec implied by a manifest's source, delta and seed.
NoiseSpec noise_spec(const DatasetManifest& m);
TransformSpec transform_spec(const DatasetManifest& m);

/// Canonical JSON (fixed key order, 17 significant digits).
std::string serialize_manifest(const DatasetManifest& m);
DatasetManifest parse_manifest(const std::string& text);

/// images/{class:06}.png
std::string image_filename(int class_index);

struct Timings {
    double search_seconds = 0.0;
    double render_seconds = 0.0;
    double total_seconds = 0.0;
};

struct WriteSummary {
    std::size_t images_written = 0;
    Timings timings;
    Json to_json() const;
};

/// Writes images/ then manifest.json (the commit point). `timings.total`
/// is extended by the time spent writing.
WriteSummary write_dataset(std::span<const LabeledImage> images, const DatasetManifest& manifest,
                           const std::filesystem::path& out_dir, Timings timings = {}, unsigned threads = 0);

struct Dataset {
    DatasetManifest manifest;
    std::vector<GrayImage> images;  ///< indexed by class
};

/// Throws CorruptManifest, MissingImage, VersionMismatch or IoFailure.
Dataset read_dataset(const std::filesystem::path& dir);

/// Re-renders every class from the manifest alone (recorded eps, no resampling).
std::vector<GrayImage> regenerate_images(const DatasetManifest& manifest, unsigned threads = 0);

/// Writes out_dir/montage.png from the first k images.
void write_montage(std::span<const GrayImage> images, std::size_t k, const std::filesystem::path& out_path);

}  // namespace pfrac
