#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pfrac/image.hpp"
#include "pfrac/json_canonical.hpp"

namespace pfrac {

/// One-hidden-layer classifier: input -> ReLU(hidden) -> softmax(classes).
/// theta = [W1 (hidden x input, row-major) | b1 | W2 (classes x hidden) | b2].
class ProbeModel {
public:
    ProbeModel() = default;
    ProbeModel(int inputs, int hidden, int classes);  ///< all parameters zero

    /// Gaussian init: W1 ~ N(0, 2/inputs), W2 ~ N(0, 1/hidden), biases zero.
    static ProbeModel random(int inputs, int hidden, int classes, std::uint64_t seed);

    static std::size_t parameter_count(int inputs, int hidden, int classes) noexcept;

    int inputs() const noexcept { return inputs_; }
    int hidden() const noexcept { return hidden_; }
    int classes() const noexcept { return classes_; }

    std::span<double> theta() noexcept { return theta_; }
    std::span<const double> theta() const noexcept { return theta_; }

    std::vector<double> logits(std::span<const double> x) const;
    std::vector<double> probabilities(std::span<const double> x) const;
    int predict(std::span<const double> x) const;

    friend bool operator==(const ProbeModel&, const ProbeModel&) = default;

private:
    int inputs_ = 0;
    int hidden_ = 0;
    int classes_ = 0;
    std::vector<double> theta_;
};

/// Numerically stable softmax (max subtraction).
std::vector<double> softmax(std::span<const double> logits);

struct Sample {
    std::vector<double> x;
    int label = 0;
};

/// Area-averaged down-sample to resolution x resolution, scaled to [0, 1].
std::vector<double> image_to_input(const GrayImage& img, int resolution);

struct LossAndGrad {
    double loss = 0.0;
    std::vector<double> grad;  ///< same layout as theta
};

/// Mean negative log-likelihood over the batch and its gradient.
LossAndGrad lpce_loss(const ProbeModel& model, std::span<const Sample> batch);
LossAndGrad lpce_loss(const ProbeModel& model, std::span<const LabeledImage> batch, int resolution);

/// Loss only; used by finite-difference checks.
double lpce_value(const ProbeModel& model, std::span<const Sample> batch);

struct TrainConfig {
    int epochs = 30;
    int batch_size = 32;
    double learning_rate = 0.1;
    int resolution = 64;
    int hidden = 64;
    std::uint64_t seed = 0;
    double holdout_fraction = 0.25;  ///< share of crop views held out (crop-view datasets)

    void validate() const;
};

struct TrainResult {
    ProbeModel model;
    double holdout_accuracy = 0.0;
    std::vector<double> epoch_losses;  ///< mean training loss per epoch
};

double accuracy(const ProbeModel& model, std::span<const Sample> samples);

/// Deterministic mini-batch SGD. Throws InvalidParams with fewer than two classes.
TrainResult train(std::span<const Sample> train_set, std::span<const Sample> holdout, int classes,
                  const TrainConfig& cfg);

struct GradCheckReport {
    double max_relative_error = 0.0;
    std::size_t worst_parameter = 0;
    std::size_t parameters_checked = 0;
};

/// Central differences (step h) against lpce_loss on the given model and batch.
GradCheckReport compare_gradients(const ProbeModel& model, std::span<const Sample> batch, double h = 1e-5);

/// Random small model and batch from `seed`; throws GradMismatch when the
/// worst relative error is not below `tolerance`.
GradCheckReport grad_check(std::uint64_t seed, double tolerance = 1e-3);

struct ProbeReport {
    double accuracy = 0.0;
    double chance = 0.0;
    double ratio = 0.0;
    int epochs = 0;
    std::uint64_t seed = 0;

    Json to_json() const;
};

/// Binary model file: 8-byte magic, u64 header length, JSON header,
/// then the parameters as little-endian float64.
void write_model(const std::filesystem::path& path, const ProbeModel& model, const Json& config);
ProbeModel read_model(const std::filesystem::path& path, Json* config = nullptr);

}  // namespace pfrac
