#include "pfrac/probe.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "pfrac/errors.hpp"
#include "pfrac/kernels.hpp"
#include "pfrac/rng.hpp"

namespace pfrac {
namespace {

struct Offsets {
    std::size_t w1, b1, w2, b2, total;
};

Offsets offsets(int inputs, int hidden, int classes) {
    const auto n = static_cast<std::size_t>(inputs);
    const auto h = static_cast<std::size_t>(hidden);
    const auto k = static_cast<std::size_t>(classes);
    Offsets o{};
    o.w1 = 0;
    o.b1 = n * h;
    o.w2 = o.b1 + h;
    o.b2 = o.w2 + h * k;
    o.total = o.b2 + k;
    return o;
}

}  // namespace

ProbeModel::ProbeModel(int inputs, int hidden, int classes)
    : inputs_(inputs), hidden_(hidden), classes_(classes) {
    if (inputs < 1 || hidden < 1 || classes < 1) {
        throw InvalidParams("probe layer sizes must be positive");
    }
    theta_.assign(parameter_count(inputs, hidden, classes), 0.0);
}

std::size_t ProbeModel::parameter_count(int inputs, int hidden, int classes) noexcept {
    return offsets(inputs, hidden, classes).total;
}

ProbeModel ProbeModel::random(int inputs, int hidden, int classes, std::uint64_t seed) {
    ProbeModel model(inputs, hidden, classes);
    const auto o = offsets(inputs, hidden, classes);
    Rng rng(derive_seed(seed, stream::init));
    const double s1 = std::sqrt(2.0 / inputs);
    const double s2 = std::sqrt(1.0 / hidden);
    for (std::size_t i = o.w1; i < o.b1; ++i) {
        model.theta_[i] = s1 * rng.normal();
    }
    for (std::size_t i = o.w2; i < o.b2; ++i) {
        model.theta_[i] = s2 * rng.normal();
    }
    return model;
}

std::vector<double> softmax(std::span<const double> logits) {
    std::vector<double> p(logits.begin(), logits.end());
    const double top = *std::max_element(p.begin(), p.end());
    double total = 0.0;
    for (auto& v : p) {
        v = std::exp(v - top);
        total += v;
    }
    for (auto& v : p) {
        v /= total;
    }
    return p;
}

namespace {

// Forward pass keeping the intermediates backprop needs.
struct Activations {
    std::vector<double> pre;     // hidden pre-activations
    std::vector<double> hidden;  // ReLU outputs
    std::vector<double> logits;
};

Activations forward(const ProbeModel& m, std::span<const double> x) {
    const auto o = offsets(m.inputs(), m.hidden(), m.classes());
    const auto theta = m.theta();
    const auto n = static_cast<std::size_t>(m.inputs());
    const auto h = static_cast<std::size_t>(m.hidden());
    Activations a;
    a.pre.resize(h);
    a.hidden.resize(h);
    for (std::size_t j = 0; j < h; ++j) {
        a.pre[j] = kernels::dot_f64(theta.subspan(o.w1 + j * n, n), x) + theta[o.b1 + j];
        a.hidden[j] = a.pre[j] > 0.0 ? a.pre[j] : 0.0;
    }
    a.logits.resize(static_cast<std::size_t>(m.classes()));
    for (std::size_t k = 0; k < a.logits.size(); ++k) {
        a.logits[k] = kernels::dot_f64(theta.subspan(o.w2 + k * h, h), a.hidden) + theta[o.b2 + k];
    }
    return a;
}

// -log softmax(logits)[label], via log-sum-exp.
double nll(std::span<const double> logits, int label) {
    const double top = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (double v : logits) {
        total += std::exp(v - top);
    }
    return top + std::log(total) - logits[static_cast<std::size_t>(label)];
}

void check_batch(const ProbeModel& model, std::span<const Sample> batch) {
    if (batch.empty()) {
        throw InvalidParams("empty batch");
    }
    for (const auto& s : batch) {
        if (s.x.size() != static_cast<std::size_t>(model.inputs())) {
            throw InvalidParams("sample has " + std::to_string(s.x.size()) + " inputs, model expects " +
                                std::to_string(model.inputs()));
        }
        if (s.label < 0 || s.label >= model.classes()) {
            throw InvalidParams("label " + std::to_string(s.label) + " out of range");
        }
    }
}

}  // namespace

std::vector<double> ProbeModel::logits(std::span<const double> x) const { return forward(*this, x).logits; }

std::vector<double> ProbeModel::probabilities(std::span<const double> x) const { return softmax(logits(x)); }

int ProbeModel::predict(std::span<const double> x) const {
    const auto l = logits(x);
    return static_cast<int>(std::max_element(l.begin(), l.end()) - l.begin());
}

std::vector<double> image_to_input(const GrayImage& img, int resolution) {
    if (resolution < 1 || img.width < 1 || img.height < 1) {
        throw InvalidParams("image_to_input: bad sizes");
    }
    const auto r = static_cast<std::size_t>(resolution);
    std::vector<double> out(r * r, 0.0);
    if (img.width >= resolution && img.height >= resolution) {
        std::vector<int> count(r * r, 0);
        for (int y = 0; y < img.height; ++y) {
            const auto cy = static_cast<std::size_t>(y) * r / static_cast<std::size_t>(img.height);
            for (int x = 0; x < img.width; ++x) {
                const auto cx = static_cast<std::size_t>(x) * r / static_cast<std::size_t>(img.width);
                out[cy * r + cx] += img.at(x, y);
                ++count[cy * r + cx];
            }
        }
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] /= 255.0 * count[i];
        }
    } else {
        for (std::size_t cy = 0; cy < r; ++cy) {
            for (std::size_t cx = 0; cx < r; ++cx) {
                const auto x = static_cast<int>(cx * static_cast<std::size_t>(img.width) / r);
                const auto y = static_cast<int>(cy * static_cast<std::size_t>(img.height) / r);
                out[cy * r + cx] = img.at(x, y) / 255.0;
            }
        }
    }
    return out;
}

LossAndGrad lpce_loss(const ProbeModel& model, std::span<const Sample> batch) {
    check_batch(model, batch);
    const auto o = offsets(model.inputs(), model.hidden(), model.classes());
    const auto theta = model.theta();
    const auto n = static_cast<std::size_t>(model.inputs());
    const auto h = static_cast<std::size_t>(model.hidden());
    const auto k = static_cast<std::size_t>(model.classes());

    LossAndGrad out;
    out.grad.assign(o.total, 0.0);
    std::span<double> grad(out.grad);
    std::vector<double> dhidden(h);
    for (const auto& s : batch) {
        const auto a = forward(model, s.x);
        out.loss += nll(a.logits, s.label);

        auto dlogits = softmax(a.logits);
        dlogits[static_cast<std::size_t>(s.label)] -= 1.0;

        std::fill(dhidden.begin(), dhidden.end(), 0.0);
        for (std::size_t c = 0; c < k; ++c) {
            kernels::axpy_f64(dlogits[c], a.hidden, grad.subspan(o.w2 + c * h, h));
            kernels::axpy_f64(dlogits[c], theta.subspan(o.w2 + c * h, h), dhidden);
            grad[o.b2 + c] += dlogits[c];
        }
        for (std::size_t j = 0; j < h; ++j) {
            if (a.pre[j] <= 0.0) {
                continue;
            }
            kernels::axpy_f64(dhidden[j], s.x, grad.subspan(o.w1 + j * n, n));
            grad[o.b1 + j] += dhidden[j];
        }
    }
    const double scale = 1.0 / static_cast<double>(batch.size());
    out.loss *= scale;
    for (auto& g : out.grad) {
        g *= scale;
    }
    return out;
}

LossAndGrad lpce_loss(const ProbeModel& model, std::span<const LabeledImage> batch, int resolution) {
    std::vector<Sample> samples;
    samples.reserve(batch.size());
    for (const auto& item : batch) {
        samples.push_back({image_to_input(item.image, resolution), item.label});
    }
    return lpce_loss(model, samples);
}

double lpce_value(const ProbeModel& model, std::span<const Sample> batch) {
    check_batch(model, batch);
    double loss = 0.0;
    for (const auto& s : batch) {
        loss += nll(forward(model, s.x).logits, s.label);
    }
    return loss / static_cast<double>(batch.size());
}

void TrainConfig::validate() const {
    if (epochs < 1 || batch_size < 1 || resolution < 1 || hidden < 1) {
        throw InvalidParams("training counts must be >= 1");
    }
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw InvalidParams("learning rate must be positive");
    }
    if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
        throw InvalidParams("holdout fraction must lie in (0, 1)");
    }
}

double accuracy(const ProbeModel& model, std::span<const Sample> samples) {
    if (samples.empty()) {
        return 0.0;
    }
    std::size_t hits = 0;
    for (const auto& s : samples) {
        hits += model.predict(s.x) == s.label ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(samples.size());
}

TrainResult train(std::span<const Sample> train_set, std::span<const Sample> holdout, int classes,
                  const TrainConfig& cfg) {
    cfg.validate();
    if (classes < 2) {
        throw InvalidParams("training needs at least two classes");
    }
    if (train_set.empty()) {
        throw InvalidParams("empty training set");
    }
    const auto inputs = static_cast<int>(train_set.front().x.size());
    TrainResult result;
    result.model = ProbeModel::random(inputs, cfg.hidden, classes, cfg.seed);

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle(derive_seed(cfg.seed, stream::shuffle));
    std::vector<Sample> batch;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[shuffle.below(i)]);
        }
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            batch.clear();
            for (std::size_t i = start; i < stop; ++i) {
                batch.push_back(train_set[order[i]]);
            }
            const auto step = lpce_loss(result.model, batch);
            epoch_loss += step.loss * static_cast<double>(batch.size());
            kernels::axpy_f64(-cfg.learning_rate, step.grad, result.model.theta());
        }
        result.epoch_losses.push_back(epoch_loss / static_cast<double>(order.size()));
    }
    result.holdout_accuracy = accuracy(result.model, holdout);
    return result;
}

GradCheckReport compare_gradients(const ProbeModel& model, std::span<const Sample> batch, double h) {
    const auto analytic = lpce_loss(model, batch).grad;
    ProbeModel probe = model;
    auto theta = probe.theta();
    GradCheckReport report;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double saved = theta[i];
        theta[i] = saved + h;
        const double up = lpce_value(probe, batch);
        theta[i] = saved - h;
        const double down = lpce_value(probe, batch);
        theta[i] = saved;
        const double numeric = (up - down) / (2.0 * h);
        const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-8});
        const double rel = std::abs(analytic[i] - numeric) / denom;
        if (rel > report.max_relative_error) {
            report.max_relative_error = rel;
            report.worst_parameter = i;
        }
    }
    report.parameters_checked = theta.size();
    return report;
}

GradCheckReport grad_check(std::uint64_t seed, double tolerance) {
    Rng rng(seed);
    const int inputs = 4 + static_cast<int>(rng.below(29));
    const int hidden = 2 + static_cast<int>(rng.below(7));
    const int classes = 2 + static_cast<int>(rng.below(5));
    const int batch_size = 1 + static_cast<int>(rng.below(6));
    auto model = ProbeModel::random(inputs, hidden, classes, rng.next());
    // Non-zero biases so the check also covers them away from the origin.
    for (auto& t : model.theta()) {
        t += 0.1 * rng.normal();
    }
    std::vector<Sample> batch(static_cast<std::size_t>(batch_size));
    for (auto& s : batch) {
        s.x.resize(static_cast<std::size_t>(inputs));
        for (auto& v : s.x) {
            v = rng.uniform();
        }
        s.label = static_cast<int>(rng.below(static_cast<std::uint64_t>(classes)));
    }
    auto report = compare_gradients(model, batch);
    if (!(report.max_relative_error < tolerance)) {
        throw GradMismatch(report.worst_parameter,
                           "gradient mismatch at parameter " + std::to_string(report.worst_parameter) +
                               ": relative error " + std::to_string(report.max_relative_error));
    }
    return report;
}

Json ProbeReport::to_json() const {
    Json j;
    j["accuracy"] = accuracy;
    j["chance"] = chance;
    j["ratio"] = ratio;
    j["epochs"] = epochs;
    j["seed"] = seed;
    return j;
}

namespace {

constexpr char model_magic[8] = {'P', 'F', 'R', 'A', 'C', 'M', 'D', 'L'};

template <typename T>
T to_little(T v) {
    if constexpr (std::endian::native == std::endian::big) {
        auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
        std::reverse(bytes.begin(), bytes.end());
        return std::bit_cast<T>(bytes);
    }
    return v;
}

}  // namespace

void write_model(const std::filesystem::path& path, const ProbeModel& model, const Json& config) {
    Json header;
    header["inputs"] = model.inputs();
    header["hidden"] = model.hidden();
    header["classes"] = model.classes();
    header["parameters"] = model.theta().size();
    header["config"] = config;
    const std::string text = dump_canonical(header, -1);

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoFailure(path.string(), "cannot open model file for writing");
    }
    out.write(model_magic, sizeof(model_magic));
    const auto length = to_little(static_cast<std::uint64_t>(text.size()));
    out.write(reinterpret_cast<const char*>(&length), sizeof(length));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (double v : model.theta()) {
        const auto le = to_little(std::bit_cast<std::uint64_t>(v));
        out.write(reinterpret_cast<const char*>(&le), sizeof(le));
    }
    if (!out) {
        throw IoFailure(path.string(), "write failed");
    }
}

ProbeModel read_model(const std::filesystem::path& path, Json* config) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoFailure(path.string(), "cannot open model file");
    }
    char magic[8];
    std::uint64_t length = 0;
    in.read(magic, sizeof(magic));
    in.read(reinterpret_cast<char*>(&length), sizeof(length));
    if (!in || std::memcmp(magic, model_magic, sizeof(magic)) != 0) {
        throw IoFailure(path.string(), "not a probe model file");
    }
    length = to_little(length);
    std::string text(length, '\0');
    in.read(text.data(), static_cast<std::streamsize>(length));
    Json header;
    try {
        header = Json::parse(text);
    } catch (const Json::exception&) {
        throw IoFailure(path.string(), "model header is not JSON");
    }
    ProbeModel model(header.at("inputs").get<int>(), header.at("hidden").get<int>(),
                     header.at("classes").get<int>());
    for (auto& v : model.theta()) {
        std::uint64_t bits = 0;
        in.read(reinterpret_cast<char*>(&bits), sizeof(bits));
        v = std::bit_cast<double>(to_little(bits));
    }
    if (!in) {
        throw IoFailure(path.string(), "model file truncated");
    }
    if (config) {
        *config = header.at("config");
    }
    return model;
}

}  // namespace pfrac
