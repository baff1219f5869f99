#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "doctest.h"
#include "fixtures.hpp"
#include "pfrac/errors.hpp"
#include "pfrac/probe.hpp"
#include "pfrac/rng.hpp"

using namespace pfrac;

namespace {

std::vector<Sample> random_batch(Rng& rng, int inputs, int classes, int n) {
    std::vector<Sample> batch(static_cast<std::size_t>(n));
    for (auto& s : batch) {
        s.x.resize(static_cast<std::size_t>(inputs));
        for (auto& v : s.x) {
            v = rng.uniform();
        }
        s.label = static_cast<int>(rng.below(static_cast<std::uint64_t>(classes)));
    }
    return batch;
}

std::vector<Sample> black_white(int n_each, int inputs) {
    std::vector<Sample> out;
    for (int i = 0; i < n_each; ++i) {
        out.push_back({std::vector<double>(static_cast<std::size_t>(inputs), 0.0), 0});
        out.push_back({std::vector<double>(static_cast<std::size_t>(inputs), 1.0), 1});
    }
    return out;
}

}  // namespace

TEST_CASE("parameter count and layout") {
    CHECK(ProbeModel::parameter_count(16, 4, 3) == 16 * 4 + 4 + 4 * 3 + 3);
    const ProbeModel m(16, 4, 3);
    CHECK(m.theta().size() == ProbeModel::parameter_count(16, 4, 3));
    const auto r = ProbeModel::random(100, 64, 10, 1);
    CHECK(r.theta().size() == ProbeModel::parameter_count(100, 64, 10));
}

TEST_CASE("softmax is a stable probability vector") {
    const std::vector<double> logits{1000.0, 999.0, -1000.0, 0.0};
    const auto p = softmax(logits);
    CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) <= 1e-9);
    for (double v : p) {
        CHECK(v >= 0.0);
        CHECK(std::isfinite(v));
    }
    CHECK(p[0] == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))));
    Rng rng(4);
    const auto model = ProbeModel::random(20, 8, 5, 2);
    for (const auto& s : random_batch(rng, 20, 5, 50)) {
        const auto q = model.probabilities(s.x);
        CHECK(std::abs(std::accumulate(q.begin(), q.end(), 0.0) - 1.0) <= 1e-9);
    }
}

TEST_CASE("zero parameters give loss ln K") {
    Rng rng(1);
    for (const int k : {2, 3, 16, 100}) {
        const ProbeModel m(12, 5, k);
        const auto loss = lpce_loss(m, random_batch(rng, 12, k, 7)).loss;
        CHECK(loss == doctest::Approx(std::log(static_cast<double>(k))).epsilon(1e-15));
    }
}

TEST_CASE("a saturated true logit drives the loss to zero") {
    ProbeModel m(1, 1, 3);
    auto t = m.theta();
    // b2 of class 1 dominates.
    t[t.size() - 2] = 800.0;
    const std::vector<Sample> batch{{{0.3}, 1}};
    CHECK(lpce_loss(m, batch).loss < 1e-300);
    const std::vector<Sample> wrong{{{0.3}, 0}};
    CHECK(lpce_loss(m, wrong).loss == doctest::Approx(800.0));
}

TEST_CASE("analytic gradients match finite differences") {
    Rng rng(7);
    const auto model = ProbeModel::random(16, 4, 3, 11);
    const auto batch = random_batch(rng, 16, 3, 5);
    const auto report = compare_gradients(model, batch);
    CHECK(report.parameters_checked == model.theta().size());
    CHECK(report.max_relative_error < 1e-3);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        CHECK(grad_check(seed).max_relative_error < 1e-3);
    }
}

TEST_CASE("a broken gradient is reported with its parameter") {
    CHECK_THROWS_AS(grad_check(0, 0.0), GradMismatch);
    try {
        grad_check(0, 0.0);
    } catch (const GradMismatch& e) {
        CHECK(std::string(e.what()).find("parameter") != std::string::npos);
    }
}

TEST_CASE("zero inputs give bias gradients in closed form") {
    const int n = 6, h = 3, k = 4;
    auto model = ProbeModel::random(n, h, k, 5);
    auto theta = model.theta();
    // Positive hidden biases keep every unit active.
    const std::size_t b1 = static_cast<std::size_t>(n * h);
    const std::size_t w2 = b1 + h;
    const std::size_t b2 = w2 + static_cast<std::size_t>(h * k);
    for (int j = 0; j < h; ++j) {
        theta[b1 + j] = 0.5 + j;
    }
    for (int c = 0; c < k; ++c) {
        theta[b2 + c] = 0.1 * c;
    }
    const std::vector<Sample> batch{{std::vector<double>(n, 0.0), 2}};
    const auto g = lpce_loss(model, batch).grad;
    auto expected = softmax(model.logits(batch[0].x));
    expected[2] -= 1.0;
    for (int c = 0; c < k; ++c) {
        CHECK(g[b2 + c] == expected[c]);
    }
    for (std::size_t i = 0; i < b1; ++i) {
        CHECK(g[i] == 0.0);
    }
}

TEST_CASE("duplicating a batch leaves loss and gradient unchanged") {
    Rng rng(9);
    const auto model = ProbeModel::random(10, 6, 4, 3);
    auto batch = random_batch(rng, 10, 4, 8);
    const auto once = lpce_loss(model, batch);
    auto doubled = batch;
    doubled.insert(doubled.end(), batch.begin(), batch.end());
    const auto twice = lpce_loss(model, doubled);
    CHECK(twice.loss == doctest::Approx(once.loss).epsilon(1e-14));
    for (std::size_t i = 0; i < once.grad.size(); ++i) {
        REQUIRE(std::abs(twice.grad[i] - once.grad[i]) <= 1e-14 * (1.0 + std::abs(once.grad[i])));
    }
}

TEST_CASE("labels outside the class range are rejected") {
    const ProbeModel m(2, 2, 2);
    const std::vector<Sample> bad{{{0.0, 0.0}, 2}};
    CHECK_THROWS_AS(lpce_loss(m, bad), InvalidParams);
    const std::vector<Sample> short_x{{{0.0}, 0}};
    CHECK_THROWS_AS(lpce_loss(m, short_x), InvalidParams);
}

TEST_CASE("black versus white is learned perfectly") {
    const auto data = black_white(16, 64);
    TrainConfig cfg;
    cfg.hidden = 8;
    const auto r = train(data, data, 2, cfg);
    CHECK(r.holdout_accuracy == 1.0);
    REQUIRE(r.epoch_losses.size() == 30);
    for (std::size_t e = 1; e < r.epoch_losses.size(); ++e) {
        CHECK(std::isfinite(r.epoch_losses[e]));
        CHECK(r.epoch_losses[e] <= r.epoch_losses[e - 1]);
    }
}

TEST_CASE("training needs two classes") {
    const auto data = black_white(2, 4);
    CHECK_THROWS_AS(train(data, data, 1, TrainConfig{}), InvalidParams);
    TrainConfig bad;
    bad.holdout_fraction = 1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidParams);
}

TEST_CASE("training is bit-for-bit deterministic") {
    Rng rng(3);
    const auto data = random_batch(rng, 32, 4, 64);
    TrainConfig cfg;
    cfg.hidden = 16;
    cfg.epochs = 5;
    cfg.seed = 21;
    const auto a = train(data, data, 4, cfg);
    const auto b = train(data, data, 4, cfg);
    REQUIRE(a.model.theta().size() == b.model.theta().size());
    CHECK(std::memcmp(a.model.theta().data(), b.model.theta().data(), a.model.theta().size_bytes()) == 0);
    cfg.seed = 22;
    CHECK_FALSE(train(data, data, 4, cfg).model == a.model);
}

TEST_CASE("model files round-trip") {
    test::TempDir dir("model");
    const auto model = ProbeModel::random(9, 4, 3, 8);
    const Json config{{"epochs", 30}, {"seed", 8}};
    write_model(dir / "m.bin", model, config);
    Json back_config;
    const auto back = read_model(dir / "m.bin", &back_config);
    CHECK(back == model);
    CHECK(back_config == config);
    {
        std::ofstream(dir / "bad.bin") << "not a model";
    }
    CHECK_THROWS_AS(read_model(dir / "bad.bin"), Error);
}

TEST_CASE("image inputs are area averaged to the probe resolution") {
    GrayImage img(4, 4, 0);
    img.at(0, 0) = img.at(1, 0) = img.at(0, 1) = img.at(1, 1) = 255;
    img.at(2, 2) = 255;
    const auto x = image_to_input(img, 2);
    REQUIRE(x.size() == 4);
    CHECK(x[0] == 1.0);
    CHECK(x[1] == 0.0);
    CHECK(x[2] == 0.0);
    CHECK(x[3] == 0.25);
    CHECK(image_to_input(img, 4) == std::vector<double>{1, 1, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0});
}

TEST_CASE("probe report JSON") {
    const ProbeReport r{0.5, 0.0625, 8.0, 30, 3};
    const auto j = r.to_json();
    CHECK(dump_canonical(j, -1) == R"({"accuracy":0.5,"chance":0.0625,"ratio":8.0,"epochs":30,"seed":3})");
}
