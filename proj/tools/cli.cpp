#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pfrac/errors.hpp"
#include "pfrac/generate.hpp"
#include "pfrac/json_canonical.hpp"
#include "pfrac/probe_data.hpp"

namespace pfrac::cli {
namespace {

namespace fs = std::filesystem;

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoFailure(path.string(), "cannot open");
    }
    std::stringstream text;
    text << in.rdbuf();
    return text.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        throw IoFailure(path.string(), "cannot write");
    }
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct SearchArgs {
    int n_maps = default_map_count;
    double sigma = 3.5;
    double tol = 1e-6;
    int count = 1;
    std::uint64_t seed = 0;
    std::string out;
};

struct GenerateArgs {
    std::string code;
    double sigma = 3.5;
    double tol = 1e-6;
    int n_maps = default_map_count;
    double delta = 0.1;
    int count = 1000;
    std::uint64_t seed = 0;
    int size = 256;
    int points = 100'000;
    int burn_in = 100;
    double padding = 0.05;
    std::string patch_mode = "single-pixel";
    std::string out;
    std::size_t montage = 0;
    unsigned threads = 0;
};

struct NoiseArgs {
    std::string kind = "gaussian";
    double mu = 0.5;
    double sd = 0.15;
    double low = 0.0;
    double high = 1.0;
    double delta = 0.1;
    int count = 1000;
    std::uint64_t seed = 0;
    int size = 256;
    std::string out;
    unsigned threads = 0;
};

struct RealArgs {
    std::string input;
    bool canny = false;
    double canny_low = 50.0;
    double canny_high = 150.0;
    std::string transform = "affine";
    double delta = 0.1;
    int count = 1000;
    std::uint64_t seed = 0;
    double alpha = 0.08;
    double sigma_e = 8.0;
    std::string out;
    unsigned threads = 0;
};

struct ProbeArgs {
    std::string dataset;
    int epochs = 30;
    double lr = 0.1;
    int batch = 32;
    int hidden = 64;
    int resolution = 64;
    double holdout = 0.25;
    std::uint64_t seed = 0;
    std::string model_out;
    unsigned threads = 0;
};

struct MontageArgs {
    std::string dataset;
    std::size_t k = 16;
    std::string out;
};

struct SigmaArgs {
    std::string code;
};

void echo_config(std::ostream& err, const std::string& command, const Json& config) {
    Json doc;
    doc["command"] = command;
    doc["config"] = config;
    err << dump_canonical(doc, -1) << '\n';
}

int cmd_search(const SearchArgs& a, std::ostream& out, std::ostream& err) {
    echo_config(err, "search",
                Json{{"n_maps", a.n_maps}, {"sigma", a.sigma}, {"tol", a.tol}, {"count", a.count},
                     {"seed", a.seed}, {"out", a.out}});
    std::vector<std::uint64_t> seeds;
    const auto codes = search_category_set(a.count, a.n_maps, {a.sigma, a.tol}, a.seed, &seeds);
    std::string text;
    if (codes.size() == 1) {
        text = ifs_to_json(codes.front(), seeds.front());
    } else {
        Json all = Json::array();
        for (std::size_t i = 0; i < codes.size(); ++i) {
            all.push_back(Json::parse(ifs_to_json(codes[i], seeds[i])));
        }
        text = dump_canonical(all);
    }
    if (a.out.empty()) {
        out << text;
    } else {
        write_text(a.out, text);
    }
    return ok;
}

int cmd_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
    FractalDatasetParams p;
    if (!a.code.empty()) {
        p.code = ifs_from_json(read_text(a.code));
    }
    p.n_maps = a.n_maps;
    p.sigma = {a.sigma, a.tol};
    p.delta = a.delta;
    p.count = a.count;
    p.seed = a.seed;
    p.render.width = p.render.height = a.size;
    p.render.point_count = a.points;
    p.render.burn_in = a.burn_in;
    p.render.padding = a.padding;
    p.render.patch_mode = patch_mode_from_string(a.patch_mode);
    p.threads = a.threads;
    p.render.validate();
    echo_config(err, "generate",
                Json{{"code", a.code}, {"sigma", a.sigma}, {"tol", a.tol}, {"n_maps", a.n_maps},
                     {"delta", a.delta}, {"l", a.count}, {"seed", a.seed}, {"size", a.size},
                     {"points", a.points}, {"burn_in", a.burn_in}, {"padding", a.padding},
                     {"patch_mode", to_string(p.render.patch_mode)}, {"out", a.out},
                     {"montage", a.montage}, {"threads", a.threads}});

    auto ds = generate_fractal_dataset(p);
    const auto summary = write_dataset(ds.images, ds.manifest, a.out, ds.timings, a.threads);
    if (a.montage > 0) {
        std::vector<GrayImage> images;
        for (std::size_t i = 0; i < std::min(a.montage, ds.images.size()); ++i) {
            images.push_back(ds.images[i].image);
        }
        write_montage(images, a.montage, fs::path(a.out) / "montage.png");
    }
    auto report = summary.to_json();
    report["resamples"] = [&] {
        int total = 0;
        for (const auto& e : ds.manifest.entries) {
            total += e.resamples;
        }
        return total;
    }();
    out << dump_canonical(report, -1) << '\n';
    return ok;
}

int cmd_noise(const NoiseArgs& a, std::ostream& out, std::ostream& err) {
    const auto kind = noise_kind_from_string(a.kind);
    const auto spec = kind == NoiseKind::gaussian ? NoiseSpec::gaussian(a.mu, a.sd, a.delta, a.seed)
                                                  : NoiseSpec::uniform(a.low, a.high, a.delta, a.seed);
    spec.validate();
    echo_config(err, "noise",
                Json{{"kind", a.kind}, {"params", spec.params}, {"delta", a.delta}, {"l", a.count},
                     {"seed", a.seed}, {"size", a.size}, {"out", a.out}, {"threads", a.threads}});
    auto ds = generate_noise_dataset(spec, a.count, a.size, a.size, a.threads);
    const auto summary = write_dataset(ds.images, ds.manifest, a.out, ds.timings, a.threads);
    out << dump_canonical(summary.to_json(), -1) << '\n';
    return ok;
}

int cmd_realimg(const RealArgs& a, std::ostream& out, std::ostream& err) {
    RealDatasetParams p;
    p.input = a.input;
    p.canny = a.canny;
    p.thresholds = {a.canny_low, a.canny_high};
    p.transform.kind = transform_kind_from_string(a.transform);
    p.transform.delta = a.delta;
    p.transform.elastic_alpha = a.alpha;
    p.transform.elastic_sigma = a.sigma_e;
    p.transform.seed = a.seed;
    p.transform.validate();
    p.count = a.count;
    p.threads = a.threads;
    echo_config(err, "realimg",
                Json{{"input", a.input}, {"canny", a.canny}, {"canny_low", a.canny_low},
                     {"canny_high", a.canny_high}, {"transform", a.transform}, {"delta", a.delta},
                     {"l", a.count}, {"seed", a.seed}, {"alpha", a.alpha}, {"sigma_e", a.sigma_e},
                     {"out", a.out}, {"threads", a.threads}});
    auto ds = generate_real_dataset(p);
    const auto summary = write_dataset(ds.images, ds.manifest, a.out, ds.timings, a.threads);
    out << dump_canonical(summary.to_json(), -1) << '\n';
    return ok;
}

int cmd_probe(const ProbeArgs& a, std::ostream& out, std::ostream& err) {
    TrainConfig cfg;
    cfg.epochs = a.epochs;
    cfg.learning_rate = a.lr;
    cfg.batch_size = a.batch;
    cfg.hidden = a.hidden;
    cfg.resolution = a.resolution;
    cfg.holdout_fraction = a.holdout;
    cfg.seed = a.seed;
    cfg.validate();
    const Json config{{"dataset", a.dataset}, {"epochs", a.epochs}, {"lr", a.lr}, {"batch", a.batch},
                      {"hidden", a.hidden}, {"resolution", a.resolution}, {"holdout", a.holdout},
                      {"seed", a.seed}, {"model_out", a.model_out}, {"threads", a.threads}};
    echo_config(err, "probe", config);
    const auto ds = read_dataset(a.dataset);
    const auto run = run_probe(ds, cfg, a.threads);
    if (!a.model_out.empty()) {
        write_model(a.model_out, run.result.model, config);
    }
    out << dump_canonical(run.report.to_json(), -1) << '\n';
    return ok;
}

int cmd_montage(const MontageArgs& a, std::ostream& out, std::ostream& err) {
    const fs::path target = a.out.empty() ? fs::path(a.dataset) / "montage.png" : fs::path(a.out);
    echo_config(err, "montage", Json{{"dataset", a.dataset}, {"k", a.k}, {"out", target.string()}});
    const auto ds = read_dataset(a.dataset);
    write_montage(ds.images, a.k, target);
    out << target.string() << '\n';
    return ok;
}

int cmd_sigma(const SigmaArgs& a, std::ostream& out, std::ostream& err) {
    echo_config(err, "sigma", Json{{"code", a.code}});
    const auto doc = ifs_from_json(read_text(a.code));
    out << format_number(sigma_factor(doc.code)) << '\n';
    return ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Single-fractal synthetic pre-training data: generation and verification", "pfrac"};
    app.require_subcommand(1);

    SearchArgs search;
    auto* s = app.add_subcommand("search", "Search IFS codes with a target sigma factor");
    s->add_option("--n-maps", search.n_maps, "Affine maps per code")->check(CLI::Range(1, max_map_count))->capture_default_str();
    s->add_option("--sigma", search.sigma, "Target sigma factor")->check(CLI::PositiveNumber)->capture_default_str();
    s->add_option("--tol", search.tol, "Accepted |sigma - target|")->check(CLI::NonNegativeNumber)->capture_default_str();
    s->add_option("--count", search.count, "Number of distinct codes")->check(CLI::PositiveNumber)->capture_default_str();
    s->add_option("--seed", search.seed, "Random seed")->capture_default_str();
    s->add_option("--out", search.out, "Output JSON file (stdout when omitted)");

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Render a single-fractal perturbation dataset");
    auto* code_opt = g->add_option("--code", gen.code, "IFS code JSON to perturb")->check(CLI::ExistingFile);
    auto* sigma_opt = g->add_option("--sigma", gen.sigma, "Search a code with this sigma factor")
                          ->check(CLI::PositiveNumber)->capture_default_str();
    code_opt->excludes(sigma_opt);
    g->add_option("--tol", gen.tol, "Sigma tolerance for the search")->check(CLI::NonNegativeNumber)->capture_default_str();
    g->add_option("--n-maps", gen.n_maps, "Affine maps for the search")->check(CLI::Range(1, max_map_count))->capture_default_str();
    g->add_option("--delta", gen.delta, "Perturbation degree")->check(CLI::NonNegativeNumber)->capture_default_str();
    g->add_option("--l", gen.count, "Number of perturbation classes L")->check(CLI::PositiveNumber)->capture_default_str();
    g->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
    g->add_option("--size", gen.size, "Image width and height")->check(CLI::Range(8, 1 << 14))->capture_default_str();
    g->add_option("--points", gen.points, "Chaos-game iterations T")->check(CLI::PositiveNumber)->capture_default_str();
    g->add_option("--burn-in", gen.burn_in, "Discarded leading iterations")->check(CLI::NonNegativeNumber)->capture_default_str();
    g->add_option("--padding", gen.padding, "Margin per side, fraction of the box")->check(CLI::Range(0.0, 0.4999))->capture_default_str();
    g->add_option("--patch-mode", gen.patch_mode, "single-pixel | fixed-3x3 | random-3x3")
        ->check(CLI::IsMember({"single", "single-pixel", "fixed", "fixed-3x3", "random", "random-3x3"}))
        ->capture_default_str();
    g->add_option("--out", gen.out, "Dataset directory")->required();
    g->add_option("--montage", gen.montage, "Also write montage.png of the first K images (0 = none)")->capture_default_str();
    g->add_option("--threads", gen.threads, "Render threads (0 = all cores)")->capture_default_str();

    NoiseArgs noise;
    auto* n = app.add_subcommand("noise", "Render a Gaussian or uniform noise control dataset");
    n->add_option("--kind", noise.kind, "gaussian | uniform")->check(CLI::IsMember({"gaussian", "uniform"}))->capture_default_str();
    n->add_option("--mu", noise.mu, "Gaussian mean (normalized intensity)")->capture_default_str();
    n->add_option("--sd", noise.sd, "Gaussian standard deviation")->check(CLI::NonNegativeNumber)->capture_default_str();
    n->add_option("--low", noise.low, "Uniform lower bound")->capture_default_str();
    n->add_option("--high", noise.high, "Uniform upper bound")->capture_default_str();
    n->add_option("--delta", noise.delta, "Perturbation degree")->check(CLI::NonNegativeNumber)->capture_default_str();
    n->add_option("--l", noise.count, "Number of classes L")->check(CLI::PositiveNumber)->capture_default_str();
    n->add_option("--seed", noise.seed, "Random seed")->capture_default_str();
    n->add_option("--size", noise.size, "Image width and height")->check(CLI::Range(1, 1 << 14))->capture_default_str();
    n->add_option("--out", noise.out, "Dataset directory")->required();
    n->add_option("--threads", noise.threads, "Worker threads (0 = all cores)")->capture_default_str();

    RealArgs real;
    auto* r = app.add_subcommand("realimg", "Perturbation dataset from one real RGB image");
    r->add_option("--input", real.input, "PNG or PPM image")->required()->check(CLI::ExistingFile);
    r->add_flag("--canny", real.canny, "Use the Canny edge map instead of grayscale");
    r->add_option("--canny-low", real.canny_low, "Canny low threshold")->check(CLI::Range(0.0, 255.0))->capture_default_str();
    r->add_option("--canny-high", real.canny_high, "Canny high threshold")->check(CLI::Range(0.0, 255.0))->capture_default_str();
    r->add_option("--transform", real.transform, "affine | elastic | polynomial")
        ->check(CLI::IsMember({"affine", "elastic", "polynomial"}))->capture_default_str();
    r->add_option("--delta", real.delta, "Perturbation degree")->check(CLI::NonNegativeNumber)->capture_default_str();
    r->add_option("--l", real.count, "Number of classes L")->check(CLI::PositiveNumber)->capture_default_str();
    r->add_option("--seed", real.seed, "Random seed")->capture_default_str();
    r->add_option("--alpha", real.alpha, "Elastic amplitude, fraction of width")->capture_default_str();
    r->add_option("--sigma-e", real.sigma_e, "Elastic smoothing width in pixels")->check(CLI::PositiveNumber)->capture_default_str();
    r->add_option("--out", real.out, "Dataset directory")->required();
    r->add_option("--threads", real.threads, "Worker threads (0 = all cores)")->capture_default_str();

    ProbeArgs probe;
    auto* p = app.add_subcommand("probe", "Train the learnability probe on a dataset");
    p->add_option("--dataset", probe.dataset, "Dataset directory")->required()->check(CLI::ExistingDirectory);
    p->add_option("--epochs", probe.epochs, "Training epochs")->check(CLI::PositiveNumber)->capture_default_str();
    p->add_option("--lr", probe.lr, "SGD learning rate")->check(CLI::PositiveNumber)->capture_default_str();
    p->add_option("--batch", probe.batch, "Mini-batch size")->check(CLI::PositiveNumber)->capture_default_str();
    p->add_option("--hidden", probe.hidden, "Hidden units")->check(CLI::PositiveNumber)->capture_default_str();
    p->add_option("--resolution", probe.resolution, "Input down-sample side")->check(CLI::PositiveNumber)->capture_default_str();
    p->add_option("--holdout", probe.holdout, "Held-out share of crop views")->check(CLI::Range(0.01, 0.99))->capture_default_str();
    p->add_option("--seed", probe.seed, "Random seed")->capture_default_str();
    p->add_option("--model-out", probe.model_out, "Write the trained model here");
    p->add_option("--threads", probe.threads, "Threads for holdout rendering (0 = all cores)")->capture_default_str();

    MontageArgs mont;
    auto* m = app.add_subcommand("montage", "Tile the first K images of a dataset");
    m->add_option("--dataset", mont.dataset, "Dataset directory")->required()->check(CLI::ExistingDirectory);
    m->add_option("--k", mont.k, "Number of images")->check(CLI::PositiveNumber)->capture_default_str();
    m->add_option("--out", mont.out, "Output PNG (default: <dataset>/montage.png)");

    SigmaArgs sig;
    auto* sg = app.add_subcommand("sigma", "Print the sigma factor of an IFS code");
    sg->add_option("--code", sig.code, "IFS code JSON")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    try {
        if (*s) return cmd_search(search, out, err);
        if (*g) return cmd_generate(gen, out, err);
        if (*n) return cmd_noise(noise, out, err);
        if (*r) return cmd_realimg(real, out, err);
        if (*p) return cmd_probe(probe, out, err);
        if (*m) return cmd_montage(mont, out, err);
        if (*sg) return cmd_sigma(sig, out, err);
    } catch (const SearchExhausted& e) {
        err << "error: " << e.what() << '\n';
        return search_exhausted;
    } catch (const ResampleExhausted& e) {
        err << "error: " << e.what() << '\n';
        return resample_exhausted;
    } catch (const InvalidParams& e) {
        err << "usage error: " << e.what() << '\n';
        return usage;
    } catch (const IoFailure& e) {
        err << "I/O error: " << e.what() << '\n';
        return io_error;
    } catch (const MissingImage& e) {
        err << "I/O error: " << e.what() << '\n';
        return io_error;
    } catch (const CorruptManifest& e) {
        err << "I/O error: " << e.what() << '\n';
        return io_error;
    } catch (const VersionMismatch& e) {
        err << "I/O error: " << e.what() << '\n';
        return io_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return failure;
    }
    return usage;
}

}  // namespace pfrac::cli
