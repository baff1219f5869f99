#include "pfrac/dataset_io.hpp"

#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include "pfrac/errors.hpp"
#include "pfrac/liep.hpp"
#include "pfrac/parallel.hpp"
#include "pfrac/png_io.hpp"

namespace pfrac {

namespace fs = std::filesystem;

std::string to_string(GeneratorKind kind) {
    switch (kind) {
    case GeneratorKind::fractal:
        return "fractal";
    case GeneratorKind::gaussian:
        return "gaussian";
    case GeneratorKind::uniform:
        return "uniform";
    case GeneratorKind::real_affine:
        return "real-affine";
    case GeneratorKind::real_elastic:
        return "real-elastic";
    case GeneratorKind::real_polynomial:
        return "real-polynomial";
    }
    return "?";
}

GeneratorKind generator_kind_from_string(const std::string& name) {
    for (auto kind : {GeneratorKind::fractal, GeneratorKind::gaussian, GeneratorKind::uniform,
                      GeneratorKind::real_affine, GeneratorKind::real_elastic, GeneratorKind::real_polynomial}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    throw CorruptManifest("unknown generator '" + name + "'");
}

GeneratorKind DatasetManifest::generator() const {
    if (std::holds_alternative<FractalSource>(source)) {
        return GeneratorKind::fractal;
    }
    if (const auto* noise = std::get_if<NoiseSource>(&source)) {
        return noise->kind == NoiseKind::gaussian ? GeneratorKind::gaussian : GeneratorKind::uniform;
    }
    switch (std::get<RealImageSource>(source).transform) {
    case TransformKind::elastic:
        return GeneratorKind::real_elastic;
    case TransformKind::polynomial:
        return GeneratorKind::real_polynomial;
    default:
        return GeneratorKind::real_affine;
    }
}

namespace {

std::size_t expected_eps_length(const DatasetManifest& m) {
    if (const auto* f = std::get_if<FractalSource>(&m.source)) {
        return 6 * f->code.size();
    }
    if (std::holds_alternative<NoiseSource>(m.source)) {
        return 2;
    }
    return transform_parameter_count(std::get<RealImageSource>(m.source).transform);
}

}  // namespace

void DatasetManifest::validate() const {
    if (format_version != manifest_format_version) {
        throw VersionMismatch("manifest format " + std::to_string(format_version) + ", expected " +
                              std::to_string(manifest_format_version));
    }
    if (count < 1 || entries.size() != static_cast<std::size_t>(count)) {
        throw CorruptManifest("manifest lists " + std::to_string(entries.size()) + " entries for L = " +
                              std::to_string(count));
    }
    const std::size_t eps_length = expected_eps_length(*this);
    std::set<std::string> files;
    std::vector<bool> seen(entries.size(), false);
    for (const auto& e : entries) {
        if (e.class_index < 0 || e.class_index >= count) {
            throw CorruptManifest("class index " + std::to_string(e.class_index) + " out of range");
        }
        if (seen[static_cast<std::size_t>(e.class_index)]) {
            throw CorruptManifest("duplicate class index " + std::to_string(e.class_index));
        }
        seen[static_cast<std::size_t>(e.class_index)] = true;
        if (!files.insert(e.file).second) {
            throw CorruptManifest("duplicate filename " + e.file);
        }
        if (e.eps.size() != eps_length) {
            throw CorruptManifest("class " + std::to_string(e.class_index) + " has " +
                                  std::to_string(e.eps.size()) + " eps components, expected " +
                                  std::to_string(eps_length));
        }
        if (e.resamples < 0) {
            throw CorruptManifest("negative resample count");
        }
    }
    if (const auto* f = std::get_if<FractalSource>(&source)) {
        try {
            f->code.validate();
            f->render.validate();
        } catch (const InvalidParams& err) {
            throw CorruptManifest(std::string("invalid fractal source: ") + err.what());
        }
    }
}

NoiseSpec noise_spec(const DatasetManifest& m) {
    const auto& src = std::get<NoiseSource>(m.source);
    return NoiseSpec{src.kind, src.params, m.delta, m.seed};
}

TransformSpec transform_spec(const DatasetManifest& m) {
    const auto& src = std::get<RealImageSource>(m.source);
    return TransformSpec{src.transform, m.delta, src.elastic_alpha, src.elastic_sigma, m.seed};
}

std::string image_filename(int class_index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "images/%06d.png", class_index);
    return buf;
}

namespace {

Json render_to_json(const RenderConfig& r) {
    Json j;
    j["points"] = r.point_count;
    j["burn_in"] = r.burn_in;
    j["width"] = r.width;
    j["height"] = r.height;
    j["padding"] = r.padding;
    j["patch_mode"] = to_string(r.patch_mode);
    j["seed"] = r.rng_seed;
    return j;
}

RenderConfig render_from_json(const Json& j) {
    RenderConfig r;
    r.point_count = j.at("points").get<int>();
    r.burn_in = j.at("burn_in").get<int>();
    r.width = j.at("width").get<int>();
    r.height = j.at("height").get<int>();
    r.padding = json_number(j.at("padding"));
    r.patch_mode = patch_mode_from_string(j.at("patch_mode").get<std::string>());
    r.rng_seed = j.at("seed").get<std::uint64_t>();
    return r;
}

Json source_to_json(const DatasetManifest& m) {
    Json j;
    if (const auto* f = std::get_if<FractalSource>(&m.source)) {
        j["code"] = Json::parse(ifs_to_json(f->code, f->code_seed));
        j["render"] = render_to_json(f->render);
    } else if (const auto* n = std::get_if<NoiseSource>(&m.source)) {
        j["params"] = n->params;
        j["width"] = n->width;
        j["height"] = n->height;
    } else {
        const auto& r = std::get<RealImageSource>(m.source);
        j["input"] = r.input;
        j["canny"] = r.canny;
        j["canny_low"] = r.thresholds.low;
        j["canny_high"] = r.thresholds.high;
        j["transform"] = to_string(r.transform);
        j["elastic_alpha"] = r.elastic_alpha;
        j["elastic_sigma"] = r.elastic_sigma;
    }
    return j;
}

}  // namespace

std::string serialize_manifest(const DatasetManifest& m) {
    Json doc;
    doc["format_version"] = m.format_version;
    doc["generator"] = to_string(m.generator());
    doc["delta"] = m.delta;
    doc["L"] = m.count;
    doc["seed"] = m.seed;
    doc["source"] = source_to_json(m);
    Json entries = Json::array();
    for (const auto& e : m.entries) {
        Json item;
        item["class"] = e.class_index;
        item["eps"] = e.eps;
        item["file"] = e.file;
        item["resamples"] = e.resamples;
        entries.push_back(std::move(item));
    }
    doc["entries"] = std::move(entries);
    return dump_canonical(doc);
}

DatasetManifest parse_manifest(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::exception& e) {
        throw CorruptManifest(std::string("manifest is not valid JSON: ") + e.what());
    }
    DatasetManifest m;
    try {
        m.format_version = doc.at("format_version").get<int>();
        if (m.format_version != manifest_format_version) {
            throw VersionMismatch("manifest format " + std::to_string(m.format_version) + ", expected " +
                                  std::to_string(manifest_format_version));
        }
        const auto generator = generator_kind_from_string(doc.at("generator").get<std::string>());
        m.delta = json_number(doc.at("delta"));
        m.count = doc.at("L").get<int>();
        m.seed = doc.at("seed").get<std::uint64_t>();
        const auto& src = doc.at("source");
        switch (generator) {
        case GeneratorKind::fractal: {
            FractalSource f;
            const auto code = ifs_from_json(src.at("code").dump());
            f.code = code.code;
            f.code_seed = code.seed;
            f.render = render_from_json(src.at("render"));
            m.source = std::move(f);
            break;
        }
        case GeneratorKind::gaussian:
        case GeneratorKind::uniform: {
            NoiseSource n;
            n.kind = generator == GeneratorKind::gaussian ? NoiseKind::gaussian : NoiseKind::uniform;
            n.params = {json_number(src.at("params").at(0)), json_number(src.at("params").at(1))};
            n.width = src.at("width").get<int>();
            n.height = src.at("height").get<int>();
            m.source = n;
            break;
        }
        default: {
            RealImageSource r;
            r.input = src.at("input").get<std::string>();
            r.canny = src.at("canny").get<bool>();
            r.thresholds = {json_number(src.at("canny_low")), json_number(src.at("canny_high"))};
            r.transform = transform_kind_from_string(src.at("transform").get<std::string>());
            r.elastic_alpha = json_number(src.at("elastic_alpha"));
            r.elastic_sigma = json_number(src.at("elastic_sigma"));
            m.source = std::move(r);
            if (m.generator() != generator) {
                throw CorruptManifest("generator does not match the recorded transform");
            }
            break;
        }
        }
        for (const auto& item : doc.at("entries")) {
            ManifestEntry e;
            e.class_index = item.at("class").get<int>();
            for (const auto& v : item.at("eps")) {
                e.eps.push_back(json_number(v));
            }
            e.file = item.at("file").get<std::string>();
            e.resamples = item.at("resamples").get<int>();
            m.entries.push_back(std::move(e));
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw CorruptManifest(std::string("malformed manifest: ") + e.what());
    }
    m.validate();
    return m;
}

Json WriteSummary::to_json() const {
    Json j;
    j["images"] = images_written;
    j["search"] = timings.search_seconds;
    j["render"] = timings.render_seconds;
    j["total"] = timings.total_seconds;
    return j;
}

WriteSummary write_dataset(std::span<const LabeledImage> images, const DatasetManifest& manifest,
                           const fs::path& out_dir, Timings timings, unsigned threads) {
    const auto start = std::chrono::steady_clock::now();
    manifest.validate();
    if (images.size() != manifest.entries.size()) {
        throw InvalidParams("image count does not match manifest entries");
    }
    std::error_code ec;
    fs::create_directories(out_dir / "images", ec);
    if (ec) {
        throw IoFailure((out_dir / "images").string(), "cannot create directory");
    }
    // Without manifest.json the directory is not a dataset; drop any stale one first.
    fs::remove(out_dir / "manifest.json", ec);

    std::vector<const GrayImage*> by_class(manifest.entries.size(), nullptr);
    for (const auto& item : images) {
        if (item.label < 0 || static_cast<std::size_t>(item.label) >= by_class.size()) {
            throw InvalidParams("image label out of range");
        }
        by_class[static_cast<std::size_t>(item.label)] = &item.image;
    }
    parallel_for(manifest.entries.size(), threads, [&](std::size_t i) {
        const auto& entry = manifest.entries[i];
        const GrayImage* img = by_class[static_cast<std::size_t>(entry.class_index)];
        if (!img) {
            throw InvalidParams("no image for class " + std::to_string(entry.class_index));
        }
        write_png(out_dir / entry.file, *img);
    });

    const auto manifest_path = out_dir / "manifest.json";
    {
        std::ofstream out(manifest_path, std::ios::binary);
        out << serialize_manifest(manifest);
        if (!out) {
            throw IoFailure(manifest_path.string(), "cannot write manifest");
        }
    }
    const std::chrono::duration<double> spent = std::chrono::steady_clock::now() - start;
    timings.total_seconds += spent.count();
    return WriteSummary{images.size(), timings};
}

Dataset read_dataset(const fs::path& dir) {
    const auto manifest_path = dir / "manifest.json";
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in) {
        throw CorruptManifest("no manifest.json in " + dir.string());
    }
    std::stringstream text;
    text << in.rdbuf();
    Dataset ds;
    ds.manifest = parse_manifest(text.str());

    int width = 0, height = 0;
    if (const auto* f = std::get_if<FractalSource>(&ds.manifest.source)) {
        width = f->render.width;
        height = f->render.height;
    } else if (const auto* n = std::get_if<NoiseSource>(&ds.manifest.source)) {
        width = n->width;
        height = n->height;
    }
    ds.images.resize(ds.manifest.entries.size());
    for (const auto& e : ds.manifest.entries) {
        const auto path = dir / e.file;
        if (!fs::exists(path)) {
            throw MissingImage(e.file);
        }
        auto img = read_png_gray(path);
        if (width == 0) {
            width = img.width;
            height = img.height;
        }
        if (img.width != width || img.height != height) {
            throw CorruptManifest("image " + e.file + " has unexpected size");
        }
        ds.images[static_cast<std::size_t>(e.class_index)] = std::move(img);
    }
    return ds;
}

std::vector<GrayImage> regenerate_images(const DatasetManifest& manifest, unsigned threads) {
    manifest.validate();
    std::vector<GrayImage> out(manifest.entries.size());
    if (const auto* f = std::get_if<FractalSource>(&manifest.source)) {
        parallel_for(out.size(), threads, [&](std::size_t i) {
            const auto& e = manifest.entries[i];
            const Perturbation p{e.eps, manifest.delta};
            out[static_cast<std::size_t>(e.class_index)] = render(apply_perturbation(f->code, p), f->render);
        });
    } else if (const auto* n = std::get_if<NoiseSource>(&manifest.source)) {
        const auto spec = noise_spec(manifest);
        parallel_for(out.size(), threads, [&](std::size_t i) {
            const auto& e = manifest.entries[i];
            const auto params = perturbed_params(spec, {e.eps[0], e.eps[1]});
            out[static_cast<std::size_t>(e.class_index)] =
                render_noise_image(spec.kind, params, n->width, n->height, spec.seed);
        });
    } else {
        const auto& r = std::get<RealImageSource>(manifest.source);
        const auto spec = transform_spec(manifest);
        const auto base = prepare_real_base(read_rgb_image(r.input), r.canny, r.thresholds);
        DisplacementField field;
        if (spec.kind == TransformKind::elastic) {
            field = make_displacement_field(base.width, base.height, spec.elastic_sigma, spec.seed);
        }
        parallel_for(out.size(), threads, [&](std::size_t i) {
            const auto& e = manifest.entries[i];
            out[static_cast<std::size_t>(e.class_index)] =
                render_real_class(base, r.canny, spec, e.eps, e.class_index, &field);
        });
    }
    return out;
}

void write_montage(std::span<const GrayImage> images, std::size_t k, const fs::path& out_path) {
    write_png(out_path, montage(images, k));
}

}  // namespace pfrac
