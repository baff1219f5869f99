#include "pfrac/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "pfrac/errors.hpp"
#include "pfrac/shape_aug.hpp"

namespace pfrac {
namespace {

struct FileCloser {
    void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) {
        throw IoFailure(path.string(), "cannot open");
    }
    return f;
}

// libpng reports errors through longjmp; this keeps it to one function each.
[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
    auto* message = static_cast<std::string*>(png_get_error_ptr(png));
    if (message) {
        *message = msg;
    }
    png_longjmp(png, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

// Decodes to 8-bit RGB.
RgbImage decode_png(const std::filesystem::path& path) {
    auto file = open_file(path, "rb");
    unsigned char signature[8];
    if (std::fread(signature, 1, 8, file.get()) != 8 || png_sig_cmp(signature, 0, 8) != 0) {
        throw IoFailure(path.string(), "not a PNG file");
    }
    std::string message;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, png_error_fn, png_warning_fn);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoFailure(path.string(), "libpng initialization failed");
    }
    RgbImage img;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoFailure(path.string(), "PNG decode failed: " + message);
    }
    png_init_io(png, file.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);
    const auto color = png_get_color_type(png, info);
    const auto depth = png_get_bit_depth(png, info);
    if (depth == 16) {
        png_set_strip_16(png);
    }
    if (color == PNG_COLOR_TYPE_PALETTE) {
        png_set_palette_to_rgb(png);
    }
    if ((color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) && depth < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
    }
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) {
        png_set_gray_to_rgb(png);
    }
    if (color & PNG_COLOR_MASK_ALPHA) {
        png_set_strip_alpha(png);
    }
    if (png_get_valid(png, info, PNG_INFO_tRNS)) {
        png_set_tRNS_to_alpha(png);
        png_set_strip_alpha(png);
    }
    png_read_update_info(png, info);
    img = RgbImage(static_cast<int>(png_get_image_width(png, info)), static_cast<int>(png_get_image_height(png, info)));
    rows.resize(static_cast<std::size_t>(img.height));
    for (int y = 0; y < img.height; ++y) {
        rows[static_cast<std::size_t>(y)] = img.rgb.data() + static_cast<std::size_t>(y) * img.width * 3;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

bool has_png_signature(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    unsigned char sig[8] = {};
    in.read(reinterpret_cast<char*>(sig), 8);
    return in && png_sig_cmp(sig, 0, 8) == 0;
}

RgbImage read_pnm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoFailure(path.string(), "cannot open");
    }
    std::string magic;
    in >> magic;
    if (magic != "P6" && magic != "P5") {
        throw IoFailure(path.string(), "unsupported image format (expected PNG, P6 or P5)");
    }
    auto next_int = [&]() {
        in >> std::ws;
        while (in.peek() == '#') {
            std::string comment;
            std::getline(in, comment);
            in >> std::ws;
        }
        int v = -1;
        in >> v;
        return v;
    };
    const int width = next_int();
    const int height = next_int();
    const int maxval = next_int();
    if (!in || width < 1 || height < 1 || maxval != 255) {
        throw IoFailure(path.string(), "bad PNM header (only maxval 255 is supported)");
    }
    in.get();  // single whitespace before the raster
    RgbImage img(width, height);
    if (magic == "P6") {
        in.read(reinterpret_cast<char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
    } else {
        std::vector<std::uint8_t> gray(static_cast<std::size_t>(width) * height);
        in.read(reinterpret_cast<char*>(gray.data()), static_cast<std::streamsize>(gray.size()));
        for (std::size_t i = 0; i < gray.size(); ++i) {
            img.rgb[3 * i] = img.rgb[3 * i + 1] = img.rgb[3 * i + 2] = gray[i];
        }
    }
    if (!in) {
        throw IoFailure(path.string(), "PNM raster truncated");
    }
    return img;
}

}  // namespace

void write_png(const std::filesystem::path& path, const GrayImage& img) {
    auto file = open_file(path, "wb");
    std::string message;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, png_error_fn, png_warning_fn);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoFailure(path.string(), "libpng initialization failed");
    }
    std::vector<png_const_bytep> rows(static_cast<std::size_t>(img.height));
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoFailure(path.string(), "PNG encode failed: " + message);
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 1);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y) {
        rows[static_cast<std::size_t>(y)] = img.pixels.data() + static_cast<std::size_t>(y) * img.width;
    }
    png_write_rows(png, const_cast<png_bytepp>(rows.data()), static_cast<png_uint_32>(img.height));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    if (std::fflush(file.get()) != 0) {
        throw IoFailure(path.string(), "write failed");
    }
}

GrayImage read_png_gray(const std::filesystem::path& path) {
    const auto rgb = decode_png(path);
    GrayImage out(rgb.width, rgb.height);
    bool gray = true;
    for (std::size_t i = 0; i < out.pixels.size() && gray; ++i) {
        gray = rgb.rgb[3 * i] == rgb.rgb[3 * i + 1] && rgb.rgb[3 * i] == rgb.rgb[3 * i + 2];
    }
    if (!gray) {
        return to_grayscale(rgb);
    }
    for (std::size_t i = 0; i < out.pixels.size(); ++i) {
        out.pixels[i] = rgb.rgb[3 * i];
    }
    return out;
}

RgbImage read_rgb_image(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw IoFailure(path.string(), "no such file");
    }
    return has_png_signature(path) ? decode_png(path) : read_pnm(path);
}

void write_ppm(const std::filesystem::path& path, const RgbImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoFailure(path.string(), "cannot open for writing");
    }
    out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
    if (!out) {
        throw IoFailure(path.string(), "write failed");
    }
}

}  // namespace pfrac
