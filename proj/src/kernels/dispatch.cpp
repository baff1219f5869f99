#include <atomic>
#include <cassert>
#include <stdexcept>
#include <string>

#include "pfrac/kernels.hpp"

namespace pfrac::kernels {
namespace {

struct Table {
    std::uint64_t (*l1)(const std::uint8_t*, const std::uint8_t*, std::size_t);
    std::uint64_t (*nonzero)(const std::uint8_t*, std::size_t);
    void (*gauss)(const std::uint8_t*, int, int, std::int32_t*);
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
};

constexpr Table scalar_table{scalar::l1_distance_u8, scalar::count_nonzero_u8, scalar::gauss5x5_i32,
                             scalar::dot_f64, scalar::axpy_f64};
#ifdef PFRAC_HAVE_AVX2_KERNELS
constexpr Table avx2_table{avx2::l1_distance_u8, avx2::count_nonzero_u8, avx2::gauss5x5_i32,
                           avx2::dot_f64, avx2::axpy_f64};
#endif
#ifdef PFRAC_HAVE_NEON_KERNELS
constexpr Table neon_table{neon::l1_distance_u8, neon::count_nonzero_u8, scalar::gauss5x5_i32,
                           neon::dot_f64, neon::axpy_f64};
#endif

const Table* table_for(Level level) noexcept {
    switch (level) {
#ifdef PFRAC_HAVE_AVX2_KERNELS
    case Level::avx2:
        return &avx2_table;
#endif
#ifdef PFRAC_HAVE_NEON_KERNELS
    case Level::neon:
        return &neon_table;
#endif
    default:
        return &scalar_table;
    }
}

std::atomic<Level>& level_slot() {
    static std::atomic<Level> slot{detected_level()};
    return slot;
}

const Table& active() noexcept { return *table_for(level_slot().load(std::memory_order_relaxed)); }

}  // namespace

std::string_view to_string(Level level) noexcept {
    switch (level) {
    case Level::avx2:
        return "avx2";
    case Level::neon:
        return "neon";
    default:
        return "scalar";
    }
}

bool supported(Level level) noexcept {
    switch (level) {
    case Level::scalar:
        return true;
    case Level::avx2:
#ifdef PFRAC_HAVE_AVX2_KERNELS
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    case Level::neon:
#ifdef PFRAC_HAVE_NEON_KERNELS
        return true;
#else
        return false;
#endif
    }
    return false;
}

Level detected_level() noexcept {
    if (supported(Level::avx2)) {
        return Level::avx2;
    }
    if (supported(Level::neon)) {
        return Level::neon;
    }
    return Level::scalar;
}

Level active_level() noexcept { return level_slot().load(); }

Level set_active_level(Level level) {
    if (!supported(level)) {
        throw std::invalid_argument("kernel level not supported here: " + std::string(to_string(level)));
    }
    return level_slot().exchange(level);
}

std::uint64_t l1_distance_u8(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    assert(a.size() == b.size());
    return active().l1(a.data(), b.data(), a.size());
}

std::uint64_t count_nonzero_u8(std::span<const std::uint8_t> a) {
    return active().nonzero(a.data(), a.size());
}

void gauss5x5_i32(std::span<const std::uint8_t> in, int width, int height, std::span<std::int32_t> out) {
    assert(in.size() == static_cast<std::size_t>(width) * height && out.size() == in.size());
    active().gauss(in.data(), width, height, out.data());
}

double dot_f64(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    return active().dot(a.data(), b.data(), a.size());
}

void axpy_f64(double alpha, std::span<const double> x, std::span<double> y) {
    assert(x.size() == y.size());
    active().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace pfrac::kernels
