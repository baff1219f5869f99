#pragma once

// Data-parallel inner loops. Each kernel has a portable scalar reference
// and, where the target supports it, a vector variant; `kernels::*` picks
// the best one once at startup. Integer kernels match the reference
// bit-for-bit. Floating-point reductions differ only in summation order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace pfrac::kernels {

enum class Level { scalar, avx2, neon };

std::string_view to_string(Level level) noexcept;

/// Best level the running CPU supports.
Level detected_level() noexcept;

/// Level used by the dispatching entry points. Defaults to detected_level().
Level active_level() noexcept;

/// Forces a level (must be supported); returns the previous one. Test hook.
Level set_active_level(Level level);

bool supported(Level level) noexcept;

/// Sum of |a[i] - b[i]|.
std::uint64_t l1_distance_u8(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// Number of non-zero bytes.
std::uint64_t count_nonzero_u8(std::span<const std::uint8_t> a);

/// 5x5 Gaussian (sigma 1.4, integer weights summing to 159) with replicated
/// borders. `out` receives the unnormalized weighted sums.
void gauss5x5_i32(std::span<const std::uint8_t> in, int width, int height,
                  std::span<std::int32_t> out);

double dot_f64(std::span<const double> a, std::span<const double> b);

/// y += alpha * x
void axpy_f64(double alpha, std::span<const double> x, std::span<double> y);

// Direct access to each variant, for equivalence tests and benchmarks.
namespace scalar {
std::uint64_t l1_distance_u8(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
std::uint64_t count_nonzero_u8(const std::uint8_t* a, std::size_t n);
void gauss5x5_i32(const std::uint8_t* in, int width, int height, std::int32_t* out);
double dot_f64(const double* a, const double* b, std::size_t n);
void axpy_f64(double alpha, const double* x, double* y, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define PFRAC_HAVE_AVX2_KERNELS 1
namespace avx2 {
std::uint64_t l1_distance_u8(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
std::uint64_t count_nonzero_u8(const std::uint8_t* a, std::size_t n);
void gauss5x5_i32(const std::uint8_t* in, int width, int height, std::int32_t* out);
double dot_f64(const double* a, const double* b, std::size_t n);
void axpy_f64(double alpha, const double* x, double* y, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
#define PFRAC_HAVE_NEON_KERNELS 1
namespace neon {
std::uint64_t l1_distance_u8(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
std::uint64_t count_nonzero_u8(const std::uint8_t* a, std::size_t n);
double dot_f64(const double* a, const double* b, std::size_t n);
void axpy_f64(double alpha, const double* x, double* y, std::size_t n);
}  // namespace neon
#endif

}  // namespace pfrac::kernels
