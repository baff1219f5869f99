#include <arm_neon.h>

#include "pfrac/kernels.hpp"

namespace pfrac::kernels::neon {

std::uint64_t l1_distance_u8(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    uint64x2_t acc = vdupq_n_u64(0);
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        const uint8x16_t diff = vabdq_u8(vld1q_u8(a + i), vld1q_u8(b + i));
        acc = vpadalq_u32(acc, vpaddlq_u16(vpaddlq_u8(diff)));
    }
    return vaddvq_u64(acc) + scalar::l1_distance_u8(a + i, b + i, n - i);
}

std::uint64_t count_nonzero_u8(const std::uint8_t* a, std::size_t n) {
    uint64x2_t acc = vdupq_n_u64(0);
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        const uint8x16_t v = vld1q_u8(a + i);
        const uint8x16_t ones = vshrq_n_u8(vtstq_u8(v, v), 7);
        acc = vpadalq_u32(acc, vpaddlq_u16(vpaddlq_u8(ones)));
    }
    return vaddvq_u64(acc) + scalar::count_nonzero_u8(a + i, n - i);
}

double dot_f64(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vaddq_f64(acc0, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        acc1 = vaddq_f64(acc1, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
    }
    double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) {
        sum += a[i] * b[i];
    }
    return sum;
}

void axpy_f64(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
    }
    for (; i < n; ++i) {
        y[i] += alpha * x[i];
    }
}

}  // namespace pfrac::kernels::neon
