#include <immintrin.h>

#include <algorithm>

#include "pfrac/kernels.hpp"
#include "gauss_weights.hpp"

// Per-function target attributes rather than a file-wide -mavx2, so no
// inline helper from a shared header is ever emitted with AVX2 encodings.
#define PFRAC_AVX2 __attribute__((target("avx2")))

namespace pfrac::kernels::avx2 {

PFRAC_AVX2 std::uint64_t l1_distance_u8(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        // sad gives four 64-bit partial sums of |a - b|
        acc = _mm256_add_epi64(acc, _mm256_sad_epu8(va, vb));
    }
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::uint64_t sum = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    return sum + scalar::l1_distance_u8(a + i, b + i, n - i);
}

PFRAC_AVX2 std::uint64_t count_nonzero_u8(const std::uint8_t* a, std::size_t n) {
    const __m256i zero = _mm256_setzero_si256();
    std::uint64_t count = 0;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const auto zeros = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(v, zero)));
        count += 32 - static_cast<std::uint64_t>(__builtin_popcount(zeros));
    }
    return count + scalar::count_nonzero_u8(a + i, n - i);
}

PFRAC_AVX2 void gauss5x5_i32(const std::uint8_t* in, int width, int height, std::int32_t* out) {
    if (width < 12) {
        scalar::gauss5x5_i32(in, width, height, out);
        return;
    }
    __m256i weights[5][5];
    for (int r = 0; r < 5; ++r) {
        for (int c = 0; c < 5; ++c) {
            weights[r][c] = _mm256_set1_epi32(detail::gauss5x5[r][c]);
        }
    }
    for (int y = 0; y < height; ++y) {
        const std::uint8_t* rows[5];
        for (int dy = -2; dy <= 2; ++dy) {
            rows[dy + 2] = in + static_cast<std::size_t>(std::clamp(y + dy, 0, height - 1)) * width;
        }
        std::int32_t* dst = out + static_cast<std::size_t>(y) * width;

        // Interior: every tap of x in [2, width - 3] is in range.
        int x = 2;
        for (; x + 8 <= width - 2; x += 8) {
            __m256i acc = _mm256_setzero_si256();
            for (int r = 0; r < 5; ++r) {
                for (int c = 0; c < 5; ++c) {
                    const __m128i bytes =
                        _mm_loadl_epi64(reinterpret_cast<const __m128i*>(rows[r] + x + c - 2));
                    acc = _mm256_add_epi32(acc, _mm256_mullo_epi32(_mm256_cvtepu8_epi32(bytes), weights[r][c]));
                }
            }
            _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + x), acc);
        }

        auto edge = [&](int xe) {
            std::int32_t acc = 0;
            for (int r = 0; r < 5; ++r) {
                for (int c = 0; c < 5; ++c) {
                    const int xx = std::clamp(xe + c - 2, 0, width - 1);
                    acc += detail::gauss5x5[r][c] * std::int32_t{rows[r][xx]};
                }
            }
            dst[xe] = acc;
        };
        edge(0);
        edge(1);
        for (; x < width; ++x) {
            edge(x);
        }
    }
}

PFRAC_AVX2 double dot_f64(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
    double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) {
        sum += a[i] * b[i];
    }
    return sum;
}

PFRAC_AVX2 void axpy_f64(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
    }
    for (; i < n; ++i) {
        y[i] += alpha * x[i];
    }
}

}  // namespace pfrac::kernels::avx2
