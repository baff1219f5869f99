#include <algorithm>
#include <cstdlib>

#include "pfrac/kernels.hpp"
#include "gauss_weights.hpp"

namespace pfrac::kernels::scalar {

std::uint64_t l1_distance_u8(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += static_cast<std::uint64_t>(std::abs(int{a[i]} - int{b[i]}));
    }
    return sum;
}

std::uint64_t count_nonzero_u8(const std::uint8_t* a, std::size_t n) {
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        count += a[i] != 0 ? 1 : 0;
    }
    return count;
}

void gauss5x5_i32(const std::uint8_t* in, int width, int height, std::int32_t* out) {
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            std::int32_t acc = 0;
            for (int dy = -2; dy <= 2; ++dy) {
                const int yy = std::clamp(y + dy, 0, height - 1);
                const std::uint8_t* row = in + static_cast<std::size_t>(yy) * width;
                for (int dx = -2; dx <= 2; ++dx) {
                    const int xx = std::clamp(x + dx, 0, width - 1);
                    acc += detail::gauss5x5[dy + 2][dx + 2] * std::int32_t{row[xx]};
                }
            }
            out[static_cast<std::size_t>(y) * width + x] = acc;
        }
    }
}

double dot_f64(const double* a, const double* b, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += a[i] * b[i];
    }
    return sum;
}

void axpy_f64(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += alpha * x[i];
    }
}

}  // namespace pfrac::kernels::scalar
