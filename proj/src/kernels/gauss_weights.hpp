#pragma once

#include <cstdint>

namespace pfrac::kernels::detail {

// sigma = 1.4, sum 159
inline constexpr std::int32_t gauss5x5[5][5] = {
    {2, 4, 5, 4, 2},
    {4, 9, 12, 9, 4},
    {5, 12, 15, 12, 5},
    {4, 9, 12, 9, 4},
    {2, 4, 5, 4, 2},
};

inline constexpr std::int32_t gauss5x5_sum = 159;

}  // namespace pfrac::kernels::detail
