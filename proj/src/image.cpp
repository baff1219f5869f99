#include "pfrac/image.hpp"

#include <stdexcept>

#include "pfrac/kernels.hpp"

namespace pfrac {

double mean_l1_distance(const GrayImage& a, const GrayImage& b) {
    if (a.width != b.width || a.height != b.height) {
        throw std::invalid_argument("mean_l1_distance: image sizes differ");
    }
    if (a.pixels.empty()) {
        return 0.0;
    }
    return static_cast<double>(kernels::l1_distance_u8(a.pixels, b.pixels)) /
           static_cast<double>(a.pixels.size());
}

double occupancy(const GrayImage& img) {
    if (img.pixels.empty()) {
        return 0.0;
    }
    return static_cast<double>(kernels::count_nonzero_u8(img.pixels)) /
           static_cast<double>(img.pixels.size());
}

double foreground_iou(const GrayImage& a, const GrayImage& b) {
    if (a.width != b.width || a.height != b.height) {
        throw std::invalid_argument("foreground_iou: image sizes differ");
    }
    std::size_t both = 0, either = 0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const bool fa = a.pixels[i] != 0, fb = b.pixels[i] != 0;
        both += (fa && fb) ? 1 : 0;
        either += (fa || fb) ? 1 : 0;
    }
    return either == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(either);
}

}  // namespace pfrac
