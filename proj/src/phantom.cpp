#include "grayfuzz/phantom.hpp"

#include <algorithm>
#include <cmath>

namespace grayfuzz::phantom {

GrayImage halves(std::size_t width, std::size_t height, std::uint8_t left, std::uint8_t right) {
    GrayImage img(width, height);
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            img(x, y) = x < width / 2 ? left : right;
        }
    }
    return img;
}

GrayImage constant(std::size_t width, std::size_t height, std::uint8_t value) {
    return GrayImage(width, height, value);
}

GrayImage bimodal(std::size_t width, std::size_t height, std::uint8_t background, std::uint8_t foreground) {
    GrayImage img(width, height);
    const double cx = 0.4 * static_cast<double>(width);
    const double cy = 0.45 * static_cast<double>(height);
    const double radius = 0.25 * static_cast<double>(std::min(width, height));
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            const double dx = static_cast<double>(x) - cx;
            const double dy = static_cast<double>(y) - cy;
            const bool disc = dx * dx + dy * dy <= radius * radius;
            const bool bar = x >= 3 * width / 4 && x < 7 * width / 8 && y >= height / 8 && y < 7 * height / 8;
            const double base = static_cast<double>( (disc || bar) ? foreground : background);
            const double ripple = 6.0 * std::sin(static_cast<double>(x) / 7.0) * std::cos(static_cast<double>(y) / 5.0);
            img(x, y) = static_cast<std::uint8_t>(std::floor(base + ripple + 0.5));
        }
    }
    return img;
}

} // namespace grayfuzz::phantom
