#pragma once

#include "grayfuzz/image.hpp"

namespace grayfuzz::phantom {

/// Left half `left`, right half `right` (the extra column goes right).
GrayImage halves(std::size_t width, std::size_t height, std::uint8_t left, std::uint8_t right);

/// Constant image.
GrayImage constant(std::size_t width, std::size_t height, std::uint8_t value);

/// Background near `background` with a disc and a bar near `foreground`. A
/// smooth +-6 ripple widens both histogram modes into lobes.
GrayImage bimodal(std::size_t width = 256, std::size_t height = 256, std::uint8_t background = 60,
                  std::uint8_t foreground = 180);

} // namespace grayfuzz::phantom
