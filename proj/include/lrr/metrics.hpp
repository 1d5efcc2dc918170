#pragma once

#include "lrr/image.hpp"

namespace lrr {

double mse(const Image& a, const Image& b);

// 10 log10(255^2 / mse), on the 8-bit intensity scale, capped at 100 dB so
// exact matches compare cleanly.
double psnr(const Image& reference, const Image& candidate);

}  // namespace lrr
