#pragma once

#include <Eigen/Core>

namespace lrr {

// Grayscale image, intensities nominally in [0, 255].
using Image = Eigen::MatrixXd;

inline Image clamp_intensity(const Image& img, double lo = 0.0, double hi = 255.0)
{
  return img.cwiseMax(lo).cwiseMin(hi);
}

}  // namespace lrr
