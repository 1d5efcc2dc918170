#include "lrr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lrr {

double mse(const Image& a, const Image& b)
{
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("mse: shape mismatch");
  if (a.size() == 0) throw std::invalid_argument("mse: empty image");
  return (a - b).squaredNorm() / static_cast<double>(a.size());
}

double psnr(const Image& reference, const Image& candidate)
{
  const double err = mse(reference, candidate);
  if (err == 0.0) return 100.0;
  return std::min(100.0, 10.0 * std::log10(255.0 * 255.0 / err));
}

}  // namespace lrr
